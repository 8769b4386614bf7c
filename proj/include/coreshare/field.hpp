#ifndef CORESHARE_FIELD_HPP
#define CORESHARE_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coreshare/errors.hpp"

namespace coreshare {

using FieldElement = std::uint64_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

/// Smallest prime >= m, by trial division.
inline std::uint64_t smallest_prime_at_least(std::uint64_t m) {
    if (m < 2) {
        throw InputError("smallest_prime_at_least needs m >= 2");
    }
    while (!is_prime(m)) {
        ++m;
    }
    return m;
}

/// Arithmetic modulo a prime below 2^32, so products fit in 64 bits.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p >= (std::uint64_t{1} << 32) || !is_prime(p)) {
            throw InputError("field modulus " + std::to_string(p) + " is not a prime below 2^32");
        }
    }

    std::uint64_t prime() const { return p_; }

    FieldElement reduce(std::int64_t a) const {
        const auto p = static_cast<std::int64_t>(p_);
        const auto r = a % p;
        return static_cast<FieldElement>(r < 0 ? r + p : r);
    }
    FieldElement add(FieldElement a, FieldElement b) const { return (a + b) % p_; }
    FieldElement sub(FieldElement a, FieldElement b) const { return (a + p_ - b) % p_; }
    FieldElement mul(FieldElement a, FieldElement b) const { return (a * b) % p_; }
    FieldElement neg(FieldElement a) const { return a == 0 ? 0 : p_ - a; }

    FieldElement pow(FieldElement a, std::uint64_t e) const {
        FieldElement result = 1 % p_;
        a %= p_;
        while (e != 0) {
            if (e & 1U) {
                result = mul(result, a);
            }
            a = mul(a, a);
            e >>= 1U;
        }
        return result;
    }

    FieldElement inverse(FieldElement a) const {
        if (a % p_ == 0) {
            throw InputError("zero has no inverse");
        }
        return pow(a, p_ - 2);
    }

    bool contains(FieldElement a) const { return a < p_; }

private:
    std::uint64_t p_;
};

struct FieldMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t p = 2;
    std::vector<FieldElement> data;

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c, std::uint64_t prime)
        : rows(r), cols(c), p(prime), data(r * c, 0) {}

    static FieldMatrix from_rows(const std::vector<std::vector<FieldElement>>& rows_in, std::size_t cols,
                                 std::uint64_t prime) {
        FieldMatrix m(rows_in.size(), cols, prime);
        for (std::size_t i = 0; i < rows_in.size(); ++i) {
            if (rows_in[i].size() != cols) {
                throw InputError("ragged matrix rows");
            }
            for (std::size_t j = 0; j < cols; ++j) {
                if (rows_in[i][j] >= prime) {
                    throw InputError("matrix entry outside the field");
                }
                m.at(i, j) = rows_in[i][j];
            }
        }
        return m;
    }

    FieldElement& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    FieldElement at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const FieldElement> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    void append_row(std::span<const FieldElement> values) {
        if (values.size() != cols) {
            throw InputError("row length " + std::to_string(values.size()) + " does not match " +
                             std::to_string(cols) + " columns");
        }
        data.insert(data.end(), values.begin(), values.end());
        ++rows;
    }

    FieldMatrix transpose() const {
        FieldMatrix t(cols, rows, p);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                t.at(j, i) = at(i, j);
            }
        }
        return t;
    }

    /// Columns [first, first + count).
    FieldMatrix columns(std::size_t first, std::size_t count) const {
        if (first + count > cols) {
            throw InputError("column range out of bounds");
        }
        FieldMatrix out(rows, count, p);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < count; ++j) {
                out.at(i, j) = at(i, first + j);
            }
        }
        return out;
    }

    std::vector<FieldElement> multiply(std::span<const FieldElement> x) const {
        if (x.size() != cols) {
            throw InputError("vector length does not match matrix columns");
        }
        std::vector<FieldElement> y(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            FieldElement acc = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                acc = (acc + at(i, j) * (x[j] % p)) % p;
            }
            y[i] = acc;
        }
        return y;
    }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;
};

/// Rows of `top` followed by rows of `bottom`.
inline FieldMatrix stack(const FieldMatrix& top, const FieldMatrix& bottom) {
    if (top.cols != bottom.cols || top.p != bottom.p) {
        throw InputError("stacking matrices of different shape or modulus");
    }
    FieldMatrix out = top;
    out.data.insert(out.data.end(), bottom.data.begin(), bottom.data.end());
    out.rows += bottom.rows;
    return out;
}

/// Columns of `left` followed by columns of `right`.
inline FieldMatrix side_by_side(const FieldMatrix& left, const FieldMatrix& right) {
    if (left.rows != right.rows || left.p != right.p) {
        throw InputError("joining matrices of different height or modulus");
    }
    FieldMatrix out(left.rows, left.cols + right.cols, left.p);
    for (std::size_t i = 0; i < left.rows; ++i) {
        for (std::size_t j = 0; j < left.cols; ++j) {
            out.at(i, j) = left.at(i, j);
        }
        for (std::size_t j = 0; j < right.cols; ++j) {
            out.at(i, left.cols + j) = right.at(i, j);
        }
    }
    return out;
}

/// Rank by Gaussian elimination over GF(p).
inline std::size_t mat_rank(FieldMatrix m) {
    const PrimeField f(m.p);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) {
            ++pivot;
        }
        if (pivot == m.rows) {
            continue;
        }
        if (pivot != rank) {
            for (std::size_t j = 0; j < m.cols; ++j) {
                std::swap(m.at(pivot, j), m.at(rank, j));
            }
        }
        const FieldElement inv = f.inverse(m.at(rank, col));
        for (std::size_t j = col; j < m.cols; ++j) {
            m.at(rank, j) = f.mul(m.at(rank, j), inv);
        }
        for (std::size_t i = rank + 1; i < m.rows; ++i) {
            const FieldElement factor = m.at(i, col);
            if (factor == 0) {
                continue;
            }
            for (std::size_t j = col; j < m.cols; ++j) {
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(rank, j)));
            }
        }
        ++rank;
    }
    return rank;
}

inline bool rowspace_contains(const FieldMatrix& m, std::span<const FieldElement> v) {
    FieldMatrix extended = m;
    extended.append_row(v);
    return mat_rank(extended) == mat_rank(m);
}

/// f(x) = sum coeffs[i] x^i by Horner's rule.
inline FieldElement evaluate_poly(const PrimeField& f, std::span<const FieldElement> coeffs, FieldElement x) {
    FieldElement acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = f.add(f.mul(acc, x), *it % f.prime());
    }
    return acc;
}

struct EvalPoint {
    FieldElement alpha = 0;
    FieldElement value = 0;
};

/// Coefficients (s_0, ..., s_{c-1}) of the unique polynomial of degree < c
/// through the c given points, by elimination on the Vandermonde system.
inline std::vector<FieldElement> interpolate_secret(const PrimeField& f, std::span<const EvalPoint> points,
                                                    std::size_t c) {
    if (points.size() != c) {
        throw InputError("interpolation needs exactly " + std::to_string(c) + " points, got " +
                         std::to_string(points.size()));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].alpha % f.prime() == points[j].alpha % f.prime()) {
                throw InputError("repeated evaluation point " + std::to_string(points[i].alpha));
            }
        }
    }
    // Augmented c x (c + 1) system.
    std::vector<std::vector<FieldElement>> a(c, std::vector<FieldElement>(c + 1));
    for (std::size_t i = 0; i < c; ++i) {
        FieldElement power = 1 % f.prime();
        for (std::size_t j = 0; j < c; ++j) {
            a[i][j] = power;
            power = f.mul(power, points[i].alpha % f.prime());
        }
        a[i][c] = points[i].value % f.prime();
    }
    for (std::size_t col = 0; col < c; ++col) {
        std::size_t pivot = col;
        while (pivot < c && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == c) {
            throw InternalError("singular Vandermonde system");
        }
        std::swap(a[pivot], a[col]);
        const FieldElement inv = f.inverse(a[col][col]);
        for (auto& x : a[col]) {
            x = f.mul(x, inv);
        }
        for (std::size_t i = 0; i < c; ++i) {
            if (i == col || a[i][col] == 0) {
                continue;
            }
            const FieldElement factor = a[i][col];
            for (std::size_t j = col; j <= c; ++j) {
                a[i][j] = f.sub(a[i][j], f.mul(factor, a[col][j]));
            }
        }
    }
    std::vector<FieldElement> s(c);
    for (std::size_t i = 0; i < c; ++i) {
        s[i] = a[i][c];
    }
    return s;
}

}  // namespace coreshare

#endif
