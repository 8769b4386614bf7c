#ifndef CORESHARE_RATIONAL_HPP
#define CORESHARE_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "coreshare/errors.hpp"

namespace coreshare {

// Arbitrary precision rational. GMP keeps every result of arithmetic in
// lowest terms with a positive denominator; only values built from a raw
// numerator/denominator pair need an explicit canonicalize().
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) {
        throw InputError("rational with zero denominator");
    }
    Rational r{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
    r.canonicalize();
    return r;
}

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline Rational parse_rational(std::string_view text) {
    Rational r;
    if (text.empty() || r.set_str(std::string(text), 10) != 0) {
        throw InputError("not a rational number: '" + std::string(text) + "'");
    }
    if (r.get_den() == 0) {
        throw InputError("rational with zero denominator");
    }
    r.canonicalize();
    return r;
}

}  // namespace coreshare

#endif
