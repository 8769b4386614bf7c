#ifndef CORESHARE_EXACT_LP_HPP
#define CORESHARE_EXACT_LP_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coreshare/errors.hpp"
#include "coreshare/rational.hpp"

namespace coreshare::lp {

enum class Relation { GreaterEqual, LessEqual, Equal };

struct Term {
    std::size_t var;
    Rational coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
    std::vector<Term> terms;
    Relation relation = Relation::GreaterEqual;
    Rational rhs;
};

/// Sorts by variable index, merges repeated variables and drops zero
/// coefficients. Two constraints with the same normalized terms, relation
/// and right-hand side are the same constraint.
inline std::vector<Term> normalize_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().var == t.var) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(std::move(t));
        }
        if (sgn(out.back().coeff) == 0) {
            out.pop_back();
        }
    }
    return out;
}

inline Rational evaluate(std::span<const Term> terms, std::span<const Rational> x) {
    Rational sum = 0;
    for (const auto& t : terms) {
        sum += t.coeff * x[t.var];
    }
    return sum;
}

inline bool is_satisfied(const Constraint& c, std::span<const Rational> x) {
    const Rational lhs = evaluate(c.terms, x);
    switch (c.relation) {
        case Relation::GreaterEqual: return lhs >= c.rhs;
        case Relation::LessEqual: return lhs <= c.rhs;
        case Relation::Equal: return lhs == c.rhs;
    }
    return false;
}

struct Variable {
    std::string name;
    // nullopt means the variable is free.
    std::optional<Rational> lower_bound;
};

/// A minimization problem over rational variables. Variables are bounded
/// below by 0 unless declared otherwise.
class LinearProgram {
public:
    std::size_t add_variable(std::string name,
                             std::optional<Rational> lower_bound = Rational(0)) {
        variables_.push_back({std::move(name), std::move(lower_bound)});
        return variables_.size() - 1;
    }

    void add_constraint(Constraint c) {
        for (const auto& t : c.terms) {
            if (t.var >= variables_.size()) {
                throw InputError("constraint references unknown variable " + std::to_string(t.var));
            }
        }
        c.terms = normalize_terms(std::move(c.terms));
        constraints_.push_back(std::move(c));
    }

    void minimize(std::vector<Term> objective) {
        for (const auto& t : objective) {
            if (t.var >= variables_.size()) {
                throw InputError("objective references unknown variable " + std::to_string(t.var));
            }
        }
        objective_ = normalize_terms(std::move(objective));
    }

    std::size_t variable_count() const { return variables_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<Term>& objective() const { return objective_; }

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<Term> objective_;
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "?";
}

struct Solution {
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> assignment;
};

/// Dense simplex tableau over exact rationals for
///
///     maximize objective . x   subject to   rows . x <= rhs,  x >= 0.
///
/// Rows may be appended at any time, including after an optimal solve; the
/// next solve() then restarts from the current basis with the dual simplex,
/// which is what makes row generation cheap.
///
/// An optional secondary objective is optimized lexicographically after the
/// primary one. It does not change the optimal primary value, but it breaks
/// the ties that make highly degenerate programs stall.
///
/// Pivot selection is Dantzig's rule (most negative reduced cost, most
/// negative right-hand side in the dual) with ties to the lowest variable id.
/// After a run of degenerate pivots the tableau switches to Bland's rule
/// until the objective moves again, so it never cycles. Every choice is a
/// function of the tableau alone: identical inputs give identical pivots.
///
/// Row layout: x_basic[i] + sum_j a[i][j] * x_nonbasic[j] = rhs[i].
/// Objective rows: z + sum_j d[j] * x_nonbasic[j] = z0; optimal when d >= 0.
class Tableau {
public:
    explicit Tableau(std::vector<Rational> objective, std::vector<Rational> secondary = {})
        : structural_(objective.size()), nonbasic_(objective.size()), position_(objective.size()) {
        if (!secondary.empty() && secondary.size() != objective.size()) {
            throw InputError("secondary objective has the wrong arity");
        }
        primary_.coeff.resize(structural_);
        for (std::size_t j = 0; j < structural_; ++j) {
            primary_.coeff[j] = -objective[j];
            nonbasic_[j] = j;
            position_[j] = {false, j};
        }
        if (!secondary.empty()) {
            secondary_.coeff.resize(structural_);
            for (std::size_t j = 0; j < structural_; ++j) {
                secondary_.coeff[j] = -secondary[j];
            }
        }
    }

    std::size_t structural_count() const { return structural_; }
    std::size_t row_count() const { return rows_.size(); }
    std::size_t pivot_count() const { return pivots_; }

    /// Appends terms . x <= rhs over the structural variables.
    void add_row(std::span<const Term> terms, const Rational& rhs) {
        const std::size_t cols = nonbasic_.size();
        std::vector<Rational> row(cols);
        Rational b = rhs;
        for (const auto& t : terms) {
            if (t.var >= structural_) {
                throw InputError("tableau row references unknown variable");
            }
            const auto [basic, idx] = position_[t.var];
            if (!basic) {
                row[idx] += t.coeff;
            } else {
                const auto& src = rows_[idx];
                for (std::size_t j = 0; j < cols; ++j) {
                    if (sgn(src[j]) != 0) {
                        row[j] -= t.coeff * src[j];
                    }
                }
                b -= t.coeff * rhs_[idx];
            }
        }
        const std::size_t slack = structural_ + slack_count_++;
        position_.push_back({true, rows_.size()});
        basic_.push_back(slack);
        rows_.push_back(std::move(row));
        rhs_.push_back(std::move(b));
    }

    Status solve() {
        const bool primal_feasible =
            std::all_of(rhs_.begin(), rhs_.end(), [](const Rational& b) { return sgn(b) >= 0; });
        if (!primal_feasible) {
            if (dual_feasible()) {
                if (!dual_simplex()) {
                    return Status::Infeasible;
                }
            } else if (!phase_one()) {
                return Status::Infeasible;
            }
        }
        return primal_simplex(false) ? Status::Optimal : Status::Unbounded;
    }

    /// Primary objective value of the current basic solution.
    const Rational& value() const { return primary_.value; }

    /// Values of the structural variables in the current basic solution.
    std::vector<Rational> primal() const {
        std::vector<Rational> x(structural_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basic_[i] < structural_) {
                x[basic_[i]] = rhs_[i];
            }
        }
        return x;
    }

private:
    static constexpr std::size_t kArtificial = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kStallLimit = 50;

    struct Position {
        bool basic;
        std::size_t index;
    };

    struct ObjectiveRow {
        std::vector<Rational> coeff;
        Rational value = 0;

        bool active() const { return !coeff.empty(); }
    };

    void set_position(std::size_t var, Position p) {
        if (var != kArtificial) {
            position_[var] = p;
        }
    }

    // Sign of reduced cost j under the objective being optimized: the
    // phase-one row alone, or primary then secondary.
    int reduced_sign(std::size_t j, bool phase_one) const {
        if (phase_one) {
            return sgn(aux_.coeff[j]);
        }
        if (const int s = sgn(primary_.coeff[j]); s != 0 || !secondary_.active()) {
            return s;
        }
        return sgn(secondary_.coeff[j]);
    }

    bool dual_feasible() const {
        for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
            if (reduced_sign(j, false) < 0) {
                return false;
            }
        }
        return true;
    }

    // Compares reduced costs of columns a and b, lexicographically.
    int compare_reduced(std::size_t a, std::size_t b, bool phase_one) const {
        if (phase_one) {
            return cmp(aux_.coeff[a], aux_.coeff[b]);
        }
        if (const int c = cmp(primary_.coeff[a], primary_.coeff[b]); c != 0 || !secondary_.active()) {
            return c;
        }
        return cmp(secondary_.coeff[a], secondary_.coeff[b]);
    }

    // Entering column for a primal step: most negative reduced cost, or the
    // lowest variable id with negative reduced cost while in Bland mode.
    std::optional<std::size_t> entering_column(bool phase_one) const {
        std::optional<std::size_t> best;
        for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
            if (reduced_sign(j, phase_one) >= 0) {
                continue;
            }
            if (!best) {
                best = j;
            } else if (bland_) {
                if (nonbasic_[j] < nonbasic_[*best]) {
                    best = j;
                }
            } else {
                const int c = compare_reduced(j, *best, phase_one);
                if (c < 0 || (c == 0 && nonbasic_[j] < nonbasic_[*best])) {
                    best = j;
                }
            }
        }
        return best;
    }

    std::optional<std::size_t> leaving_row(std::size_t col) const {
        std::optional<std::size_t> best;
        Rational best_ratio;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (sgn(rows_[i][col]) <= 0) {
                continue;
            }
            Rational ratio = rhs_[i] / rows_[i][col];
            if (!best || ratio < best_ratio || (ratio == best_ratio && basic_[i] < basic_[*best])) {
                best = i;
                best_ratio = std::move(ratio);
            }
        }
        return best;
    }

    std::pair<Rational, Rational> progress(bool phase_one) const {
        if (phase_one) {
            return {aux_.value, Rational(0)};
        }
        return {primary_.value, secondary_.value};
    }

    // Degenerate pivots leave the objective unchanged. A long enough run of
    // them switches to Bland's rule, which cannot cycle; the first strict
    // improvement switches back.
    void track_progress(const std::pair<Rational, Rational>& before,
                        const std::pair<Rational, Rational>& after) {
        if (before == after) {
            if (++stalled_ >= kStallLimit) {
                bland_ = true;
            }
        } else {
            stalled_ = 0;
            bland_ = false;
        }
    }

    // Returns false when the objective is unbounded.
    bool primal_simplex(bool phase_one) {
        for (;;) {
            const auto col = entering_column(phase_one);
            if (!col) {
                return true;
            }
            const auto row = leaving_row(*col);
            if (!row) {
                return false;
            }
            auto before = progress(phase_one);
            pivot(*row, *col);
            track_progress(before, progress(phase_one));
        }
    }

    // Dual ratio for column j against pivot entry a < 0, compared
    // lexicographically over the objective rows.
    int compare_dual_ratio(std::size_t j, const Rational& aj, std::size_t k,
                           const Rational& ak) const {
        // d_j / -a_j  vs  d_k / -a_k, both denominators positive.
        const int c = cmp(primary_.coeff[j] * -ak, primary_.coeff[k] * -aj);
        if (c != 0 || !secondary_.active()) {
            return c;
        }
        return cmp(secondary_.coeff[j] * -ak, secondary_.coeff[k] * -aj);
    }

    // Restores primal feasibility while keeping the objective rows
    // lexicographically non-negative. Returns false when the rows are
    // infeasible.
    bool dual_simplex() {
        for (;;) {
            std::optional<std::size_t> row;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (sgn(rhs_[i]) >= 0) {
                    continue;
                }
                if (!row) {
                    row = i;
                } else if (bland_) {
                    if (basic_[i] < basic_[*row]) {
                        row = i;
                    }
                } else {
                    const int c = cmp(rhs_[i], rhs_[*row]);
                    if (c < 0 || (c == 0 && basic_[i] < basic_[*row])) {
                        row = i;
                    }
                }
            }
            if (!row) {
                return true;
            }
            const auto& a = rows_[*row];
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (sgn(a[j]) >= 0 || nonbasic_[j] == kArtificial) {
                    continue;
                }
                if (!col) {
                    col = j;
                    continue;
                }
                const int c = compare_dual_ratio(j, a[j], *col, a[*col]);
                if (c < 0 || (c == 0 && nonbasic_[j] < nonbasic_[*col])) {
                    col = j;
                }
            }
            if (!col) {
                return false;
            }
            auto before = progress(false);
            pivot(*row, *col);
            track_progress(before, progress(false));
        }
    }

    // Single-artificial phase one: subtract x_a from every row, pivot it
    // into the most violated row, then maximize -x_a.
    bool phase_one() {
        const std::size_t art = nonbasic_.size();
        for (auto& row : rows_) {
            row.emplace_back(-1);
        }
        primary_.coeff.emplace_back(0);
        if (secondary_.active()) {
            secondary_.coeff.emplace_back(0);
        }
        nonbasic_.push_back(kArtificial);
        aux_.coeff.assign(nonbasic_.size(), Rational(0));
        aux_.coeff[art] = 1;
        aux_.value = 0;

        std::size_t worst = 0;
        for (std::size_t i = 1; i < rows_.size(); ++i) {
            if (rhs_[i] < rhs_[worst]) {
                worst = i;
            }
        }
        pivot(worst, art);
        primal_simplex(true);
        const bool feasible = sgn(aux_.value) == 0;

        if (feasible) {
            // Drive the artificial out of the basis if it stayed there at zero.
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (basic_[i] != kArtificial) {
                    continue;
                }
                std::optional<std::size_t> col;
                for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
                    if (sgn(rows_[i][j]) != 0 && (!col || nonbasic_[j] < nonbasic_[*col])) {
                        col = j;
                    }
                }
                if (col) {
                    pivot(i, *col);
                }
                break;
            }
        }
        aux_ = {};

        // Drop the artificial column if it is nonbasic. If it is basic its row
        // is identically zero and never pivots again.
        const auto it = std::find(nonbasic_.begin(), nonbasic_.end(), kArtificial);
        if (it != nonbasic_.end()) {
            const std::size_t col = static_cast<std::size_t>(it - nonbasic_.begin());
            const std::size_t last = nonbasic_.size() - 1;
            if (col != last) {
                for (auto& row : rows_) {
                    std::swap(row[col], row[last]);
                }
                std::swap(primary_.coeff[col], primary_.coeff[last]);
                if (secondary_.active()) {
                    std::swap(secondary_.coeff[col], secondary_.coeff[last]);
                }
                nonbasic_[col] = nonbasic_[last];
                set_position(nonbasic_[col], {false, col});
            }
            for (auto& row : rows_) {
                row.pop_back();
            }
            primary_.coeff.pop_back();
            if (secondary_.active()) {
                secondary_.coeff.pop_back();
            }
            nonbasic_.pop_back();
        }
        return feasible;
    }

    static void eliminate(std::vector<Rational>& target, Rational& target_rhs,
                          const std::vector<Rational>& pivot_row, const Rational& pivot_rhs,
                          std::span<const std::size_t> nonzero, std::size_t col,
                          const Rational& inv) {
        if (sgn(target[col]) == 0) {
            return;
        }
        const Rational f = target[col];
        for (const std::size_t j : nonzero) {
            target[j] -= f * pivot_row[j];
        }
        target_rhs -= f * pivot_rhs;
        target[col] = -f * inv;
    }

    void pivot(std::size_t r, std::size_t s) {
        ++pivots_;
        auto& prow = rows_[r];
        const Rational inv = 1 / prow[s];
        std::vector<std::size_t> nonzero;
        for (std::size_t j = 0; j < prow.size(); ++j) {
            if (j != s && sgn(prow[j]) != 0) {
                prow[j] *= inv;
                nonzero.push_back(j);
            }
        }
        rhs_[r] *= inv;
        prow[s] = inv;

        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i != r) {
                eliminate(rows_[i], rhs_[i], prow, rhs_[r], nonzero, s, inv);
            }
        }
        for (ObjectiveRow* obj : {&primary_, &secondary_, &aux_}) {
            if (obj->active()) {
                eliminate(obj->coeff, obj->value, prow, rhs_[r], nonzero, s, inv);
            }
        }

        std::swap(basic_[r], nonbasic_[s]);
        set_position(basic_[r], {true, r});
        set_position(nonbasic_[s], {false, s});
    }

    std::size_t structural_;
    std::size_t slack_count_ = 0;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    ObjectiveRow primary_;
    ObjectiveRow secondary_;
    ObjectiveRow aux_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<Position> position_;
    std::size_t pivots_ = 0;
    std::size_t stalled_ = 0;
    bool bland_ = false;
};

namespace detail {

// Column map from program variables to non-negative tableau variables:
// x = offset + plus - minus (minus only for free variables).
struct ColumnMap {
    std::vector<std::size_t> plus;
    std::vector<std::optional<std::size_t>> minus;
    std::vector<Rational> offset;
    std::size_t columns = 0;
};

inline ColumnMap map_columns(const LinearProgram& lp) {
    ColumnMap m;
    for (const auto& v : lp.variables()) {
        m.plus.push_back(m.columns++);
        if (v.lower_bound) {
            m.minus.emplace_back();
            m.offset.push_back(*v.lower_bound);
        } else {
            m.minus.emplace_back(m.columns++);
            m.offset.emplace_back(0);
        }
    }
    return m;
}

inline std::pair<std::vector<Term>, Rational> substitute(const ColumnMap& m,
                                                         std::span<const Term> terms) {
    std::vector<Term> out;
    Rational shift = 0;
    for (const auto& t : terms) {
        out.push_back({m.plus[t.var], t.coeff});
        if (m.minus[t.var]) {
            out.push_back({*m.minus[t.var], -t.coeff});
        }
        shift += t.coeff * m.offset[t.var];
    }
    return {std::move(out), std::move(shift)};
}

inline std::vector<Term> negated(std::vector<Term> terms) {
    for (auto& t : terms) {
        t.coeff = -t.coeff;
    }
    return terms;
}

}  // namespace detail

/// Solves `lp` exactly. An optimal assignment is re-checked against every
/// constraint and bound before it is returned; a failed check throws
/// InternalError.
inline Solution solve_min(const LinearProgram& lp) {
    if (lp.variable_count() == 0) {
        throw InputError("linear program has no variables");
    }
    const auto cols = detail::map_columns(lp);

    auto [obj_terms, obj_shift] = detail::substitute(cols, lp.objective());
    std::vector<Rational> maximize(cols.columns);
    for (const auto& t : obj_terms) {
        maximize[t.var] -= t.coeff;
    }
    Tableau tableau(std::move(maximize));
    for (const auto& c : lp.constraints()) {
        auto [terms, shift] = detail::substitute(cols, c.terms);
        const Rational rhs = c.rhs - shift;
        if (c.relation != Relation::GreaterEqual) {
            tableau.add_row(terms, rhs);
        }
        if (c.relation != Relation::LessEqual) {
            tableau.add_row(detail::negated(terms), -rhs);
        }
    }

    Solution sol;
    sol.status = tableau.solve();
    if (sol.status != Status::Optimal) {
        return sol;
    }
    const auto y = tableau.primal();
    sol.assignment.resize(lp.variable_count());
    for (std::size_t k = 0; k < lp.variable_count(); ++k) {
        sol.assignment[k] = cols.offset[k] + y[cols.plus[k]];
        if (cols.minus[k]) {
            sol.assignment[k] -= y[*cols.minus[k]];
        }
    }
    sol.value = evaluate(lp.objective(), sol.assignment);
    if (sol.value != -tableau.value() + obj_shift) {
        throw InternalError("simplex objective disagrees with its own assignment");
    }
    for (std::size_t k = 0; k < lp.variable_count(); ++k) {
        const auto& lb = lp.variables()[k].lower_bound;
        if (lb && sol.assignment[k] < *lb) {
            throw InternalError("simplex assignment violates a lower bound");
        }
    }
    for (const auto& c : lp.constraints()) {
        if (!is_satisfied(c, sol.assignment)) {
            throw InternalError("simplex assignment violates a constraint");
        }
    }
    return sol;
}

/// Dual of a program whose variables are all bounded below by 0, as
///
///     maximize b . y   subject to   A^T y <= c,
///
/// with y_i >= 0 for >= rows, y_i <= 0 for <= rows and y_i free for
/// equalities. A <= row is carried by the variable -y_i >= 0. The result is
/// stated as minimizing -b . y, so its optimum is minus the primal optimum.
inline LinearProgram dual_program(const LinearProgram& lp) {
    for (const auto& v : lp.variables()) {
        if (!v.lower_bound || sgn(*v.lower_bound) != 0) {
            throw InputError("dual_program needs every variable bounded below by 0");
        }
    }
    LinearProgram dual;
    std::vector<std::vector<Term>> columns(lp.variable_count());
    std::vector<Term> objective;
    for (std::size_t i = 0; i < lp.constraints().size(); ++i) {
        const auto& c = lp.constraints()[i];
        const bool flipped = c.relation == Relation::LessEqual;
        const std::size_t y = dual.add_variable(
            "y" + std::to_string(i),
            c.relation == Relation::Equal ? std::nullopt : std::optional<Rational>(0));
        for (const auto& t : c.terms) {
            columns[t.var].push_back({y, flipped ? Rational(-t.coeff) : t.coeff});
        }
        objective.push_back({y, flipped ? c.rhs : Rational(-c.rhs)});
    }
    std::vector<Rational> cost(lp.variable_count());
    for (const auto& t : lp.objective()) {
        cost[t.var] = t.coeff;
    }
    for (std::size_t j = 0; j < lp.variable_count(); ++j) {
        dual.add_constraint({std::move(columns[j]), Relation::LessEqual, cost[j]});
    }
    dual.minimize(std::move(objective));
    return dual;
}

}  // namespace coreshare::lp

#endif
