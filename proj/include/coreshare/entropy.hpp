#ifndef CORESHARE_ENTROPY_HPP
#define CORESHARE_ENTROPY_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coreshare/errors.hpp"
#include "coreshare/exact_lp.hpp"
#include "coreshare/graph.hpp"
#include "coreshare/rational.hpp"

namespace coreshare {

using VertexMask = std::uint64_t;

inline VertexMask mask_of(std::span<const Vertex> vertices) {
    VertexMask m = 0;
    for (const Vertex v : vertices) {
        if (v >= 64) {
            throw InputError("vertex set operations support at most 64 vertices");
        }
        m |= VertexMask{1} << v;
    }
    return m;
}

inline std::vector<Vertex> vertices_of(VertexMask m) {
    std::vector<Vertex> out;
    for (; m != 0; m &= m - 1) {
        out.push_back(static_cast<Vertex>(std::countr_zero(m)));
    }
    return out;
}

/// Neighbor masks; requires at most 64 vertices.
inline std::vector<VertexMask> adjacency_masks(const Graph& g) {
    if (g.vertex_count() > 64) {
        throw InputError("vertex set operations support at most 64 vertices");
    }
    std::vector<VertexMask> adj(g.vertex_count(), 0);
    for (const auto& e : g.edges()) {
        adj[e.u] |= VertexMask{1} << e.v;
        adj[e.v] |= VertexMask{1} << e.u;
    }
    return adj;
}

namespace detail {

inline bool mask_is_qualified(std::span<const VertexMask> adj, VertexMask a) {
    for (VertexMask m = a; m != 0; m &= m - 1) {
        if (adj[std::countr_zero(m)] & a) {
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// A participant set is qualified when it contains both ends of some edge.
inline bool is_qualified(const Graph& g, std::span<const Vertex> set) {
    for (const Vertex v : set) {
        if (v >= g.vertex_count()) {
            throw InputError("unknown vertex id " + std::to_string(v));
        }
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            if (g.adjacent(set[i], set[j])) {
                return true;
            }
        }
    }
    return false;
}

enum class EntropyFamily : std::uint8_t {
    EmptySet,            // f(0) = 0
    Monotone,            // f(A+x) >= f(A)
    Submodular,          // f(A+x) + f(A+y) >= f(A+x+y) + f(A)
    StrictMonotone,      // f(B+x) >= f(B) + 1, B independent, B+x qualified
    StrictSubmodular,    // f(A) + f(B) >= f(A|B) + f(A&B) + 1
    Objective,           // t >= f({v})
};

inline constexpr std::array kAllEntropyFamilies = {
    EntropyFamily::EmptySet,       EntropyFamily::Monotone,         EntropyFamily::Submodular,
    EntropyFamily::StrictMonotone, EntropyFamily::StrictSubmodular, EntropyFamily::Objective,
};

inline const char* family_name(EntropyFamily f) {
    switch (f) {
        case EntropyFamily::EmptySet: return "empty";
        case EntropyFamily::Monotone: return "monotone";
        case EntropyFamily::Submodular: return "submodular";
        case EntropyFamily::StrictMonotone: return "strict-monotone";
        case EntropyFamily::StrictSubmodular: return "strict-submodular";
        case EntropyFamily::Objective: return "objective";
    }
    return "?";
}

struct EntropyConstraint {
    EntropyFamily family;
    lp::Constraint constraint;
};

inline constexpr std::size_t kMaxEntropyParticipants = 12;

/// Normalized-entropy LP over the subsets of an n-vertex graph. Variable
/// `mask` is f(mask); variable 2^n is the objective bound t.
struct EntropyLP {
    std::size_t n = 0;
    std::vector<EntropyConstraint> constraints;

    std::size_t subset_count() const { return std::size_t{1} << n; }
    std::size_t variable_count() const { return subset_count() + 1; }
    std::size_t objective_var() const { return subset_count(); }

    std::size_t count(EntropyFamily family) const {
        return static_cast<std::size_t>(
            std::count_if(constraints.begin(), constraints.end(),
                          [&](const EntropyConstraint& c) { return c.family == family; }));
    }

    /// One constraint per line: `1*f[3] -1*f[1] >= 1`, then `min t`.
    std::string dump() const {
        std::ostringstream out;
        for (const auto& ec : constraints) {
            const auto& c = ec.constraint;
            bool first = true;
            for (const auto& t : c.terms) {
                out << (first ? "" : " ") << to_string(t.coeff) << '*';
                if (t.var == objective_var()) {
                    out << 't';
                } else {
                    out << "f[" << t.var << ']';
                }
                first = false;
            }
            switch (c.relation) {
                case lp::Relation::GreaterEqual: out << " >= "; break;
                case lp::Relation::LessEqual: out << " <= "; break;
                case lp::Relation::Equal: out << " = "; break;
            }
            out << to_string(c.rhs) << '\n';
        }
        out << "min t\n";
        return out.str();
    }
};

/// Generates families (a)-(e) for `g` plus the objective rows. Monotonicity
/// and submodularity are generated in elemental form, strict monotonicity
/// one element at a time, strict submodularity over all subset pairs.
/// Duplicate constraints are dropped.
inline EntropyLP build_entropy_lp(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > kMaxEntropyParticipants) {
        throw InputError("entropy LP supports at most " + std::to_string(kMaxEntropyParticipants) +
                         " vertices, graph has " + std::to_string(n));
    }
    const auto adj = adjacency_masks(g);
    EntropyLP lp;
    lp.n = n;
    const std::size_t subsets = std::size_t{1} << n;

    std::set<std::tuple<std::vector<std::pair<std::size_t, long>>, lp::Relation, long>> seen;
    auto add = [&](EntropyFamily family, std::vector<lp::Term> terms, lp::Relation rel, long rhs) {
        terms = lp::normalize_terms(std::move(terms));
        std::vector<std::pair<std::size_t, long>> key;
        key.reserve(terms.size());
        for (const auto& t : terms) {
            key.emplace_back(t.var, t.coeff.get_num().get_si());
        }
        if (!seen.emplace(std::move(key), rel, rhs).second) {
            return;
        }
        lp.constraints.push_back({family, {std::move(terms), rel, Rational(rhs)}});
    };
    auto qualified = [&](VertexMask m) { return detail::mask_is_qualified(adj, m); };
    using lp::Relation;
    const Rational one = 1;
    const Rational minus_one = -1;

    add(EntropyFamily::EmptySet, {{0, one}}, Relation::Equal, 0);

    for (VertexMask a = 0; a < subsets; ++a) {
        for (std::size_t x = 0; x < n; ++x) {
            const VertexMask bx = VertexMask{1} << x;
            if (a & bx) {
                continue;
            }
            add(EntropyFamily::Monotone, {{a | bx, one}, {a, minus_one}}, Relation::GreaterEqual, 0);
        }
    }

    for (VertexMask a = 0; a < subsets; ++a) {
        for (std::size_t x = 0; x < n; ++x) {
            const VertexMask bx = VertexMask{1} << x;
            if (a & bx) {
                continue;
            }
            for (std::size_t y = x + 1; y < n; ++y) {
                const VertexMask by = VertexMask{1} << y;
                if (a & by) {
                    continue;
                }
                add(EntropyFamily::Submodular,
                    {{a | bx, one}, {a | by, one}, {a | bx | by, minus_one}, {a, minus_one}},
                    Relation::GreaterEqual, 0);
            }
        }
    }

    for (VertexMask b = 0; b < subsets; ++b) {
        if (qualified(b)) {
            continue;
        }
        for (std::size_t x = 0; x < n; ++x) {
            const VertexMask bx = VertexMask{1} << x;
            if ((b & bx) == 0 && (adj[x] & b) != 0) {
                add(EntropyFamily::StrictMonotone, {{b | bx, one}, {b, minus_one}},
                    Relation::GreaterEqual, 1);
            }
        }
    }

    std::vector<VertexMask> qualified_sets;
    for (VertexMask a = 0; a < subsets; ++a) {
        if (qualified(a)) {
            qualified_sets.push_back(a);
        }
    }
    for (std::size_t i = 0; i < qualified_sets.size(); ++i) {
        const VertexMask a = qualified_sets[i];
        for (std::size_t j = i + 1; j < qualified_sets.size(); ++j) {
            const VertexMask b = qualified_sets[j];
            if (qualified(a & b)) {
                continue;
            }
            add(EntropyFamily::StrictSubmodular,
                {{a, one}, {b, one}, {a | b, minus_one}, {a & b, minus_one}},
                Relation::GreaterEqual, 1);
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        add(EntropyFamily::Objective, {{lp.objective_var(), one}, {VertexMask{1} << v, minus_one}},
            Relation::GreaterEqual, 0);
    }
    return lp;
}

struct EntropySolution {
    Rational value;
    // f(mask) for every subset mask, plus t at index 2^n.
    std::vector<Rational> assignment;
    std::size_t rows_used = 0;
    std::size_t pivots = 0;
    std::size_t rounds = 0;
};

namespace detail {

inline void add_entropy_rows(lp::Tableau& tab, const lp::Constraint& c) {
    if (c.relation != lp::Relation::GreaterEqual) {
        tab.add_row(c.terms, c.rhs);
    }
    if (c.relation != lp::Relation::LessEqual) {
        tab.add_row(lp::detail::negated(c.terms), -c.rhs);
    }
}

}  // namespace detail

/// Minimizes t over the constraints of `lp` whose family is in `families`.
///
/// Rows enter the tableau lazily: start from the equality, objective and
/// strict-monotone rows, solve, then add the most violated of the remaining
/// constraints and re-solve from the current basis. The loop ends when the
/// assignment satisfies every selected constraint, so the value is the exact
/// optimum of the full program.
inline EntropySolution solve_entropy_lp(
    const EntropyLP& elp,
    std::span<const EntropyFamily> families = kAllEntropyFamilies) {
    auto selected = [&](EntropyFamily f) {
        return std::find(families.begin(), families.end(), f) != families.end();
    };
    std::vector<Rational> maximize(elp.variable_count());
    maximize[elp.objective_var()] = -1;
    // Secondary objective: minimize the sum of all f values.
    std::vector<Rational> tie_break(elp.variable_count(), Rational(-1));
    tie_break[elp.objective_var()] = 0;
    lp::Tableau tab(std::move(maximize), std::move(tie_break));

    std::vector<const lp::Constraint*> pending;
    for (const auto& ec : elp.constraints) {
        if (!selected(ec.family)) {
            continue;
        }
        const bool eager = ec.family == EntropyFamily::EmptySet ||
                           ec.family == EntropyFamily::Objective ||
                           ec.family == EntropyFamily::StrictMonotone;
        if (eager) {
            detail::add_entropy_rows(tab, ec.constraint);
        } else {
            pending.push_back(&ec.constraint);
        }
    }

    const std::size_t batch = std::max<std::size_t>(16, elp.variable_count() / 4);
    EntropySolution sol;
    for (;;) {
        ++sol.rounds;
        const auto status = tab.solve();
        if (status != lp::Status::Optimal) {
            throw InternalError(std::string("entropy LP solve ended ") + lp::to_string(status));
        }
        const auto x = tab.primal();
        std::vector<std::pair<Rational, std::size_t>> violated;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const auto& c = *pending[i];
            // Every pending row is a >= row.
            Rational slack = lp::evaluate(c.terms, x) - c.rhs;
            if (sgn(slack) < 0) {
                violated.emplace_back(std::move(slack), i);
            }
        }
        if (violated.empty()) {
            sol.assignment = x;
            break;
        }
        const std::size_t take = std::min(batch, violated.size());
        std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take),
                          violated.end(), [](const auto& a, const auto& b) {
                              return a.first < b.first || (a.first == b.first && a.second < b.second);
                          });
        std::vector<bool> taken(pending.size(), false);
        for (std::size_t k = 0; k < take; ++k) {
            detail::add_entropy_rows(tab, *pending[violated[k].second]);
            taken[violated[k].second] = true;
        }
        std::vector<const lp::Constraint*> rest;
        rest.reserve(pending.size() - take);
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (!taken[i]) {
                rest.push_back(pending[i]);
            }
        }
        pending = std::move(rest);
    }

    sol.value = sol.assignment[elp.objective_var()];
    sol.rows_used = tab.row_count();
    sol.pivots = tab.pivot_count();
    for (const auto& ec : elp.constraints) {
        if (selected(ec.family) && !lp::is_satisfied(ec.constraint, sol.assignment)) {
            throw InternalError("entropy LP assignment violates a constraint");
        }
    }
    for (const auto& v : sol.assignment) {
        if (sgn(v) < 0) {
            throw InternalError("entropy LP assignment has a negative entry");
        }
    }
    if (sol.value != -tab.value()) {
        throw InternalError("entropy LP objective disagrees with its assignment");
    }
    return sol;
}

/// The whole program as a plain LinearProgram (every row at once), for
/// cross-checking the lazy solver on small graphs.
inline lp::LinearProgram to_linear_program(
    const EntropyLP& elp, std::span<const EntropyFamily> families = kAllEntropyFamilies) {
    lp::LinearProgram program;
    for (std::size_t mask = 0; mask < elp.subset_count(); ++mask) {
        program.add_variable("f[" + std::to_string(mask) + "]");
    }
    program.add_variable("t");
    for (const auto& ec : elp.constraints) {
        if (std::find(families.begin(), families.end(), ec.family) != families.end()) {
            program.add_constraint(ec.constraint);
        }
    }
    program.minimize({{elp.objective_var(), Rational(1)}});
    return program;
}

/// Lower bound on the information complexity of `g` from the Shannon-type
/// and secret-sharing inequalities.
inline Rational entropy_lower_bound(const Graph& g) {
    return solve_entropy_lp(build_entropy_lp(g)).value;
}

}  // namespace coreshare

#endif
