#ifndef CORESHARE_SCHEME_HPP
#define CORESHARE_SCHEME_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coreshare/core.hpp"
#include "coreshare/errors.hpp"
#include "coreshare/field.hpp"
#include "coreshare/graph.hpp"
#include "coreshare/stars.hpp"

namespace coreshare {

enum class Role { Center, Leaf };

inline const char* role_name(Role r) { return r == Role::Center ? "center" : "leaf"; }

struct LayoutEntry {
    // 0-based star position.
    std::size_t star = 0;
    Role role = Role::Center;

    friend bool operator==(const LayoutEntry&, const LayoutEntry&) = default;
};

using Share = std::vector<FieldElement>;

/// Linear scheme on a tree: one ideal star scheme per star of a packing,
/// joined by handing star j the piece f(alpha_j) of the secret polynomial
/// f(x) = s_0 + s_1 x + ... + s_{c-1} x^{c-1}, with alpha_j = j for the
/// 0-based star position j.
struct Scheme {
    Graph tree;
    std::size_t c = 0;
    std::uint64_t p = 2;
    Vertex root = 0;
    WeightFunction weights;
    std::vector<Star> stars;
    // Per vertex, in star order.
    std::vector<std::vector<LayoutEntry>> layout;

    std::size_t m() const { return stars.size(); }
    FieldElement alpha(std::size_t star) const { return static_cast<FieldElement>(star); }
    std::size_t share_length(Vertex v) const { return layout.at(v).size(); }
    std::size_t max_share_length() const {
        std::size_t k = 0;
        for (const auto& l : layout) {
            k = std::max(k, l.size());
        }
        return k;
    }
    PrimeField field() const { return PrimeField(p); }
};

/// Recomputes the layout from the stars and checks the structural
/// invariants: valid field, stars on tree edges, alpha values distinct.
/// Edge coverage is left to the verifiers.
inline Scheme assemble_scheme(Graph tree, std::size_t c, std::uint64_t p, Vertex root, WeightFunction weights,
                              std::vector<Star> stars) {
    if (!is_tree(tree)) {
        throw NotATreeError();
    }
    if (c < 1) {
        throw InputError("scheme needs c >= 1");
    }
    if (!is_prime(p) || p >= (std::uint64_t{1} << 32)) {
        throw InputError("field size " + std::to_string(p) + " is not a prime below 2^32");
    }
    if (p < std::max<std::uint64_t>(stars.size(), 2)) {
        throw InputError("field size " + std::to_string(p) + " is smaller than the star count " +
                         std::to_string(stars.size()));
    }
    if (root >= tree.vertex_count()) {
        throw InputError("root out of range");
    }
    if (weights.size() != tree.vertex_count()) {
        throw InputError("weight function size does not match the tree");
    }
    Scheme s;
    s.layout.assign(tree.vertex_count(), {});
    for (std::size_t j = 0; j < stars.size(); ++j) {
        auto& star = stars[j];
        star.index = j;
        if (star.leaves.empty()) {
            throw InputError("star " + std::to_string(j + 1) + " has no leaves");
        }
        s.layout.at(star.center).push_back({j, Role::Center});
        for (const Vertex leaf : star.leaves) {
            if (leaf >= tree.vertex_count() || !tree.adjacent(star.center, leaf)) {
                throw InputError("star " + std::to_string(j + 1) + " uses a non-edge");
            }
            s.layout[leaf].push_back({j, Role::Leaf});
        }
    }
    for (auto& l : s.layout) {
        std::sort(l.begin(), l.end(), [](const LayoutEntry& a, const LayoutEntry& b) { return a.star < b.star; });
        for (std::size_t i = 1; i < l.size(); ++i) {
            if (l[i].star == l[i - 1].star) {
                throw InputError("a vertex appears twice in star " + std::to_string(l[i].star + 1));
            }
        }
    }
    s.tree = std::move(tree);
    s.c = c;
    s.p = p;
    s.root = root;
    s.weights = std::move(weights);
    s.stars = std::move(stars);
    return s;
}

/// Largest core size, maximal weights, orientation, stars, then the field.
inline Scheme build_scheme(const Graph& g, std::optional<std::uint64_t> field_override = std::nullopt,
                           std::optional<Vertex> root_override = std::nullopt) {
    if (!is_tree(g)) {
        throw NotATreeError();
    }
    if (g.vertex_count() < 2) {
        throw InputError("a scheme needs at least 2 participants");
    }
    // Input weights play no part in the scheme.
    Graph tree;
    for (const auto& name : g.names()) {
        tree.add_vertex(name);
    }
    for (const auto& e : g.edges()) {
        tree.add_edge(e.u, e.v);
    }
    const auto rooted = root_at(tree, root_override);
    const std::size_t c = tree_core_sizes(rooted).global_c;
    auto w = maximalize_weights(tree, c);
    const auto orientation = orient_edges(rooted, w, c);
    auto packing = extract_stars(rooted, orientation);
    const std::uint64_t m = packing.stars.size();
    std::uint64_t p = 0;
    if (field_override) {
        p = *field_override;
        if (!is_prime(p)) {
            throw InputError("field size " + std::to_string(p) + " is not prime");
        }
        if (p < std::max<std::uint64_t>(m, 2)) {
            throw InputError("field size " + std::to_string(p) + " is smaller than the star count " +
                             std::to_string(m));
        }
    } else {
        p = smallest_prime_at_least(std::max<std::uint64_t>(m, 2));
    }
    return assemble_scheme(std::move(tree), c, p, rooted.root, std::move(w), std::move(packing.stars));
}

struct SharesBundle {
    std::vector<FieldElement> secret;
    std::vector<FieldElement> randomness;
    // Indexed by vertex id.
    std::vector<Share> shares;
};

inline void check_field_vector(const Scheme& sch, std::span<const FieldElement> v, std::size_t expected,
                               const char* what) {
    if (v.size() != expected) {
        throw InputError(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(expected));
    }
    for (const auto x : v) {
        if (x >= sch.p) {
            throw InputError(std::string(what) + " value " + std::to_string(x) + " is not below p = " +
                             std::to_string(sch.p));
        }
    }
}

/// Pieces f(alpha_j) for every star j.
inline std::vector<FieldElement> pieces(const Scheme& sch, std::span<const FieldElement> secret) {
    const auto f = sch.field();
    std::vector<FieldElement> out(sch.m());
    for (std::size_t j = 0; j < sch.m(); ++j) {
        out[j] = evaluate_poly(f, secret, sch.alpha(j));
    }
    return out;
}

/// Share coordinates: r_j for a center of star j, f(alpha_j) + r_j for a leaf.
/// With `pad`, every share is zero-extended to length 2c - 1.
inline SharesBundle deal(const Scheme& sch, std::span<const FieldElement> secret,
                         std::span<const FieldElement> randomness, bool pad = false) {
    check_field_vector(sch, secret, sch.c, "secret");
    check_field_vector(sch, randomness, sch.m(), "randomness");
    const auto f = sch.field();
    const auto piece = pieces(sch, secret);
    SharesBundle b{{secret.begin(), secret.end()}, {randomness.begin(), randomness.end()}, {}};
    b.shares.resize(sch.layout.size());
    for (Vertex v = 0; v < sch.layout.size(); ++v) {
        for (const auto& e : sch.layout[v]) {
            b.shares[v].push_back(e.role == Role::Center ? randomness[e.star]
                                                         : f.add(piece[e.star], randomness[e.star]));
        }
        if (pad) {
            b.shares[v].resize(std::max(b.shares[v].size(), 2 * sch.c - 1), 0);
        }
    }
    return b;
}

/// Uniform randomness from mt19937_64 seeded with `seed`; each value is a
/// raw 64-bit draw reduced mod p, redrawn when it falls in the last partial
/// block of size 2^64 mod p.
inline std::vector<FieldElement> seeded_randomness(const Scheme& sch, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % sch.p + 1) % sch.p;
    std::vector<FieldElement> r(sch.m());
    for (auto& x : r) {
        std::uint64_t draw = gen();
        while (draw > limit) {
            draw = gen();
        }
        x = draw % sch.p;
    }
    return r;
}

inline SharesBundle deal_seeded(const Scheme& sch, std::span<const FieldElement> secret, std::uint64_t seed,
                                bool pad = false) {
    const auto r = seeded_randomness(sch, seed);
    return deal(sch, secret, r, pad);
}

namespace detail {

// Accepts the plain share or its zero-padded form.
inline std::span<const FieldElement> unpadded(const Scheme& sch, Vertex v, std::span<const FieldElement> share) {
    const std::size_t k = sch.share_length(v);
    if (share.size() == k) {
        return share;
    }
    if (share.size() == 2 * sch.c - 1 && share.size() > k &&
        std::all_of(share.begin() + static_cast<std::ptrdiff_t>(k), share.end(),
                    [](FieldElement x) { return x == 0; })) {
        return share.first(k);
    }
    throw InputError("share of " + sch.tree.name(v) + " has length " + std::to_string(share.size()) +
                     ", expected " + std::to_string(k));
}

}  // namespace detail

/// Recovers the secret from the two shares of an edge: each star through the
/// edge gives its piece as leaf coordinate minus center coordinate, and the
/// c pieces are interpolated. Corrupted shares give a wrong secret silently.
inline std::vector<FieldElement> reconstruct(const Scheme& sch, Vertex u, Vertex v,
                                             std::span<const FieldElement> share_u,
                                             std::span<const FieldElement> share_v) {
    if (u >= sch.tree.vertex_count() || v >= sch.tree.vertex_count() || !sch.tree.adjacent(u, v)) {
        throw InputError("reconstruction needs an edge of the tree");
    }
    const auto su = detail::unpadded(sch, u, share_u);
    const auto sv = detail::unpadded(sch, v, share_v);
    for (const auto x : su) {
        if (x >= sch.p) {
            throw InputError("share value outside the field");
        }
    }
    for (const auto x : sv) {
        if (x >= sch.p) {
            throw InputError("share value outside the field");
        }
    }
    const auto f = sch.field();
    std::map<std::size_t, std::pair<std::size_t, Role>> in_v;
    for (std::size_t i = 0; i < sch.layout[v].size(); ++i) {
        in_v[sch.layout[v][i].star] = {i, sch.layout[v][i].role};
    }
    std::vector<EvalPoint> points;
    for (std::size_t i = 0; i < sch.layout[u].size(); ++i) {
        const auto& e = sch.layout[u][i];
        const auto it = in_v.find(e.star);
        if (it == in_v.end()) {
            continue;
        }
        const auto [k, role_v] = it->second;
        if (e.role == role_v) {
            continue;
        }
        const FieldElement piece = e.role == Role::Leaf ? f.sub(su[i], sv[k]) : f.sub(sv[k], su[i]);
        points.push_back({sch.alpha(e.star), piece});
    }
    if (points.size() != sch.c) {
        throw InputError("edge " + sch.tree.name(u) + " " + sch.tree.name(v) + " lies in " +
                         std::to_string(points.size()) + " stars, expected " + std::to_string(sch.c));
    }
    return interpolate_secret(f, points, sch.c);
}

/// M_v over columns (s_0..s_{c-1}, r_1..r_m): a center row of star j is the
/// unit vector at r_j, a leaf row is (1, alpha_j, ..., alpha_j^{c-1}) plus
/// the unit at r_j.
inline std::vector<FieldMatrix> emit_matrices(const Scheme& sch) {
    const auto f = sch.field();
    const std::size_t cols = sch.c + sch.m();
    std::vector<FieldMatrix> out;
    out.reserve(sch.layout.size());
    for (const auto& entries : sch.layout) {
        FieldMatrix mv(entries.size(), cols, sch.p);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.role == Role::Leaf) {
                FieldElement power = 1 % sch.p;
                for (std::size_t k = 0; k < sch.c; ++k) {
                    mv.at(i, k) = power;
                    power = f.mul(power, sch.alpha(e.star));
                }
            }
            mv.at(i, sch.c + e.star) = 1;
        }
        out.push_back(std::move(mv));
    }
    return out;
}

/// All maximal independent sets, each sorted, listed in lexicographic order.
inline std::vector<VertexSet> max_independent_sets(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 24) {
        throw InputError("maximal independent set enumeration supports at most 24 vertices");
    }
    if (n == 0) {
        return {};
    }
    const auto adj = adjacency_masks(g);
    const VertexMask all = (VertexMask{1} << n) - 1;
    // Cliques of the complement, Bron-Kerbosch with pivoting.
    std::vector<VertexMask> found;
    auto expand = [&](auto&& self, VertexMask r, VertexMask candidates, VertexMask excluded) -> void {
        if (candidates == 0 && excluded == 0) {
            found.push_back(r);
            return;
        }
        const VertexMask pool = candidates | excluded;
        const auto pivot = static_cast<Vertex>(std::countr_zero(pool));
        const VertexMask pivot_nb = all & ~adj[pivot] & ~(VertexMask{1} << pivot);
        for (VertexMask rest = candidates & ~pivot_nb; rest != 0; rest &= rest - 1) {
            const auto v = static_cast<Vertex>(std::countr_zero(rest));
            const VertexMask bit = VertexMask{1} << v;
            const VertexMask nb = all & ~adj[v] & ~bit;
            self(self, r | bit, candidates & nb, excluded & nb);
            candidates &= ~bit;
            excluded |= bit;
        }
    };
    expand(expand, 0, all, 0);
    std::vector<VertexSet> sets;
    sets.reserve(found.size());
    for (const auto m : found) {
        sets.push_back(vertices_of(m));
    }
    std::sort(sets.begin(), sets.end());
    return sets;
}

struct CheckResult {
    std::string name;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::size_t assignments = 0;

    bool pass() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; }));
    }
    /// One `PASS <check>` or `FAIL <check>` line per check.
    std::string text() const {
        std::ostringstream out;
        for (const auto& c : checks) {
            out << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
        }
        return out.str();
    }
};

namespace detail {

inline std::string set_label(const Graph& g, const VertexSet& set) {
    std::string s = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        s += (i ? "," : "") + g.name(set[i]);
    }
    return s + "}";
}

inline FieldMatrix stacked(const std::vector<FieldMatrix>& mats, std::span<const Vertex> vertices,
                           std::size_t cols, std::uint64_t p) {
    FieldMatrix out(0, cols, p);
    for (const Vertex v : vertices) {
        out = stack(out, mats.at(v));
    }
    return out;
}

}  // namespace detail

/// Rank tests on given share matrices. Correctness: every secret functional
/// (e_i | 0) lies in the row space of M_u stacked on M_v for each edge.
/// Privacy: for each maximal independent set A, splitting M_A into secret
/// columns B and randomness columns C, rank([C|B]) = rank(C).
inline VerifyReport verify_linear(const Scheme& sch, const std::vector<FieldMatrix>& mats) {
    const std::size_t cols = sch.c + sch.m();
    if (mats.size() != sch.tree.vertex_count()) {
        throw InputError("one share matrix per vertex expected");
    }
    for (const auto& mv : mats) {
        if (mv.cols != cols || mv.p != sch.p) {
            throw InputError("share matrix has the wrong shape or modulus");
        }
    }
    VerifyReport report;
    const auto& g = sch.tree;
    report.checks.push_back({"randomness length " + std::to_string(sch.m()) + " < n*c = " +
                                 std::to_string(g.vertex_count() * sch.c),
                             sch.m() < g.vertex_count() * sch.c});
    std::size_t longest = 0;
    for (const auto& mv : mats) {
        longest = std::max(longest, mv.rows);
    }
    report.checks.push_back({"max share length " + std::to_string(longest) + " <= 2c-1 = " +
                                 std::to_string(2 * sch.c - 1),
                             longest <= 2 * sch.c - 1});
    for (const auto& e : g.edges()) {
        const Vertex pair[2] = {e.u, e.v};
        const auto m = detail::stacked(mats, pair, cols, sch.p);
        bool ok = true;
        std::vector<FieldElement> functional(cols, 0);
        for (std::size_t i = 0; i < sch.c && ok; ++i) {
            std::fill(functional.begin(), functional.end(), 0);
            functional[i] = 1;
            ok = rowspace_contains(m, functional);
        }
        report.checks.push_back({"edge " + g.name(e.u) + " " + g.name(e.v) + " recovers the secret", ok});
    }
    for (const auto& set : max_independent_sets(g)) {
        const auto m = detail::stacked(mats, set, cols, sch.p);
        const auto secret_block = m.columns(0, sch.c);
        const auto random_block = m.columns(sch.c, sch.m());
        const bool ok = mat_rank(side_by_side(random_block, secret_block)) == mat_rank(random_block);
        report.checks.push_back({"independent set " + detail::set_label(g, set) + " learns nothing", ok});
    }
    return report;
}

inline VerifyReport verify_linear(const Scheme& sch) { return verify_linear(sch, emit_matrices(sch)); }

inline constexpr std::uint64_t kDefaultExhaustiveLimit = std::uint64_t{1} << 22;

/// Enumerates every (s, r). Each edge must reconstruct s every time, and
/// for each maximal independent set the multiset of its joint shares over
/// all r must be the same for every secret s.
inline VerifyReport verify_exhaustive(const Scheme& sch, std::uint64_t limit = kDefaultExhaustiveLimit) {
    const std::size_t dims = sch.c + sch.m();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < dims; ++i) {
        if (total > limit / sch.p) {
            throw InputError("p^(c+m) exceeds the enumeration limit " + std::to_string(limit));
        }
        total *= sch.p;
    }
    const auto& g = sch.tree;
    const auto sets = max_independent_sets(g);
    std::vector<bool> edge_ok(g.edge_count(), true);
    std::vector<bool> set_ok(sets.size(), true);
    using Histogram = std::map<std::vector<FieldElement>, std::uint64_t>;
    std::vector<Histogram> reference(sets.size());

    auto next = [&](std::vector<FieldElement>& digits) {
        for (auto& d : digits) {
            if (++d < sch.p) {
                return true;
            }
            d = 0;
        }
        return false;
    };

    std::vector<FieldElement> s(sch.c, 0);
    bool first_secret = true;
    VerifyReport report;
    do {
        std::vector<Histogram> seen(sets.size());
        std::vector<FieldElement> r(sch.m(), 0);
        do {
            const auto b = deal(sch, s, r);
            ++report.assignments;
            for (std::size_t i = 0; i < g.edge_count(); ++i) {
                const auto& e = g.edges()[i];
                if (!edge_ok[i]) {
                    continue;
                }
                try {
                    edge_ok[i] = reconstruct(sch, e.u, e.v, b.shares[e.u], b.shares[e.v]) == s;
                } catch (const InputError&) {
                    edge_ok[i] = false;  // too few pieces on this edge
                }
            }
            for (std::size_t k = 0; k < sets.size(); ++k) {
                std::vector<FieldElement> joint;
                for (const Vertex v : sets[k]) {
                    joint.insert(joint.end(), b.shares[v].begin(), b.shares[v].end());
                }
                ++seen[k][joint];
            }
        } while (next(r));
        for (std::size_t k = 0; k < sets.size(); ++k) {
            if (first_secret) {
                reference[k] = std::move(seen[k]);
            } else if (seen[k] != reference[k]) {
                set_ok[k] = false;
            }
        }
        first_secret = false;
    } while (next(s));

    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto& e = g.edges()[i];
        report.checks.push_back(
            {"edge " + g.name(e.u) + " " + g.name(e.v) + " reconstructs every secret", edge_ok[i]});
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
        report.checks.push_back({"independent set " + detail::set_label(g, sets[k]) +
                                     " sees one distribution for all secrets",
                                 set_ok[k]});
    }
    return report;
}

}  // namespace coreshare

#endif
