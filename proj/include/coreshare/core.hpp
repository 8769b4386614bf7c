#ifndef CORESHARE_CORE_HPP
#define CORESHARE_CORE_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coreshare/entropy.hpp"
#include "coreshare/errors.hpp"
#include "coreshare/graph.hpp"
#include "coreshare/rational.hpp"

namespace coreshare {

using VertexSet = std::vector<Vertex>;

namespace detail {

inline bool mask_is_connected(std::span<const VertexMask> adj, VertexMask set) {
    if (set == 0) {
        return false;
    }
    VertexMask reached = set & (~set + 1);
    VertexMask frontier = reached;
    while (frontier != 0) {
        VertexMask next = 0;
        for (VertexMask m = frontier; m != 0; m &= m - 1) {
            next |= adj[std::countr_zero(m)];
        }
        next &= set & ~reached;
        reached |= next;
        frontier = next;
    }
    return reached == set;
}

// Picks one witness per member so that the picks are pairwise non-adjacent.
// Witness lists of different members are disjoint (a witness has exactly one
// neighbor inside the set), so only independence needs checking.
inline bool choose_independent(std::span<const std::vector<Vertex>> options,
                               std::span<const VertexMask> adj, std::size_t depth,
                               VertexMask chosen) {
    if (depth == options.size()) {
        return true;
    }
    for (const Vertex w : options[depth]) {
        if ((adj[w] & chosen) == 0 &&
            choose_independent(options, adj, depth + 1, chosen | (VertexMask{1} << w))) {
            return true;
        }
    }
    return false;
}

inline bool mask_is_core(std::span<const VertexMask> adj, VertexMask set) {
    if (!mask_is_connected(adj, set)) {
        return false;
    }
    std::vector<std::vector<Vertex>> options;
    for (VertexMask m = set; m != 0; m &= m - 1) {
        const auto x = static_cast<Vertex>(std::countr_zero(m));
        const VertexMask bx = VertexMask{1} << x;
        std::vector<Vertex> witnesses;
        for (VertexMask c = adj[x] & ~set; c != 0; c &= c - 1) {
            const auto w = static_cast<Vertex>(std::countr_zero(c));
            if ((adj[w] & set) == bx) {
                witnesses.push_back(w);
            }
        }
        if (witnesses.empty()) {
            return false;
        }
        options.push_back(std::move(witnesses));
    }
    std::sort(options.begin(), options.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return choose_independent(options, adj, 0, 0);
}

// a < b as sorted vertex lists of equal length: the smallest vertex in
// exactly one of them belongs to a.
inline bool lex_less_same_size(VertexMask a, VertexMask b) {
    const VertexMask diff = a ^ b;
    return diff != 0 && (a & diff & (~diff + 1)) != 0;
}

}  // namespace detail

/// Core test for arbitrary graphs: X induces a connected subgraph and every
/// x in X has an outside neighbor x' whose only neighbor in X is x, with the
/// chosen x' pairwise non-adjacent.
inline bool is_core(const Graph& g, std::span<const Vertex> set) {
    if (set.empty()) {
        throw InputError("core test on an empty set");
    }
    for (const Vertex v : set) {
        if (v >= g.vertex_count()) {
            throw InputError("unknown vertex id " + std::to_string(v));
        }
    }
    return detail::mask_is_core(adjacency_masks(g), mask_of(set));
}

struct CoreWitness {
    std::size_t size = 0;
    VertexSet vertices;
};

inline constexpr std::size_t kDefaultBruteForceCap = 16;

/// Largest core by enumerating every vertex subset. Among the largest cores
/// the lexicographically first sorted vertex list is returned. A graph with
/// no core (no edges) yields size 0.
inline CoreWitness max_core_bruteforce(const Graph& g,
                                       std::size_t size_cap = kDefaultBruteForceCap) {
    const std::size_t n = g.vertex_count();
    if (n > size_cap) {
        throw InputError("graph has " + std::to_string(n) + " vertices, brute force cap is " +
                         std::to_string(size_cap));
    }
    if (n > 30) {
        throw InputError("brute force core search supports at most 30 vertices");
    }
    const auto adj = adjacency_masks(g);
    std::optional<VertexMask> best;
    int best_size = 0;
    for (VertexMask m = 1; m < (VertexMask{1} << n); ++m) {
        const int size = std::popcount(m);
        if (size < best_size) {
            continue;
        }
        if (size == best_size && best && !detail::lex_less_same_size(m, *best)) {
            continue;
        }
        if (detail::mask_is_core(adj, m)) {
            best = m;
            best_size = size;
        }
    }
    if (!best) {
        return {};
    }
    return {static_cast<std::size_t>(best_size), vertices_of(*best)};
}

/// Every core of `g`, by enumeration; same cap rules as the brute force.
inline std::vector<VertexSet> all_cores(const Graph& g, std::size_t size_cap = kDefaultBruteForceCap) {
    const std::size_t n = g.vertex_count();
    if (n > size_cap || n > 30) {
        throw InputError("graph too large for core enumeration");
    }
    const auto adj = adjacency_masks(g);
    std::vector<VertexSet> cores;
    for (VertexMask m = 1; m < (VertexMask{1} << n); ++m) {
        if (detail::mask_is_core(adj, m)) {
            cores.push_back(vertices_of(m));
        }
    }
    return cores;
}

/// Positive integer vertex weights.
class WeightFunction {
public:
    WeightFunction() = default;
    explicit WeightFunction(std::vector<std::int64_t> values) : values_(std::move(values)) {
        for (const auto w : values_) {
            if (w < 1) {
                throw InputError("weights must be positive integers");
            }
        }
    }
    static WeightFunction uniform(std::size_t n) {
        return WeightFunction(std::vector<std::int64_t>(n, 1));
    }
    static WeightFunction of(const Graph& g) { return WeightFunction(g.weights()); }

    std::size_t size() const { return values_.size(); }
    std::int64_t operator[](Vertex v) const { return values_.at(v); }
    void increase(Vertex v, std::int64_t by) {
        if (by < 0) {
            throw InputError("weights only increase");
        }
        values_.at(v) += by;
    }
    const std::vector<std::int64_t>& values() const { return values_; }

    friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

private:
    std::vector<std::int64_t> values_;
};

namespace detail {

// Subtree DP shared by the weighted and unweighted forms. best[v] is the
// heaviest core of the subtree below v that contains v: 0 for childless v,
// otherwise w(v) plus every child's value except the smallest one.
// topmost[v] is the heaviest core whose vertex closest to the root is v,
// where v's parent may serve as its outside neighbor (no child is dropped).
struct SubtreeDp {
    std::vector<std::int64_t> best;
    std::vector<std::int64_t> topmost;
    std::vector<std::optional<Vertex>> dropped;
};

inline SubtreeDp subtree_dp(const std::vector<std::optional<Vertex>>& parent,
                            const std::vector<std::vector<Vertex>>& children,
                            const std::vector<Vertex>& bfs_order, Vertex root,
                            std::span<const std::int64_t> weight) {
    const std::size_t n = parent.size();
    SubtreeDp dp{std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0),
                 std::vector<std::optional<Vertex>>(n)};
    for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
        const Vertex v = *it;
        if (children[v].empty()) {
            dp.best[v] = 0;
            dp.topmost[v] = v == root ? 0 : weight[v];
            continue;
        }
        std::int64_t sum = 0;
        Vertex smallest = children[v].front();
        for (const Vertex c : children[v]) {
            sum += dp.best[c];
            if (dp.best[c] < dp.best[smallest]) {
                smallest = c;
            }
        }
        dp.best[v] = weight[v] + sum - dp.best[smallest];
        dp.dropped[v] = smallest;
        dp.topmost[v] = v == root ? dp.best[v] : weight[v] + sum;
    }
    return dp;
}

inline std::int64_t heaviest_core_containing(const Graph& tree, std::span<const std::int64_t> weight,
                                             Vertex v) {
    const auto arrays = root_arrays(tree, v);
    return subtree_dp(arrays.parent, arrays.children, arrays.bfs_order, v, weight).best[v];
}

}  // namespace detail

struct CoreProfile {
    // Largest core of the subtree below v that contains v.
    std::vector<std::size_t> per_vertex;
    std::size_t global_c = 0;
    VertexSet witness;
};

/// Largest core of a tree in linear time.
inline CoreProfile tree_core_sizes(const RootedTree& t) {
    if (t.size() < 2) {
        throw InputError("core sizes need a tree with at least 2 vertices");
    }
    const std::vector<std::int64_t> unit(t.size(), 1);
    const auto dp = detail::subtree_dp(t.parent, t.children, t.bfs_order, t.root, unit);

    CoreProfile profile;
    profile.per_vertex.reserve(t.size());
    for (const auto b : dp.best) {
        profile.per_vertex.push_back(static_cast<std::size_t>(b));
    }
    Vertex top = t.root;
    for (const Vertex v : t.bfs_order) {
        if (dp.topmost[v] > dp.topmost[top]) {
            top = v;
        }
    }
    profile.global_c = static_cast<std::size_t>(dp.topmost[top]);

    // Rebuild one maximum core: the top vertex keeps every child (or all but
    // the dropped one at the root), each included child keeps all but its
    // dropped child; children with value 0 stay outside.
    std::vector<Vertex> stack{top};
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        profile.witness.push_back(v);
        const bool keep_all = v == top && v != t.root;
        for (const Vertex c : t.children[v]) {
            if (dp.best[c] > 0 && (keep_all || dp.dropped[v] != c)) {
                stack.push_back(c);
            }
        }
    }
    std::sort(profile.witness.begin(), profile.witness.end());
    return profile;
}

struct WeightedCoreProfile {
    // Heaviest core of the subtree below v that contains v.
    std::vector<std::int64_t> per_vertex;
    // per_vertex at the root: the heaviest core containing the root.
    std::int64_t root_value = 0;
    // Heaviest core anywhere in the tree.
    std::int64_t max_core_weight = 0;
};

inline WeightedCoreProfile weighted_core_profile(const RootedTree& t, const WeightFunction& w) {
    if (w.size() != t.size()) {
        throw InputError("weight function size does not match the tree");
    }
    const auto dp = detail::subtree_dp(t.parent, t.children, t.bfs_order, t.root, w.values());
    WeightedCoreProfile profile;
    profile.per_vertex = dp.best;
    profile.root_value = dp.best[t.root];
    profile.max_core_weight = *std::max_element(dp.topmost.begin(), dp.topmost.end());
    return profile;
}

/// Heaviest core of the tree `tree` that contains v.
inline std::int64_t max_weight_core_containing(const Graph& tree, const WeightFunction& w, Vertex v) {
    if (!is_tree(tree)) {
        throw NotATreeError();
    }
    if (w.size() != tree.vertex_count()) {
        throw InputError("weight function size does not match the tree");
    }
    return detail::heaviest_core_containing(tree, w.values(), v);
}

/// Starts from all-one weights and, vertex by vertex in id order, raises the
/// weight until the heaviest core through that vertex weighs exactly c.
/// Quadratic in the number of vertices.
inline WeightFunction maximalize_weights(const Graph& tree, std::size_t c) {
    if (!is_tree(tree) ) {
        throw NotATreeError();
    }
    if (tree.vertex_count() < 2) {
        throw InputError("weight maximization needs at least 2 vertices");
    }
    auto w = WeightFunction::uniform(tree.vertex_count());
    const auto target = static_cast<std::int64_t>(c);
    for (Vertex v = 0; v < tree.vertex_count(); ++v) {
        const auto heaviest = detail::heaviest_core_containing(tree, w.values(), v);
        if (heaviest > target) {
            throw InputError("c is smaller than the largest core of the tree");
        }
        w.increase(v, target - heaviest);
    }
    return w;
}

/// True iff no core weighs more than c and every vertex lies in a core of
/// weight exactly c.
inline bool is_maximal_weighting(const Graph& tree, const WeightFunction& w, std::size_t c) {
    if (!is_tree(tree)) {
        throw NotATreeError();
    }
    if (w.size() != tree.vertex_count()) {
        throw InputError("weight function size does not match the tree");
    }
    const auto target = static_cast<std::int64_t>(c);
    for (Vertex v = 0; v < tree.vertex_count(); ++v) {
        if (detail::heaviest_core_containing(tree, w.values(), v) != target) {
            return false;
        }
    }
    return true;
}

/// Information complexity 2 - 1/c of a tree whose largest core has size c.
inline Rational sigma_of_tree(std::size_t c) {
    if (c < 1) {
        throw InputError("core size must be at least 1");
    }
    return 2 - make_rational(1, static_cast<std::int64_t>(c));
}

}  // namespace coreshare

#endif
