#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace coreshare;
using namespace coreshare::testing;

namespace {

VertexSet ids(const Graph& g, std::initializer_list<const char*> names) {
    VertexSet out;
    for (const char* n : names) {
        out.push_back(g.id(n));
    }
    return out;
}

// Vertices of the subtree below v.
VertexSet subtree(const RootedTree& t, Vertex v) {
    VertexSet out;
    for (std::vector<Vertex> stack{v}; !stack.empty();) {
        const Vertex x = stack.back();
        stack.pop_back();
        out.push_back(x);
        stack.insert(stack.end(), t.children[x].begin(), t.children[x].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Induced subgraph on `keep` (sorted), vertex i of the result is keep[i].
Graph induced(const Graph& g, const VertexSet& keep) {
    Graph h;
    for (const Vertex v : keep) {
        h.add_vertex(g.name(v));
    }
    for (const auto& e : g.edges()) {
        const auto a = std::lower_bound(keep.begin(), keep.end(), e.u);
        const auto b = std::lower_bound(keep.begin(), keep.end(), e.v);
        if (a != keep.end() && *a == e.u && b != keep.end() && *b == e.v) {
            h.add_edge(static_cast<Vertex>(a - keep.begin()), static_cast<Vertex>(b - keep.begin()));
        }
    }
    return h;
}

std::int64_t weight_of(const VertexSet& set, const std::vector<std::int64_t>& w) {
    std::int64_t s = 0;
    for (const Vertex v : set) {
        s += w[v];
    }
    return s;
}

// Heaviest core of the subtree below v (as a graph of its own) containing v.
std::int64_t brute_subtree_value(const RootedTree& t, const std::vector<std::int64_t>& w, Vertex v) {
    const auto keep = subtree(t, v);
    const auto h = induced(t.base, keep);
    const auto local = static_cast<Vertex>(std::lower_bound(keep.begin(), keep.end(), v) - keep.begin());
    std::int64_t best = 0;
    if (h.vertex_count() < 2) {
        return 0;
    }
    for (const auto& core : all_cores(h)) {
        if (std::find(core.begin(), core.end(), local) == core.end()) {
            continue;
        }
        std::int64_t s = 0;
        for (const Vertex x : core) {
            s += w[keep[x]];
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

TEST(IsCore, Examples) {
    const auto delta = load_fixture("delta.graph");
    EXPECT_TRUE(is_core(delta, ids(delta, {"a"})));
    EXPECT_FALSE(is_core(delta, ids(delta, {"a", "b"})));
    const auto p4 = load_fixture("p4.graph");
    EXPECT_TRUE(is_core(p4, ids(p4, {"b", "c"})));
    EXPECT_FALSE(is_core(p4, ids(p4, {"a", "b"})));
    EXPECT_FALSE(is_core(p4, ids(p4, {"a", "c"})));
    EXPECT_THROW(is_core(p4, VertexSet{}), InputError);
    EXPECT_THROW(is_core(p4, VertexSet{9}), InputError);
}

TEST(IsCore, IsolatedVertexIsNotACore) {
    const auto g = parse_graph(std::string_view("a b\nweight z 1"));
    EXPECT_FALSE(is_core(g, ids(g, {"z"})));
    EXPECT_TRUE(is_core(g, ids(g, {"a"})));
}

TEST(IsCore, WitnessesMustBeIndependent) {
    // x and y each have one private outside neighbor, px and py, but px and
    // py are adjacent: no independent witness system.
    const auto g = parse_graph(std::string_view("x y\nx px\ny py\npx py"));
    EXPECT_FALSE(is_core(g, ids(g, {"x", "y"})));
    const auto h = parse_graph(std::string_view("x y\nx px\ny py"));
    EXPECT_TRUE(is_core(h, ids(h, {"x", "y"})));
}

TEST(IsCore, TreeCriterionAgreesWithDefinition) {
    // In a tree a connected set is a core iff every member has an outside neighbor.
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_tree(2 + trial % 9, rng);
        const std::size_t n = g.vertex_count();
        const auto adj = adjacency_masks(g);
        for (VertexMask m = 1; m < (VertexMask{1} << n); ++m) {
            bool simple = detail::mask_is_connected(adj, m);
            for (const Vertex v : vertices_of(m)) {
                simple = simple && (adj[v] & ~m) != 0;
            }
            EXPECT_EQ(is_core(g, vertices_of(m)), simple);
        }
    }
}

TEST(MaxCoreBruteForce, Examples) {
    const auto delta = load_fixture("delta.graph");
    const auto d = max_core_bruteforce(delta);
    EXPECT_EQ(d.size, 1U);
    EXPECT_EQ(d.vertices, ids(delta, {"a"}));
    const auto p4 = load_fixture("p4.graph");
    const auto p = max_core_bruteforce(p4);
    EXPECT_EQ(p.size, 2U);
    EXPECT_EQ(p.vertices, ids(p4, {"b", "c"}));
    const auto k13 = load_fixture("k13.graph");
    const auto k = max_core_bruteforce(k13);
    EXPECT_EQ(k.size, 1U);
    EXPECT_EQ(k.vertices, VertexSet{0});
    EXPECT_THROW(max_core_bruteforce(path_graph(17)), InputError);
    EXPECT_EQ(max_core_bruteforce(with_vertices(3)).size, 0U);
}

TEST(TreeCoreSizes, P4RootedAtB) {
    const auto g = load_fixture("p4.graph");
    const auto prof = tree_core_sizes(root_at(g, "b"));
    EXPECT_EQ(prof.per_vertex, (std::vector<std::size_t>{0, 2, 1, 0}));
    EXPECT_EQ(prof.global_c, 2U);
}

TEST(TreeCoreSizes, SmallFixtures) {
    EXPECT_EQ(tree_core_sizes(root_at(load_fixture("p2.graph"))).global_c, 1U);
    EXPECT_EQ(tree_core_sizes(root_at(load_fixture("p3.graph"))).global_c, 1U);
    EXPECT_EQ(tree_core_sizes(root_at(load_fixture("k13.graph"))).global_c, 1U);
    EXPECT_EQ(tree_core_sizes(root_at(load_fixture("fig2.graph"))).global_c, 7U);
}

TEST(TreeCoreSizes, MatchesBruteForceAndWitnessIsACore) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + trial % 13;
        const auto g = random_tree(n, rng);
        const auto prof = tree_core_sizes(root_at(g, static_cast<Vertex>(rng() % n)));
        EXPECT_EQ(prof.global_c, max_core_bruteforce(g).size);
        EXPECT_EQ(prof.witness.size(), prof.global_c);
        EXPECT_TRUE(is_core(g, prof.witness));
    }
}

TEST(TreeCoreSizes, TopmostCoresHaveNoChildDropped) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto g = random_tree(n, rng);
        const auto t = root_at(g, static_cast<Vertex>(rng() % n));
        const auto prof = tree_core_sizes(t);
        const auto cores = all_cores(g);
        for (Vertex v = 0; v < n; ++v) {
            if (v == t.root) {
                continue;
            }
            std::size_t expected = 1;
            for (const Vertex c : t.children[v]) {
                expected += prof.per_vertex[c];
            }
            const auto below = subtree(t, v);
            std::size_t best = 0;
            for (const auto& core : cores) {
                if (std::binary_search(core.begin(), core.end(), v) &&
                    std::includes(below.begin(), below.end(), core.begin(), core.end())) {
                    best = std::max(best, core.size());
                }
            }
            EXPECT_EQ(best, expected);
        }
    }
}

TEST(WeightedCoreProfile, P4UnitWeightsAtB) {
    const auto g = load_fixture("p4.graph");
    const auto t = root_at(g, "b");
    const auto prof = weighted_core_profile(t, WeightFunction::uniform(4));
    EXPECT_EQ(prof.per_vertex, (std::vector<std::int64_t>{0, 2, 1, 0}));
    for (Vertex v = 0; v < 4; ++v) {
        EXPECT_EQ(prof.per_vertex[v], brute_subtree_value(t, std::vector<std::int64_t>(4, 1), v));
    }
}

TEST(WeightedCoreProfile, SingleChildChain) {
    // v has the single child u, so c_w(v) = w(v).
    const auto g = parse_graph(std::string_view("r v\nv u\nr s\nweight v 5"));
    const auto prof = weighted_core_profile(root_at(g, "r"), WeightFunction::of(g));
    EXPECT_EQ(prof.per_vertex[g.id("v")], 5);
}

TEST(WeightedCoreProfile, MatchesBruteForceOnRandomWeights) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 10;
        const auto g = random_tree(n, rng);
        std::vector<std::int64_t> w(n);
        for (auto& x : w) {
            x = 1 + static_cast<std::int64_t>(rng() % 5);
        }
        const auto t = root_at(g, static_cast<Vertex>(rng() % n));
        const auto prof = weighted_core_profile(t, WeightFunction(w));
        for (Vertex v = 0; v < n; ++v) {
            EXPECT_EQ(prof.per_vertex[v], brute_subtree_value(t, w, v));
            if (!t.children[v].empty()) {
                EXPECT_GE(prof.per_vertex[v], w[v]);
            }
        }
        std::int64_t heaviest = 0;
        for (const auto& core : all_cores(g)) {
            heaviest = std::max(heaviest, weight_of(core, w));
        }
        EXPECT_EQ(prof.max_core_weight, heaviest);
        for (Vertex v = 0; v < n; ++v) {
            std::int64_t through_v = 0;
            for (const auto& core : all_cores(g)) {
                if (std::binary_search(core.begin(), core.end(), v)) {
                    through_v = std::max(through_v, weight_of(core, w));
                }
            }
            EXPECT_EQ(max_weight_core_containing(g, WeightFunction(w), v), through_v);
        }
    }
}

TEST(WeightedCoreProfile, Fig2SubtreeValues) {
    const auto g = load_fixture("fig2.graph");
    std::ifstream in(fixture_path("fig2.weights"));
    const auto listed = parse_graph(in);
    std::vector<std::int64_t> w(g.vertex_count(), 1);
    for (Vertex v = 0; v < listed.vertex_count(); ++v) {
        w[g.id(listed.name(v))] = listed.weight(v);
    }
    const auto prof = weighted_core_profile(root_at(g, "C"), WeightFunction(w));
    EXPECT_EQ(prof.per_vertex[g.id("B")], 6);
    EXPECT_EQ(prof.per_vertex[g.id("D")], 2);
    EXPECT_EQ(prof.per_vertex[g.id("E")], 5);
}

TEST(MaximalizeWeights, Examples) {
    const auto p4 = load_fixture("p4.graph");
    const auto w = maximalize_weights(p4, 2);
    EXPECT_EQ(w.values(), (std::vector<std::int64_t>{2, 1, 1, 2}));
    EXPECT_TRUE(is_maximal_weighting(p4, w, 2));
    EXPECT_EQ(maximalize_weights(load_fixture("p2.graph"), 1).values(), (std::vector<std::int64_t>{1, 1}));
    EXPECT_EQ(maximalize_weights(load_fixture("k13.graph"), 1).values(),
              (std::vector<std::int64_t>{1, 1, 1, 1}));
    EXPECT_THROW(maximalize_weights(load_fixture("p4.graph"), 1), InputError);
    EXPECT_THROW(maximalize_weights(load_fixture("delta.graph"), 1), NotATreeError);
}

TEST(MaximalizeWeights, Fig2ListedWeightsAreMaximal) {
    const auto g = load_fixture("fig2.graph");
    std::ifstream in(fixture_path("fig2.weights"));
    const auto listed = parse_graph(in);
    std::vector<std::int64_t> w(g.vertex_count(), 1);
    for (Vertex v = 0; v < listed.vertex_count(); ++v) {
        w[g.id(listed.name(v))] = listed.weight(v);
    }
    EXPECT_TRUE(is_maximal_weighting(g, WeightFunction(w), 7));
    EXPECT_FALSE(is_maximal_weighting(g, WeightFunction::uniform(g.vertex_count()), 7));
    EXPECT_EQ(max_weight_core_containing(g, WeightFunction::uniform(g.vertex_count()), g.id("D")), 6);
}

TEST(MaximalizeWeights, RandomTreesAreMaximalAndIdempotent) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + trial % 12;
        const auto g = random_tree(n, rng);
        const std::size_t c = tree_core_sizes(root_at(g)).global_c;
        const auto w = maximalize_weights(g, c);
        EXPECT_TRUE(is_maximal_weighting(g, w, c));
        // No core exceeds c, by enumeration.
        for (const auto& core : all_cores(g)) {
            EXPECT_LE(weight_of(core, w.values()), static_cast<std::int64_t>(c));
        }
        auto again = w;
        for (Vertex v = 0; v < n; ++v) {
            again.increase(v, static_cast<std::int64_t>(c) - max_weight_core_containing(g, again, v));
        }
        EXPECT_EQ(again, w);
    }
}

TEST(SigmaOfTree, Values) {
    EXPECT_EQ(sigma_of_tree(7), make_rational(13, 7));
    EXPECT_EQ(sigma_of_tree(1), 1);
    EXPECT_EQ(sigma_of_tree(2), make_rational(3, 2));
    EXPECT_EQ(1 / sigma_of_tree(7), make_rational(7, 13));
    EXPECT_THROW(sigma_of_tree(0), InputError);
}

TEST(WeightFunction, RejectsNonPositive) {
    EXPECT_THROW(WeightFunction(std::vector<std::int64_t>{1, 0}), InputError);
    auto w = WeightFunction::uniform(2);
    EXPECT_THROW(w.increase(0, -1), InputError);
}
