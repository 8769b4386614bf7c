#ifndef CORESHARE_TEST_SUPPORT_HPP
#define CORESHARE_TEST_SUPPORT_HPP

// Graph generators and fixture loading shared by the unit and acceptance tests.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coreshare/coreshare.hpp"

namespace coreshare::testing {

inline std::string fixture_path(const std::string& name) { return std::string(CORESHARE_DATA_DIR) + "/" + name; }

inline Graph load_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) {
        throw InputError("missing fixture " + name);
    }
    return parse_graph(in);
}

inline Graph with_vertices(std::size_t n) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.add_vertex("v" + std::to_string(i));
    }
    return g;
}

inline Graph path_graph(std::size_t n) {
    Graph g = with_vertices(n);
    for (std::size_t i = 1; i < n; ++i) {
        g.add_edge(i - 1, i);
    }
    return g;
}

inline Graph cycle_graph(std::size_t n) {
    Graph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

inline Graph star_graph(std::size_t leaves) {
    Graph g = with_vertices(leaves + 1);
    for (std::size_t i = 1; i <= leaves; ++i) {
        g.add_edge(0, i);
    }
    return g;
}

/// Tree from a Pruefer sequence over vertices 0..n-1 (n = code length + 2).
inline Graph tree_from_pruefer(const std::vector<std::size_t>& code) {
    const std::size_t n = code.size() + 2;
    Graph g = with_vertices(n);
    std::vector<std::size_t> degree(n, 1);
    for (const auto x : code) {
        ++degree[x];
    }
    for (const auto x : code) {
        for (std::size_t leaf = 0; leaf < n; ++leaf) {
            if (degree[leaf] == 1) {
                g.add_edge(leaf, x);
                --degree[leaf];
                --degree[x];
                break;
            }
        }
    }
    std::vector<std::size_t> last;
    for (std::size_t v = 0; v < n; ++v) {
        if (degree[v] == 1) {
            last.push_back(v);
        }
    }
    g.add_edge(last.at(0), last.at(1));
    return g;
}

/// Uniform labeled tree on n >= 2 vertices.
inline Graph random_tree(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> code(n - 2);
    for (auto& x : code) {
        x = pick(rng);
    }
    return tree_from_pruefer(code);
}

/// Random spanning tree plus each remaining pair with probability `density`.
inline Graph random_connected_graph(std::size_t n, double density, std::mt19937_64& rng) {
    Graph g = n >= 2 ? random_tree(n, rng) : with_vertices(n);
    std::bernoulli_distribution coin(density);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!g.adjacent(a, b) && coin(rng)) {
                g.add_edge(a, b);
            }
        }
    }
    return g;
}

namespace detail_support {

inline std::string ahu(const Graph& g, Vertex v, std::optional<Vertex> parent) {
    std::vector<std::string> parts;
    for (const Vertex u : g.neighbors(v)) {
        if (u != parent) {
            parts.push_back(ahu(g, u, v));
        }
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) {
        s += p;
    }
    return s + ")";
}

}  // namespace detail_support

/// Isomorphism-invariant code of a tree: smallest AHU string over its centers.
inline std::string tree_canonical_form(const Graph& g) {
    std::vector<std::size_t> degree(g.vertex_count());
    std::vector<Vertex> layer;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        degree[v] = g.degree(v);
        if (degree[v] <= 1) {
            layer.push_back(v);
        }
    }
    std::size_t remaining = g.vertex_count();
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<Vertex> next;
        for (const Vertex v : layer) {
            for (const Vertex u : g.neighbors(v)) {
                if (--degree[u] == 1) {
                    next.push_back(u);
                }
            }
        }
        layer = std::move(next);
    }
    std::string best;
    for (const Vertex c : layer) {
        auto code = detail_support::ahu(g, c, std::nullopt);
        if (best.empty() || code < best) {
            best = std::move(code);
        }
    }
    return best;
}

/// One representative of every isomorphism class of trees on n >= 2
/// vertices, found by running through all Pruefer sequences.
inline std::vector<Graph> nonisomorphic_trees(std::size_t n) {
    if (n == 2) {
        return {path_graph(2)};
    }
    std::vector<Graph> out;
    std::set<std::string> seen;
    std::vector<std::size_t> code(n - 2, 0);
    for (;;) {
        Graph t = tree_from_pruefer(code);
        if (seen.insert(tree_canonical_form(t)).second) {
            out.push_back(std::move(t));
        }
        std::size_t i = 0;
        while (i < code.size() && ++code[i] == n) {
            code[i++] = 0;
        }
        if (i == code.size()) {
            break;
        }
    }
    return out;
}

}  // namespace coreshare::testing

#endif
