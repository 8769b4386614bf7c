#ifndef CORESHARE_GRAPH_HPP
#define CORESHARE_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coreshare/errors.hpp"

namespace coreshare {

using Vertex = std::size_t;

/// Unordered edge stored with the smaller vertex id first.
struct Edge {
    Vertex u;
    Vertex v;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Simple undirected graph with named vertices and positive integer vertex
/// weights (default 1). Vertex ids are dense and follow first appearance.
class Graph {
public:
    /// Returns the id of `name`, declaring it if unseen.
    Vertex add_vertex(std::string_view name) {
        if (auto id = find(name)) {
            return *id;
        }
        if (name.empty()) {
            throw InputError("empty vertex name");
        }
        names_.emplace_back(name);
        index_.emplace(names_.back(), names_.size() - 1);
        adjacency_.emplace_back();
        weights_.push_back(1);
        return names_.size() - 1;
    }

    void add_edge(Vertex a, Vertex b) {
        check(a);
        check(b);
        if (a == b) {
            throw InputError("self-loop at " + names_[a]);
        }
        const Edge e = make_edge(a, b);
        if (!edge_set_.insert(e).second) {
            throw InputError("duplicate edge " + names_[e.u] + " " + names_[e.v]);
        }
        edges_.push_back(e);
        insert_sorted(adjacency_[a], b);
        insert_sorted(adjacency_[b], a);
    }

    void add_edge(std::string_view a, std::string_view b) {
        const Vertex x = add_vertex(a);
        const Vertex y = add_vertex(b);
        add_edge(x, y);
    }

    void set_weight(Vertex v, std::int64_t w) {
        check(v);
        if (w < 1) {
            throw InputError("weight of " + names_[v] + " must be positive");
        }
        weights_[v] = w;
    }

    std::size_t vertex_count() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::string& name(Vertex v) const {
        check(v);
        return names_[v];
    }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<Vertex> find(std::string_view name) const {
        const auto it = index_.find(std::string(name));
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    Vertex id(std::string_view name) const {
        if (auto v = find(name)) {
            return *v;
        }
        throw InputError("unknown vertex '" + std::string(name) + "'");
    }

    /// Neighbors in increasing id order.
    const std::vector<Vertex>& neighbors(Vertex v) const {
        check(v);
        return adjacency_[v];
    }
    std::size_t degree(Vertex v) const { return neighbors(v).size(); }

    /// Edges in insertion order.
    const std::vector<Edge>& edges() const { return edges_; }

    bool adjacent(Vertex a, Vertex b) const { return edge_set_.count(make_edge(a, b)) != 0; }

    std::int64_t weight(Vertex v) const {
        check(v);
        return weights_[v];
    }
    const std::vector<std::int64_t>& weights() const { return weights_; }

    bool has_nonunit_weights() const {
        return std::any_of(weights_.begin(), weights_.end(), [](std::int64_t w) { return w != 1; });
    }

    /// Same names in the same order, same edge set, same weights.
    friend bool operator==(const Graph& a, const Graph& b) {
        return a.names_ == b.names_ && a.edge_set_ == b.edge_set_ && a.weights_ == b.weights_;
    }

private:
    void check(Vertex v) const {
        if (v >= names_.size()) {
            throw InputError("vertex id " + std::to_string(v) + " out of range");
        }
    }

    static void insert_sorted(std::vector<Vertex>& list, Vertex v) {
        list.insert(std::upper_bound(list.begin(), list.end(), v), v);
    }

    std::vector<std::string> names_;
    std::map<std::string, Vertex, std::less<>> index_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Edge> edges_;
    std::set<Edge> edge_set_;
    std::vector<std::int64_t> weights_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) {
        out.push_back(tok);
    }
    return out;
}

inline std::int64_t parse_weight(const std::string& text, std::size_t line) {
    std::size_t used = 0;
    long long w = 0;
    try {
        w = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "weight '" + text + "' is not an integer");
    }
    if (used != text.size()) {
        throw ParseError(line, "weight '" + text + "' is not an integer");
    }
    if (w < 1) {
        throw ParseError(line, "weight must be positive, got " + text);
    }
    return w;
}

}  // namespace detail

/// Reads the line-oriented graph format:
///
///     # comment
///     weight <v> <k>
///     <u> <v>
///
/// Vertices are declared at first mention.
inline Graph parse_graph(std::istream& in) {
    Graph g;
    std::set<Vertex> weighted;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens[0].front() == '#') {
            continue;
        }
        if (tokens[0] == "weight") {
            if (tokens.size() != 3) {
                throw ParseError(lineno, "expected 'weight <vertex> <k>'");
            }
            const auto w = detail::parse_weight(tokens[2], lineno);
            const Vertex v = g.add_vertex(tokens[1]);
            if (!weighted.insert(v).second) {
                throw ParseError(lineno, "weight of " + tokens[1] + " given twice");
            }
            g.set_weight(v, w);
            continue;
        }
        if (tokens.size() != 2) {
            throw ParseError(lineno, "expected '<u> <v>'");
        }
        if (tokens[0] == tokens[1]) {
            throw ParseError(lineno, "self-loop at " + tokens[0]);
        }
        const Vertex u = g.add_vertex(tokens[0]);
        const Vertex v = g.add_vertex(tokens[1]);
        if (g.adjacent(u, v)) {
            throw ParseError(lineno, "duplicate edge " + tokens[0] + " " + tokens[1]);
        }
        g.add_edge(u, v);
    }
    return g;
}

inline Graph parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_graph(in);
}

/// Writes `g` so that parse_graph reproduces it exactly, including vertex
/// order. A vertex whose first mention would otherwise come too late is
/// introduced by an edge to an earlier vertex or by a weight line.
inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    const std::size_t n = g.vertex_count();
    std::vector<bool> declared(n, false);
    std::vector<bool> weight_written(n, false);
    std::set<Edge> written;
    for (Vertex v = 0; v < n; ++v) {
        if (declared[v]) {
            continue;
        }
        const auto& nb = g.neighbors(v);
        const auto earlier = std::find_if(nb.begin(), nb.end(), [&](Vertex u) { return declared[u]; });
        if (earlier != nb.end()) {
            out << g.name(*earlier) << ' ' << g.name(v) << '\n';
            written.insert(make_edge(*earlier, v));
        } else {
            out << "weight " << g.name(v) << ' ' << g.weight(v) << '\n';
            weight_written[v] = true;
        }
        declared[v] = true;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!weight_written[v] && g.weight(v) != 1) {
            out << "weight " << g.name(v) << ' ' << g.weight(v) << '\n';
        }
    }
    for (const auto& e : g.edges()) {
        if (!written.count(e)) {
            out << g.name(e.u) << ' ' << g.name(e.v) << '\n';
        }
    }
    return out.str();
}

inline std::size_t component_count(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<bool> seen(n, false);
    std::size_t components = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) {
            continue;
        }
        ++components;
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (const Vertex u : g.neighbors(v)) {
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
            }
        }
    }
    return components;
}

inline bool is_tree(const Graph& g) {
    return g.vertex_count() >= 1 && g.edge_count() + 1 == g.vertex_count() &&
           component_count(g) == 1;
}

/// A tree viewed from a root. Children are listed in increasing id order and
/// bfs_order starts at the root, so walking it backwards visits every vertex
/// after all of its children.
struct RootedTree {
    Graph base;
    Vertex root = 0;
    std::vector<std::optional<Vertex>> parent;
    std::vector<std::vector<Vertex>> children;
    std::vector<Vertex> bfs_order;

    std::size_t size() const { return base.vertex_count(); }
    bool is_childless(Vertex v) const { return children[v].empty(); }
};

namespace detail {

// Parent/children/BFS arrays for `g` rooted at `root`; g must be a tree.
struct RootedArrays {
    std::vector<std::optional<Vertex>> parent;
    std::vector<std::vector<Vertex>> children;
    std::vector<Vertex> bfs_order;
};

inline RootedArrays root_arrays(const Graph& g, Vertex root) {
    const std::size_t n = g.vertex_count();
    RootedArrays r;
    r.parent.assign(n, std::nullopt);
    r.children.assign(n, {});
    r.bfs_order.reserve(n);
    std::vector<bool> seen(n, false);
    seen[root] = true;
    r.bfs_order.push_back(root);
    for (std::size_t head = 0; head < r.bfs_order.size(); ++head) {
        const Vertex v = r.bfs_order[head];
        for (const Vertex u : g.neighbors(v)) {
            if (!seen[u]) {
                seen[u] = true;
                r.parent[u] = v;
                r.children[v].push_back(u);
                r.bfs_order.push_back(u);
            }
        }
    }
    return r;
}

}  // namespace detail

/// First non-leaf vertex in id order; vertex 0 for a single edge.
inline Vertex auto_root(const Graph& g) {
    if (g.vertex_count() <= 2) {
        return 0;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) >= 2) {
            return v;
        }
    }
    throw InternalError("tree with three or more vertices has no internal vertex");
}

/// Roots the tree `g` at `root`, or at auto_root(g) when none is given.
inline RootedTree root_at(const Graph& g, std::optional<Vertex> root = std::nullopt) {
    if (!is_tree(g)) {
        throw NotATreeError();
    }
    if (g.vertex_count() < 2) {
        throw InputError("rooting needs a tree with at least 2 vertices");
    }
    const Vertex r = root.value_or(auto_root(g));
    if (r >= g.vertex_count()) {
        throw InputError("root vertex id " + std::to_string(r) + " out of range");
    }
    auto arrays = detail::root_arrays(g, r);
    return RootedTree{g, r, std::move(arrays.parent), std::move(arrays.children),
                      std::move(arrays.bfs_order)};
}

inline RootedTree root_at(const Graph& g, std::string_view root_name) {
    if (!is_tree(g)) {
        throw NotATreeError();
    }
    return root_at(g, std::optional<Vertex>(g.id(root_name)));
}

}  // namespace coreshare

#endif
