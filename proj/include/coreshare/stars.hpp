#ifndef CORESHARE_STARS_HPP
#define CORESHARE_STARS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coreshare/core.hpp"
#include "coreshare/errors.hpp"
#include "coreshare/exact_lp.hpp"
#include "coreshare/graph.hpp"
#include "coreshare/rational.hpp"

namespace coreshare {

/// Each tree edge replaced by c parallel directed copies; out(u, v) copies
/// point from u to v and out(u, v) + out(v, u) = c.
struct Orientation {
    std::size_t c = 0;
    std::map<std::pair<Vertex, Vertex>, std::size_t> out;

    std::size_t operator()(Vertex from, Vertex to) const {
        const auto it = out.find({from, to});
        if (it == out.end()) {
            throw InputError("no oriented edge between vertex ids " + std::to_string(from) + " and " +
                             std::to_string(to));
        }
        return it->second;
    }
};

struct Star {
    Vertex center = 0;
    std::vector<Vertex> leaves;
    // Position in the packing, 0-based.
    std::size_t index = 0;

    bool contains(Vertex v) const {
        return v == center || std::find(leaves.begin(), leaves.end(), v) != leaves.end();
    }

    friend bool operator==(const Star&, const Star&) = default;
};

struct StarPacking {
    std::vector<Star> stars;

    /// Number of stars containing each graph edge, in graph edge order.
    std::vector<std::size_t> edge_counts(const Graph& g) const {
        std::map<Edge, std::size_t> count;
        for (const auto& s : stars) {
            for (const Vertex leaf : s.leaves) {
                ++count[make_edge(s.center, leaf)];
            }
        }
        std::vector<std::size_t> out;
        out.reserve(g.edge_count());
        for (const auto& e : g.edges()) {
            const auto it = count.find(e);
            out.push_back(it == count.end() ? 0 : it->second);
        }
        return out;
    }

    /// Stars containing each vertex as center or leaf.
    std::vector<std::size_t> vertex_counts(std::size_t n) const {
        std::vector<std::size_t> out(n, 0);
        for (const auto& s : stars) {
            ++out.at(s.center);
            for (const Vertex leaf : s.leaves) {
                ++out.at(leaf);
            }
        }
        return out;
    }

    std::size_t centered_at(Vertex v) const {
        return static_cast<std::size_t>(std::count_if(
            stars.begin(), stars.end(), [&](const Star& s) { return s.center == v; }));
    }
};

/// Orients c copies of every tree edge: c_w(v) copies from each non-root v
/// to its parent and the remaining c - c_w(v) back down. Requires a weight
/// function that is maximal for c and, for three or more vertices, a root
/// that is not a leaf.
inline Orientation orient_edges(const RootedTree& t, const WeightFunction& w, std::size_t c) {
    if (t.size() >= 3 && t.base.degree(t.root) < 2) {
        throw InputError("root " + t.base.name(t.root) + " is a leaf; orientation needs an internal root");
    }
    if (!is_maximal_weighting(t.base, w, c)) {
        throw InputError("weight function is not maximal for c = " + std::to_string(c));
    }
    const auto profile = weighted_core_profile(t, w);
    Orientation o;
    o.c = c;
    const auto target = static_cast<std::int64_t>(c);
    for (Vertex v = 0; v < t.size(); ++v) {
        if (!t.parent[v]) {
            continue;
        }
        const auto up = profile.per_vertex[v];
        if (up < 0 || up > target) {
            throw InternalError("subtree core weight outside [0, c]");
        }
        o.out[{v, *t.parent[v]}] = static_cast<std::size_t>(up);
        o.out[{*t.parent[v], v}] = static_cast<std::size_t>(target - up);
    }
    return o;
}

/// Groups the directed copies into stars: vertex v centers max_u out(v, u)
/// stars, the s-th containing every neighbor u with out(v, u) >= s. Vertices
/// are visited in id order and neighbors in id order.
inline StarPacking extract_stars(const Graph& g, const Orientation& o) {
    StarPacking packing;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::size_t k = 0;
        for (const Vertex u : g.neighbors(v)) {
            k = std::max(k, o(v, u));
        }
        for (std::size_t s = 1; s <= k; ++s) {
            Star star{v, {}, packing.stars.size()};
            for (const Vertex u : g.neighbors(v)) {
                if (o(v, u) >= s) {
                    star.leaves.push_back(u);
                }
            }
            packing.stars.push_back(std::move(star));
        }
    }
    return packing;
}

inline StarPacking extract_stars(const RootedTree& t, const Orientation& o) {
    return extract_stars(t.base, o);
}

struct PackingReport {
    std::vector<std::size_t> edge_counts;
    std::vector<std::size_t> vertex_counts;
    std::size_t max_vertex_count = 0;
    bool pass = false;

    /// `edge u v count k` lines, `vertex v count k` lines, then PASS or FAIL.
    std::string text(const Graph& g) const {
        std::ostringstream out;
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
            const auto& e = g.edges()[i];
            out << "edge " << g.name(e.u) << ' ' << g.name(e.v) << " count " << edge_counts[i] << '\n';
        }
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            out << "vertex " << g.name(v) << " count " << vertex_counts[v] << '\n';
        }
        out << (pass ? "PASS" : "FAIL") << '\n';
        return out.str();
    }
};

/// Checks that every edge lies in exactly c stars and every vertex in at
/// most 2c - 1.
inline PackingReport verify_packing(const Graph& g, const StarPacking& p, std::size_t c) {
    for (const auto& s : p.stars) {
        if (s.center >= g.vertex_count()) {
            throw InputError("star center out of range");
        }
        if (s.leaves.empty()) {
            throw InputError("star " + std::to_string(s.index) + " has no leaves");
        }
        auto sorted = s.leaves;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InputError("star " + std::to_string(s.index) + " repeats a leaf");
        }
        for (const Vertex leaf : s.leaves) {
            if (leaf >= g.vertex_count() || !g.adjacent(s.center, leaf)) {
                throw InputError("star " + std::to_string(s.index) + " uses a non-edge");
            }
        }
    }
    PackingReport r;
    r.edge_counts = p.edge_counts(g);
    r.vertex_counts = p.vertex_counts(g.vertex_count());
    r.max_vertex_count =
        r.vertex_counts.empty() ? 0 : *std::max_element(r.vertex_counts.begin(), r.vertex_counts.end());
    const bool edges_ok = std::all_of(r.edge_counts.begin(), r.edge_counts.end(),
                                      [&](std::size_t k) { return k == c; });
    r.pass = c >= 1 && edges_ok && r.max_vertex_count <= 2 * c - 1;
    return r;
}

struct WeightedStar {
    Vertex center = 0;
    std::vector<Vertex> leaves;
    Rational weight;
};

struct StarCoverResult {
    Rational value;
    // x[i] = {weight of edge i carried by stars centered at edge.u, ... at edge.v}.
    std::vector<std::pair<Rational, Rational>> edge_shares;
    std::vector<Rational> center_budget;
    // Fractional star packing realizing the value.
    std::vector<WeightedStar> stars;
};

/// Edge and vertex weights of a fractional star packing.
struct FractionalLoads {
    std::vector<Rational> edge;
    std::vector<Rational> vertex;
};

inline FractionalLoads fractional_loads(const Graph& g, const std::vector<WeightedStar>& stars) {
    FractionalLoads loads{std::vector<Rational>(g.edge_count()), std::vector<Rational>(g.vertex_count())};
    std::map<Edge, std::size_t> edge_index;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        edge_index.emplace(g.edges()[i], i);
    }
    for (const auto& s : stars) {
        loads.vertex.at(s.center) += s.weight;
        for (const Vertex leaf : s.leaves) {
            const auto it = edge_index.find(make_edge(s.center, leaf));
            if (it == edge_index.end()) {
                throw InputError("weighted star uses a non-edge");
            }
            loads.edge[it->second] += s.weight;
            loads.vertex.at(leaf) += s.weight;
        }
    }
    return loads;
}

/// The compact star cover LP: x_{v,e} is the weight of stars centered at v
/// that contain e, y_v the total weight of stars centered at v.
struct StarCoverProgram {
    lp::LinearProgram program;
    // Per edge: variables x_{u,e} and x_{v,e} for the edge's endpoints u < v.
    std::vector<std::pair<std::size_t, std::size_t>> x;
    std::vector<std::size_t> y;
    std::size_t t = 0;
};

inline StarCoverProgram build_star_cover_lp(const Graph& g) {
    if (g.edge_count() == 0) {
        throw InputError("star cover rate needs at least one edge");
    }
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    StarCoverProgram scp;
    auto& program = scp.program;
    scp.x.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& e = g.edges()[i];
        scp.x[i].first = program.add_variable("x_" + g.name(e.u) + "_" + std::to_string(i));
        scp.x[i].second = program.add_variable("x_" + g.name(e.v) + "_" + std::to_string(i));
    }
    scp.y.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        scp.y[v] = program.add_variable("y_" + g.name(v));
    }
    scp.t = program.add_variable("t");
    using lp::Relation;
    const Rational one = 1;

    std::vector<std::vector<lp::Term>> load(n);
    for (Vertex v = 0; v < n; ++v) {
        load[v] = {{scp.t, one}, {scp.y[v], -one}};
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& e = g.edges()[i];
        const auto [xu, xv] = scp.x[i];
        program.add_constraint({{{xu, one}, {xv, one}}, Relation::GreaterEqual, one});
        program.add_constraint({{{scp.y[e.u], one}, {xu, -one}}, Relation::GreaterEqual, 0});
        program.add_constraint({{{scp.y[e.v], one}, {xv, -one}}, Relation::GreaterEqual, 0});
        // The far endpoint is a leaf of the stars centered at the near one.
        load[e.v].push_back({xu, -one});
        load[e.u].push_back({xv, -one});
    }
    for (Vertex v = 0; v < n; ++v) {
        program.add_constraint({std::move(load[v]), Relation::GreaterEqual, 0});
    }
    program.minimize({{scp.t, one}});
    return scp;
}

/// Star cover rate by the compact LP. The optimum is split back into
/// explicit weighted stars by sweeping thresholds over each center's x
/// values, and the loads of that packing are checked against the LP value.
inline StarCoverResult star_cover_rate_lp(const Graph& g) {
    const auto scp = build_star_cover_lp(g);
    const auto& x = scp.x;
    const std::size_t n = g.vertex_count();
    const std::size_t m = g.edge_count();
    const auto sol = lp::solve_min(scp.program);
    if (sol.status != lp::Status::Optimal) {
        throw InternalError(std::string("star cover LP ended ") + lp::to_string(sol.status));
    }

    StarCoverResult result;
    result.value = sol.value;
    for (std::size_t i = 0; i < m; ++i) {
        result.edge_shares.emplace_back(sol.assignment[x[i].first], sol.assignment[x[i].second]);
    }
    for (Vertex v = 0; v < n; ++v) {
        result.center_budget.push_back(sol.assignment[scp.y[v]]);
    }

    for (Vertex v = 0; v < n; ++v) {
        std::vector<std::pair<Rational, Vertex>> incident;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& e = g.edges()[i];
            if (e.u == v && sgn(result.edge_shares[i].first) > 0) {
                incident.emplace_back(result.edge_shares[i].first, e.v);
            } else if (e.v == v && sgn(result.edge_shares[i].second) > 0) {
                incident.emplace_back(result.edge_shares[i].second, e.u);
            }
        }
        std::sort(incident.begin(), incident.end());
        Rational level = 0;
        for (std::size_t k = 0; k < incident.size(); ++k) {
            if (incident[k].first == level) {
                continue;
            }
            WeightedStar star{v, {}, incident[k].first - level};
            for (std::size_t j = k; j < incident.size(); ++j) {
                star.leaves.push_back(incident[j].second);
            }
            std::sort(star.leaves.begin(), star.leaves.end());
            level = incident[k].first;
            result.stars.push_back(std::move(star));
        }
    }

    const auto loads = fractional_loads(g, result.stars);
    for (const auto& w : loads.edge) {
        if (w < 1) {
            throw InternalError("star decomposition leaves an edge under-covered");
        }
    }
    if (*std::max_element(loads.vertex.begin(), loads.vertex.end()) != result.value) {
        throw InternalError("star decomposition does not realize the LP value");
    }
    return result;
}

}  // namespace coreshare

#endif
