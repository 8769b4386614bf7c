// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>

#include "cli.hpp"
#include "test_support.hpp"

using namespace coreshare;
using namespace coreshare::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

WeightFunction weights_from_file(const Graph& g, const std::string& name) {
    std::ifstream in(fixture_path(name));
    const auto listed = parse_graph(in);
    std::vector<std::int64_t> w(g.vertex_count(), 1);
    for (Vertex v = 0; v < listed.vertex_count(); ++v) {
        w[g.id(listed.name(v))] = listed.weight(v);
    }
    return WeightFunction(w);
}

// Edge list on one line, for failure messages.
std::string brief(const Graph& g) {
    std::string s = "[";
    for (const auto& e : g.edges()) {
        s += (s.size() > 1 ? " " : "") + g.name(e.u) + "-" + g.name(e.v);
    }
    return s + "]";
}

std::vector<FieldElement> random_vector(std::size_t len, std::uint64_t p, std::mt19937_64& rng) {
    std::vector<FieldElement> v(len);
    for (auto& x : v) {
        x = rng() % p;
    }
    return v;
}

Outcome fig2_parameters() {
    Outcome o;
    const auto start = Clock::now();
    const auto r = cli::analyze(load_fixture("fig2.graph"), kDefaultBruteForceCap, false);
    const double secs = seconds_since(start);
    o.require(r.is_tree, "not recognized as a tree");
    o.require(r.c == 7, "c = " + std::to_string(r.c));
    o.require(r.sigma && *r.sigma == make_rational(13, 7), "sigma wrong");
    o.require(r.rho && *r.rho == make_rational(7, 13), "rho wrong");
    o.require(secs < 1.0, "analyze took " + std::to_string(secs) + " s");
    return o;
}

Outcome fig2_orientation() {
    Outcome o;
    const auto g = load_fixture("fig2.graph");
    const auto t = root_at(g, "C");
    const auto orient = orient_edges(t, weights_from_file(g, "fig2.weights"), 7);
    const std::vector<std::tuple<const char*, const char*, std::size_t>> table{
        {"A", "B", 3}, {"B", "A", 4}, {"B", "C", 6}, {"C", "B", 1}, {"D", "C", 2}, {"C", "D", 5},
        {"D", "E", 2}, {"E", "D", 5}, {"E", "F", 4}, {"F", "E", 3}, {"F", "G", 6}, {"G", "F", 1}};
    for (const auto& [from, to, k] : table) {
        const auto got = orient(g.id(from), g.id(to));
        o.require(got == k, std::string(from) + "->" + to + " = " + std::to_string(got));
    }
    const auto report = verify_packing(g, extract_stars(t, orient), 7);
    for (const auto k : report.edge_counts) {
        o.require(k == 7, "edge count " + std::to_string(k));
    }
    o.require(report.max_vertex_count <= 13, "vertex count " + std::to_string(report.max_vertex_count));
    o.require(report.pass, "packing report fails");
    return o;
}

Outcome delta_values() {
    Outcome o;
    const auto g = load_fixture("delta.graph");
    o.require(max_core_bruteforce(g).size == 1, "brute-force c != 1");

    auto start = Clock::now();
    const auto elp = build_entropy_lp(g);
    const auto entropy = solve_entropy_lp(elp).value;
    double secs = seconds_since(start);
    o.require(entropy == make_rational(3, 2), "entropy LP = " + to_string(entropy));
    o.require(secs < 30.0, "entropy LP took " + std::to_string(secs) + " s");

    start = Clock::now();
    const auto star = star_cover_rate_lp(g).value;
    secs = seconds_since(start);
    o.require(star == make_rational(5, 3), "star LP = " + to_string(star));
    o.require(secs < 30.0, "star LP took " + std::to_string(secs) + " s");

    // Duality spot check on both programs.
    const auto entropy_dual = lp::solve_min(lp::dual_program(to_linear_program(elp)));
    o.require(entropy_dual.status == lp::Status::Optimal && -entropy_dual.value == entropy, "entropy dual disagrees");
    const auto star_dual = lp::solve_min(lp::dual_program(build_star_cover_lp(g).program));
    o.require(star_dual.status == lp::Status::Optimal && -star_dual.value == star, "star dual disagrees");
    return o;
}

Outcome tree_sandwich() {
    Outcome o;
    std::size_t count = 0;
    for (std::size_t n = 2; n <= 7; ++n) {
        for (const auto& t : nonisomorphic_trees(n)) {
            ++count;
            const auto c = tree_core_sizes(root_at(t)).global_c;
            const Rational bound = 2 - make_rational(1, static_cast<std::int64_t>(c));
            const auto entropy = entropy_lower_bound(t);
            const auto star = star_cover_rate_lp(t).value;
            o.require(entropy == bound && star == bound,
                      brief(t) + " entropy=" + to_string(entropy) + " star=" + to_string(star));
        }
    }
    o.require(count == 1 + 1 + 2 + 3 + 6 + 11, "enumerated " + std::to_string(count) + " trees");
    return o;
}

Outcome small_values() {
    Outcome o;
    for (const auto& [name, expected] : std::vector<std::pair<const char*, Rational>>{
             {"p2.graph", 1}, {"p3.graph", 1}, {"p4.graph", make_rational(3, 2)}}) {
        const auto g = load_fixture(name);
        const auto sigma = sigma_of_tree(tree_core_sizes(root_at(g)).global_c);
        o.require(sigma == expected, std::string(name) + " sigma = " + to_string(sigma));
        o.require(entropy_lower_bound(g) == expected, std::string(name) + " entropy LP disagrees");
        o.require(star_cover_rate_lp(g).value == expected, std::string(name) + " star LP disagrees");
    }
    const auto c5 = entropy_lower_bound(load_fixture("c5.graph"));
    o.require(c5 == make_rational(3, 2), "C5 entropy LP = " + to_string(c5));
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20261016);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 15;
        const auto t = random_tree(n, rng);
        const auto fast = tree_core_sizes(root_at(t)).global_c;
        const auto slow = max_core_bruteforce(t).size;
        if (fast != slow) {
            ++mismatches;
            o.require(false, brief(t));
        }
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    return o;
}

Outcome scheme_soundness() {
    Outcome o;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 11;
        const auto t = random_tree(n, rng);
        const auto sch = build_scheme(t);
        const auto c = tree_core_sizes(root_at(t)).global_c;
        const auto report = verify_linear(sch);
        const std::string tag = "n=" + std::to_string(n) + " trial " + std::to_string(trial);
        o.require(report.pass(), tag + ": " + std::to_string(report.failures()) + " failed checks");
        o.require(report.checks.size() == 2 + t.edge_count() + max_independent_sets(t).size(),
                  tag + ": missing checks");
        o.require(sch.c == c, tag + ": secret length != c");
        o.require(sch.max_share_length() <= 2 * c - 1, tag + ": share too long");
        o.require(sch.m() < n * c, tag + ": randomness too long");
        std::size_t longest = 0;
        for (const auto& m : emit_matrices(sch)) {
            longest = std::max(longest, m.rows);
        }
        o.require(longest == sch.max_share_length(), tag + ": matrix shape disagrees with layout");
    }
    return o;
}

Outcome exhaustive_check() {
    Outcome o;
    for (const char* name : {"p2.graph", "p3.graph", "k13.graph"}) {
        const auto g = load_fixture(name);
        const auto sch = build_scheme(g);
        o.require(sch.p == smallest_prime_at_least(std::max<std::uint64_t>(sch.m(), 2)),
                  std::string(name) + ": field not minimal");
        const auto report = verify_exhaustive(sch);
        o.require(report.pass(), std::string(name) + ": " + report.text());
        o.require(report.checks.size() == g.edge_count() + max_independent_sets(g).size(),
                  std::string(name) + ": missing checks");
    }
    return o;
}

Outcome matrix_consistency() {
    Outcome o;
    std::mt19937_64 rng(11);
    for (const char* name : {"p2.graph", "p3.graph", "p4.graph", "k13.graph", "fig2.graph"}) {
        const auto sch = build_scheme(load_fixture(name));
        const auto mats = emit_matrices(sch);
        for (int trial = 0; trial < 100; ++trial) {
            const auto s = random_vector(sch.c, sch.p, rng);
            const auto r = random_vector(sch.m(), sch.p, rng);
            auto sr = s;
            sr.insert(sr.end(), r.begin(), r.end());
            const auto b = deal(sch, s, r);
            for (Vertex v = 0; v < mats.size(); ++v) {
                if (mats[v].multiply(sr) != b.shares[v]) {
                    o.require(false, std::string(name) + ": M_" + sch.tree.name(v) + " disagrees with deal");
                    trial = 100;
                    break;
                }
            }
        }
    }
    const auto p4 = build_scheme(load_fixture("p4.graph"));
    o.require(p4.p == 5, "P4 field is not 5");
    const auto b = deal(p4, std::vector<FieldElement>{2, 3}, std::vector<FieldElement>{1, 4, 0, 2});
    const std::vector<std::vector<FieldElement>> hand{{3, 4}, {1, 4, 3}, {3, 0, 2}, {3, 3}};
    o.require(b.shares == hand, "P4 shares differ from the hand derivation");
    return o;
}

Outcome general_sandwich() {
    Outcome o;
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> size(3, 8);
    std::uniform_real_distribution<double> density(0.2, 0.7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_connected_graph(size(rng), density(rng), rng);
        const auto c = max_core_bruteforce(g).size;
        const Rational bound = 2 - make_rational(1, static_cast<std::int64_t>(c));
        const auto entropy = entropy_lower_bound(g);
        const auto star = star_cover_rate_lp(g).value;
        o.require(bound <= entropy && entropy <= star, brief(g) + " c=" + std::to_string(c) +
                                                           " entropy=" + to_string(entropy) +
                                                           " star=" + to_string(star));
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fig2 fixture: c = 7, sigma = 13/7, rho = 7/13, analyze < 1 s", fig2_parameters},
        {"fig2 orientation at root C matches the table; packing edges = 7, vertices <= 13", fig2_orientation},
        {"triangle with pendant: c = 1, entropy LP = 3/2, star LP = 5/3, each < 30 s", delta_values},
        {"all trees n <= 7: entropy LP = 2 - 1/c = star LP", tree_sandwich},
        {"sigma(P2) = sigma(P3) = 1, sigma(P4) = 3/2, entropy LP on C5 = 3/2", small_values},
        {"tree c equals brute-force c on 200 random trees, n <= 16", oracle_equivalence},
        {"100 random trees n <= 12: linear verification and share parameters", scheme_soundness},
        {"P2, P3, K13 schemes: exhaustive correctness and privacy", exhaustive_check},
        {"share matrices reproduce deal; P4 hand-derived shares", matrix_consistency},
        {"50 random connected graphs n <= 8: 2 - 1/c <= entropy LP <= star LP", general_sandwich},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = seconds_since(start);
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << i + 1 << ": " << criteria[i].first << " ("
                  << std::fixed << std::setprecision(2) << secs << " s)";
        if (!o.pass) {
            std::cout << ": " << o.detail;
            ++failed;
        }
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
