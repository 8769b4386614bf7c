#ifndef CORESHARE_TOOLS_CLI_HPP
#define CORESHARE_TOOLS_CLI_HPP

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 input graph is not a tree.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coreshare/coreshare.hpp"

namespace coreshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNotTree = 3;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw InputError("cannot write " + path);
    }
}

inline Graph load_graph(const std::string& path) { return parse_graph(std::string_view(read_file(path))); }

/// Weights from a file of `weight <v> <k>` lines; unlisted vertices keep 1.
inline WeightFunction load_weights(const std::string& path, const Graph& g) {
    const Graph listed = load_graph(path);
    if (listed.edge_count() != 0) {
        throw InputError(path + ": weights file may only contain weight lines");
    }
    std::vector<std::int64_t> w(g.vertex_count(), 1);
    for (Vertex v = 0; v < listed.vertex_count(); ++v) {
        w[g.id(listed.name(v))] = listed.weight(v);
    }
    return WeightFunction(std::move(w));
}

/// Comma-separated non-negative integers.
inline std::vector<FieldElement> parse_vector(const std::string& text, const char* what) {
    std::vector<FieldElement> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        std::size_t used = 0;
        unsigned long long x = 0;
        try {
            if (item.empty() || item.front() == '-' || item.front() == '+') {
                throw std::invalid_argument(item);
            }
            x = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw InputError(std::string(what) + ": '" + item + "' is not a non-negative integer");
        }
        if (used != item.size()) {
            throw InputError(std::string(what) + ": '" + item + "' is not a non-negative integer");
        }
        out.push_back(x);
    }
    if (out.empty() || (!text.empty() && text.back() == ',')) {
        throw InputError(std::string(what) + ": expected comma-separated integers");
    }
    return out;
}

inline std::string join(const std::vector<FieldElement>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
}

struct AnalysisReport {
    bool is_tree = false;
    std::size_t c = 0;
    Rational lower_bound;
    Rational star_rate;
    std::optional<Rational> entropy_bound;
    std::optional<Rational> sigma;
    std::optional<Rational> rho;

    std::string line() const {
        std::ostringstream out;
        out << "tree=" << (is_tree ? "true" : "false") << " c=" << c << " lower=" << to_string(lower_bound)
            << " s=" << to_string(star_rate);
        if (entropy_bound) {
            out << " entropy=" << to_string(*entropy_bound);
        }
        if (sigma) {
            out << " sigma=" << to_string(*sigma) << " rho=" << to_string(*rho);
        }
        return out.str();
    }
};

inline AnalysisReport analyze(const Graph& g, std::size_t brute_max, bool with_entropy) {
    if (g.edge_count() == 0) {
        throw InputError("graph has no edges");
    }
    AnalysisReport r;
    r.is_tree = is_tree(g);
    if (r.is_tree) {
        r.c = tree_core_sizes(root_at(g)).global_c;
    } else {
        if (g.vertex_count() > brute_max) {
            throw InputError("graph has " + std::to_string(g.vertex_count()) +
                             " vertices; brute-force core search is capped at --brute-max " +
                             std::to_string(brute_max));
        }
        r.c = max_core_bruteforce(g, brute_max).size;
    }
    r.lower_bound = 2 - make_rational(1, static_cast<std::int64_t>(r.c));
    r.star_rate = star_cover_rate_lp(g).value;
    if (with_entropy) {
        r.entropy_bound = entropy_lower_bound(g);
    }
    if (r.is_tree) {
        r.sigma = sigma_of_tree(r.c);
        r.rho = 1 / *r.sigma;
    }
    return r;
}

inline void print_matrix(std::ostream& out, const FieldMatrix& m, std::size_t secret_cols) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j == secret_cols) {
                out << (j ? " |" : "|");
            }
            out << (j ? " " : "") << m.at(i, j);
        }
        out << '\n';
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secret sharing on graph access structures: core analysis, star packings, linear schemes",
                 "coreshare"};
    app.require_subcommand(1);

    std::string graph_file;
    std::size_t brute_max = kDefaultBruteForceCap;
    bool with_entropy = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "bounds on the information ratio of a graph");
    analyze_cmd->add_option("file", graph_file, "graph file")->required();
    analyze_cmd->add_option("--brute-max", brute_max, "vertex cap for brute-force core search");
    analyze_cmd->add_flag("--entropy", with_entropy, "also solve the entropy LP (at most 12 vertices)");

    std::string weights_file;
    std::string root_name;
    auto* pack_cmd = app.add_subcommand("pack", "orient a tree and verify its star packing");
    pack_cmd->add_option("file", graph_file, "tree file")->required();
    pack_cmd->add_option("--weights", weights_file, "maximal weight function (weight lines)");
    pack_cmd->add_option("--root", root_name, "root vertex (must not be a leaf)");

    auto* scheme_cmd = app.add_subcommand("scheme", "build, deal, reconstruct and verify tree schemes");
    scheme_cmd->require_subcommand(1);

    std::optional<std::uint64_t> field;
    std::string output;
    auto* build_cmd = scheme_cmd->add_subcommand("build", "build the scheme for a tree");
    build_cmd->add_option("file", graph_file, "tree file")->required();
    build_cmd->add_option("--field", field, "prime field size (default: smallest prime >= star count)");
    build_cmd->add_option("--root", root_name, "root vertex (must not be a leaf)");
    build_cmd->add_option("-o,--output", output, "scheme file to write")->required();

    std::string scheme_file;
    std::string secret_text;
    std::string random_text;
    std::optional<std::uint64_t> seed;
    bool pad = false;
    auto* deal_cmd = scheme_cmd->add_subcommand("deal", "deal shares of a secret");
    deal_cmd->add_option("--scheme", scheme_file, "scheme file")->required();
    deal_cmd->add_option("--secret", secret_text, "secret s_0,...,s_{c-1}")->required();
    auto* random_opt = deal_cmd->add_option("--random", random_text, "randomness r_1,...,r_m");
    auto* seed_opt = deal_cmd->add_option("--seed", seed, "seed for mt19937_64 randomness");
    random_opt->excludes(seed_opt);
    deal_cmd->add_option("-o,--output", output, "shares file to write")->required();
    deal_cmd->add_flag("--pad", pad, "zero-pad every share to length 2c-1");

    std::string shares_file;
    std::string edge_text;
    auto* rec_cmd = scheme_cmd->add_subcommand("reconstruct", "recover the secret from an edge");
    rec_cmd->add_option("--scheme", scheme_file, "scheme file")->required();
    rec_cmd->add_option("--shares", shares_file, "shares file")->required();
    rec_cmd->add_option("--edge", edge_text, "u,v")->required();

    bool exhaustive = false;
    std::uint64_t limit = kDefaultExhaustiveLimit;
    auto* verify_cmd = scheme_cmd->add_subcommand("verify", "check correctness and privacy");
    verify_cmd->add_option("--scheme", scheme_file, "scheme file")->required();
    verify_cmd->add_flag("--exhaustive", exhaustive, "also enumerate every secret and randomness");
    verify_cmd->add_option("--limit", limit, "maximum p^(c+m) for --exhaustive");

    auto* matrices_cmd = scheme_cmd->add_subcommand("matrices", "print the share matrices M_v");
    matrices_cmd->add_option("--scheme", scheme_file, "scheme file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*analyze_cmd) {
            out << analyze(load_graph(graph_file), brute_max, with_entropy).line() << '\n';
            return kExitOk;
        }
        if (*pack_cmd) {
            const Graph g = load_graph(graph_file);
            const auto rooted = root_name.empty() ? root_at(g) : root_at(g, root_name);
            const std::size_t c = tree_core_sizes(rooted).global_c;
            WeightFunction w;
            if (!weights_file.empty()) {
                w = load_weights(weights_file, g);
            } else if (g.has_nonunit_weights()) {
                w = WeightFunction::of(g);
            } else {
                w = maximalize_weights(g, c);
            }
            if (!is_maximal_weighting(g, w, c)) {
                err << "error: weight function is not maximal for c = " << c << '\n';
                return kExitInput;
            }
            const auto o = orient_edges(rooted, w, c);
            for (const auto& e : g.edges()) {
                out << "out " << g.name(e.u) << ' ' << g.name(e.v) << ' ' << o(e.u, e.v) << '\n';
                out << "out " << g.name(e.v) << ' ' << g.name(e.u) << ' ' << o(e.v, e.u) << '\n';
            }
            const auto report = verify_packing(g, extract_stars(rooted, o), c);
            out << report.text(g);
            return report.pass ? kExitOk : kExitVerifyFailed;
        }
        if (*build_cmd) {
            const Graph g = load_graph(graph_file);
            if (!is_tree(g)) {
                throw NotATreeError();
            }
            std::optional<Vertex> root;
            if (!root_name.empty()) {
                root = g.id(root_name);
            }
            const auto sch = build_scheme(g, field, root);
            write_file(output, scheme_text(sch));
            out << "c=" << sch.c << " m=" << sch.m() << " p=" << sch.p << " max_share=" << sch.max_share_length()
                << '\n';
            return kExitOk;
        }
        const auto sch = parse_scheme(read_file(scheme_file));
        if (*deal_cmd) {
            const auto secret = parse_vector(secret_text, "--secret");
            SharesBundle b;
            if (seed) {
                b = deal_seeded(sch, secret, *seed, pad);
            } else if (!random_text.empty()) {
                b = deal(sch, secret, parse_vector(random_text, "--random"), pad);
            } else {
                throw InputError("deal needs --random or --seed");
            }
            write_file(output, shares_to_json(sch, b).dump(2) + "\n");
            return kExitOk;
        }
        if (*rec_cmd) {
            const auto comma = edge_text.find(',');
            if (comma == std::string::npos) {
                throw InputError("--edge expects u,v");
            }
            const Vertex u = sch.tree.id(edge_text.substr(0, comma));
            const Vertex v = sch.tree.id(edge_text.substr(comma + 1));
            const auto shares = parse_shares(sch, read_file(shares_file));
            out << join(reconstruct(sch, u, v, shares[u], shares[v])) << '\n';
            return kExitOk;
        }
        if (*verify_cmd) {
            auto report = verify_linear(sch);
            if (exhaustive) {
                const auto full = verify_exhaustive(sch, limit);
                report.checks.insert(report.checks.end(), full.checks.begin(), full.checks.end());
            }
            out << report.text() << (report.pass() ? "PASS" : "FAIL") << '\n';
            return report.pass() ? kExitOk : kExitVerifyFailed;
        }
        if (*matrices_cmd) {
            const auto mats = emit_matrices(sch);
            for (Vertex v = 0; v < mats.size(); ++v) {
                out << "M_" << sch.tree.name(v) << ' ' << mats[v].rows << 'x' << mats[v].cols << '\n';
                print_matrix(out, mats[v], sch.c);
            }
            return kExitOk;
        }
    } catch (const NotATreeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNotTree;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitInput;
}

}  // namespace coreshare::cli

#endif
