#ifndef CORESHARE_SCHEME_IO_HPP
#define CORESHARE_SCHEME_IO_HPP

#include <openssl/evp.h>

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coreshare/errors.hpp"
#include "coreshare/scheme.hpp"

namespace coreshare {

using ordered_json = nlohmann::ordered_json;

/// {version, field_prime, c, vertices, root, weights, stars, layout} with
/// 1-based star indices. Tree edges are implied by the stars.
inline ordered_json scheme_to_json(const Scheme& sch) {
    const auto& g = sch.tree;
    ordered_json j;
    j["version"] = 1;
    j["field_prime"] = sch.p;
    j["c"] = sch.c;
    j["vertices"] = g.names();
    j["root"] = g.name(sch.root);
    ordered_json weights = ordered_json::object();
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        weights[g.name(v)] = sch.weights[v];
    }
    j["weights"] = std::move(weights);
    ordered_json stars = ordered_json::array();
    for (const auto& s : sch.stars) {
        ordered_json leaves = ordered_json::array();
        for (const Vertex leaf : s.leaves) {
            leaves.push_back(g.name(leaf));
        }
        stars.push_back({{"center", g.name(s.center)}, {"leaves", std::move(leaves)}});
    }
    j["stars"] = std::move(stars);
    ordered_json layout = ordered_json::object();
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        ordered_json entries = ordered_json::array();
        for (const auto& e : sch.layout[v]) {
            entries.push_back({e.star + 1, role_name(e.role)});
        }
        layout[g.name(v)] = std::move(entries);
    }
    j["layout"] = std::move(layout);
    return j;
}

inline std::string scheme_text(const Scheme& sch) { return scheme_to_json(sch).dump(2) + "\n"; }

namespace detail {

template <class T>
T json_get(const ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("scheme file lacks '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError(std::string("scheme field '") + key + "' has the wrong type");
    }
}

}  // namespace detail

/// Inverse of scheme_to_json. The layout in the file must match the one
/// implied by the stars.
inline Scheme scheme_from_json(const ordered_json& j) {
    using detail::json_get;
    if (json_get<int>(j, "version") != 1) {
        throw InputError("unsupported scheme version");
    }
    const auto p = json_get<std::uint64_t>(j, "field_prime");
    const auto c = json_get<std::size_t>(j, "c");
    const auto names = json_get<std::vector<std::string>>(j, "vertices");
    Graph tree;
    for (const auto& name : names) {
        if (tree.find(name)) {
            throw InputError("vertex '" + name + "' listed twice");
        }
        tree.add_vertex(name);
    }
    std::vector<Star> stars;
    const auto& star_list = j.at("stars");
    if (!star_list.is_array()) {
        throw InputError("scheme field 'stars' must be a list");
    }
    for (const auto& s : star_list) {
        Star star;
        star.center = tree.id(json_get<std::string>(s, "center"));
        for (const auto& leaf : json_get<std::vector<std::string>>(s, "leaves")) {
            const Vertex v = tree.id(leaf);
            if (v == star.center) {
                throw InputError("star center listed as its own leaf");
            }
            if (!tree.adjacent(star.center, v)) {
                tree.add_edge(star.center, v);
            }
            star.leaves.push_back(v);
        }
        star.index = stars.size();
        stars.push_back(std::move(star));
    }
    const Vertex root = tree.id(json_get<std::string>(j, "root"));
    const auto& wj = j.at("weights");
    if (!wj.is_object()) {
        throw InputError("scheme field 'weights' must be a map");
    }
    std::vector<std::int64_t> w(names.size(), 0);
    for (const auto& [name, value] : wj.items()) {
        if (!value.is_number_integer()) {
            throw InputError("weight of " + name + " is not an integer");
        }
        w[tree.id(name)] = value.get<std::int64_t>();
    }
    auto sch = assemble_scheme(std::move(tree), c, p, root, WeightFunction(std::move(w)), std::move(stars));
    if (j.contains("layout") && j.at("layout") != scheme_to_json(sch).at("layout")) {
        throw InputError("scheme layout does not match its stars");
    }
    return sch;
}

inline Scheme parse_scheme(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("scheme file is not valid JSON: ") + e.what());
    }
    try {
        return scheme_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed scheme file: ") + e.what());
    }
}

/// Lower-case hex SHA-256 of `data`.
inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("SHA-256 failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return out.str();
}

/// Hash of the compact scheme JSON; ties a shares file to its scheme.
inline std::string scheme_hash(const Scheme& sch) { return sha256_hex(scheme_to_json(sch).dump()); }

inline ordered_json shares_to_json(const Scheme& sch, const SharesBundle& b) {
    ordered_json j;
    j["scheme_hash"] = scheme_hash(sch);
    ordered_json shares = ordered_json::object();
    for (Vertex v = 0; v < sch.tree.vertex_count(); ++v) {
        shares[sch.tree.name(v)] = b.shares.at(v);
    }
    j["shares"] = std::move(shares);
    return j;
}

/// Shares by vertex id; a vertex absent from the file gets an empty share.
inline std::vector<Share> parse_shares(const Scheme& sch, const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("shares file is not valid JSON: ") + e.what());
    }
    if (detail::json_get<std::string>(j, "scheme_hash") != scheme_hash(sch)) {
        throw InputError("shares were dealt for a different scheme");
    }
    if (!j.contains("shares") || !j.at("shares").is_object()) {
        throw InputError("shares file lacks a 'shares' map");
    }
    std::vector<Share> out(sch.tree.vertex_count());
    for (const auto& [name, value] : j.at("shares").items()) {
        try {
            out[sch.tree.id(name)] = value.get<Share>();
        } catch (const nlohmann::json::exception&) {
            throw InputError("share of " + name + " is not a list of non-negative integers");
        }
    }
    return out;
}

}  // namespace coreshare

#endif
