// JSON descriptors for fields, subspaces, q-matroids, polynomials, and
// condensed configurations, plus file loading.  Malformed input raises
// ParseError; structurally valid descriptors that violate matroid axioms
// keep their domain-error types.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <qmat/condense.hpp>
#include <qmat/error.hpp>
#include <qmat/gfq.hpp>
#include <qmat/lattice.hpp>
#include <qmat/poly.hpp>
#include <qmat/qmatroid.hpp>
#include <qmat/subspace.hpp>

namespace qmat {

using Json = nlohmann::json;

namespace detail {

inline const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError("expected an object with a '" + std::string(key) + "' member");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing member '" + std::string(key) + "'");
    return *it;
}

inline int int_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_number_integer()) throw ParseError("member '" + std::string(key) + "' must be an integer");
    return v.get<int>();
}

inline const Json& array_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_array()) throw ParseError("member '" + std::string(key) + "' must be an array");
    return v;
}

inline std::string string_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_string()) throw ParseError("member '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fields: {"q": p, "m": d, "min_poly": [c_0, ..., c_d]} with the constant
// coefficient first.

inline Json field_to_json(const ExtensionField& F) {
    return Json{{"q", F.q}, {"m", F.m}, {"min_poly", F.min_poly()}};
}

inline ExtFieldPtr field_from_json(const Json& j) {
    int q = detail::int_member(j, "q");
    int m = detail::int_member(j, "m");
    const Json& mp = detail::array_member(j, "min_poly");
    std::vector<int> coeffs;
    for (const Json& c : mp) {
        if (!c.is_number_integer()) throw ParseError("min_poly entries must be integers");
        coeffs.push_back(c.get<int>());
    }
    try {
        return std::make_shared<const ExtensionField>(q, m, std::move(coeffs));
    } catch (const Error& e) {
        throw ParseError(std::string("bad field descriptor: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Subspaces: {"n": n, "rows": [[entries in 0..q-1], ...]}.  The base field
// size comes from context; rows are canonicalized on load.

inline Json subspace_to_json(const Subspace& V) {
    Json rows = Json::array();
    for (const auto& r : V.rows) {
        Json row = Json::array();
        for (uint8_t e : r) row.push_back((int)e);
        rows.push_back(std::move(row));
    }
    return Json{{"n", V.n}, {"rows", std::move(rows)}};
}

inline Subspace subspace_from_json(const Json& j, int q) {
    int n = detail::int_member(j, "n");
    const Json& rows = detail::array_member(j, "rows");
    std::vector<std::vector<uint8_t>> entries;
    for (const Json& row : rows) {
        if (!row.is_array()) throw ParseError("subspace rows must be arrays");
        std::vector<uint8_t> r;
        for (const Json& e : row) {
            if (!e.is_number_integer()) throw ParseError("subspace entries must be integers");
            int v = e.get<int>();
            if (v < 0 || v >= q)
                throw ParseError("subspace entry " + std::to_string(v) + " outside F_" + std::to_string(q));
            r.push_back((uint8_t)v);
        }
        entries.push_back(std::move(r));
    }
    try {
        return canonicalize(q, n, entries);
    } catch (const Error& e) {
        throw ParseError(std::string("bad subspace descriptor: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// q-matroid descriptors, dispatched on "kind":
//   {"kind": "uniform",      "k": k, "n": n, "q": q}
//   {"kind": "represented",  "field": {...}, "generator": [["w^3", "0", ...], ...]}
//   {"kind": "cyclic_flats", "q": q, "n": n, "flats": [{"subspace": {...}, "rank": r}, ...]}
//   {"kind": "direct_sum",   "left": {...}, "right": {...}}
//   {"kind": "dual",         "inner": {...}}
// Derived backends without a descriptor of their own serialize through their
// cyclic flats, which determine the rank function.

inline Json matroid_to_json(const QMatroid& M);

namespace detail {

inline Json cyclic_flats_to_json(const QMatroid& M) {
    Json flats = Json::array();
    for (const CyclicFlat& z : M.cyclic_flats())
        flats.push_back(Json{{"subspace", subspace_to_json(z.space)}, {"rank", z.rank}});
    return Json{{"kind", "cyclic_flats"}, {"q", M.q()}, {"n", M.n()}, {"flats", std::move(flats)}};
}

}  // namespace detail

// Canonical cyclic-flats descriptor of any matroid, whatever its backend.
inline Json cyclic_flats_descriptor(const QMatroid& M) { return detail::cyclic_flats_to_json(M); }

inline Json matroid_to_json(const QMatroid& M) {
    const std::string kind = M.kind();
    if (kind == "uniform") {
        const auto* b = dynamic_cast<const UniformBackend*>(M.backend_ptr().get());
        return Json{{"kind", "uniform"}, {"k", b->k}, {"n", M.n()}, {"q", M.q()}};
    }
    if (kind == "represented") {
        const auto* b = dynamic_cast<const RepresentedBackend*>(M.backend_ptr().get());
        if (b->gen.empty()) return detail::cyclic_flats_to_json(M);
        Json gen = Json::array();
        for (const auto& row : b->gen) {
            Json r = Json::array();
            for (uint32_t v : row) r.push_back(b->field->to_string(v));
            gen.push_back(std::move(r));
        }
        return Json{{"kind", "represented"},
                    {"field", field_to_json(*b->field)},
                    {"generator", std::move(gen)}};
    }
    if (kind == "cyclic_flats") {
        const auto* b = dynamic_cast<const CyclicFlatsBackend*>(M.backend_ptr().get());
        std::vector<CyclicFlat> zs = b->flats;
        std::sort(zs.begin(), zs.end(),
                  [](const CyclicFlat& a, const CyclicFlat& c) { return a.space < c.space; });
        Json flats = Json::array();
        for (const CyclicFlat& z : zs)
            flats.push_back(Json{{"subspace", subspace_to_json(z.space)}, {"rank", z.rank}});
        return Json{{"kind", "cyclic_flats"}, {"q", M.q()}, {"n", M.n()}, {"flats", std::move(flats)}};
    }
    if (kind == "direct_sum") {
        const auto* b = dynamic_cast<const DirectSumBackend*>(M.backend_ptr().get());
        return Json{{"kind", "direct_sum"},
                    {"left", matroid_to_json(b->left)},
                    {"right", matroid_to_json(b->right)}};
    }
    if (kind == "dual") {
        const auto* b = dynamic_cast<const DualBackend*>(M.backend_ptr().get());
        return Json{{"kind", "dual"}, {"inner", matroid_to_json(b->inner)}};
    }
    return detail::cyclic_flats_to_json(M);
}

inline QMatroid matroid_from_json(const Json& j) {
    const std::string kind = detail::string_member(j, "kind");
    if (kind == "uniform") {
        int k = detail::int_member(j, "k");
        int n = detail::int_member(j, "n");
        int q = detail::int_member(j, "q");
        try {
            return uniform_matroid(k, n, q);
        } catch (const Error& e) {
            throw ParseError(std::string("bad uniform descriptor: ") + e.what());
        }
    }
    if (kind == "represented") {
        ExtFieldPtr F = field_from_json(detail::member(j, "field"));
        const Json& gen = detail::array_member(j, "generator");
        std::vector<std::vector<uint32_t>> rows;
        size_t width = 0;
        for (const Json& row : gen) {
            if (!row.is_array()) throw ParseError("generator rows must be arrays");
            std::vector<uint32_t> r;
            for (const Json& e : row) {
                if (!e.is_string()) throw ParseError("generator entries must be field element strings");
                try {
                    r.push_back(F->parse(e.get<std::string>()));
                } catch (const Error& err) {
                    throw ParseError(std::string("bad generator entry: ") + err.what());
                }
            }
            if (rows.empty()) width = r.size();
            else if (r.size() != width) throw ParseError("generator rows have unequal lengths");
            rows.push_back(std::move(r));
        }
        if (rows.empty()) throw ParseError("represented descriptor needs at least one generator row");
        try {
            return represented_matroid(std::move(F), std::move(rows));
        } catch (const Error& e) {
            throw ParseError(std::string("bad represented descriptor: ") + e.what());
        }
    }
    if (kind == "cyclic_flats") {
        int q = detail::int_member(j, "q");
        int n = detail::int_member(j, "n");
        const Json& flats = detail::array_member(j, "flats");
        std::vector<CyclicFlat> zs;
        for (const Json& f : flats) {
            Subspace Z = subspace_from_json(detail::member(f, "subspace"), q);
            if (Z.n != n) throw ParseError("cyclic flat lives in the wrong ambient dimension");
            zs.push_back(CyclicFlat{std::move(Z), detail::int_member(f, "rank")});
        }
        return from_cyclic_flats(q, n, zs);
    }
    if (kind == "direct_sum") {
        QMatroid left = matroid_from_json(detail::member(j, "left"));
        QMatroid right = matroid_from_json(detail::member(j, "right"));
        return direct_sum(left, right);
    }
    if (kind == "dual") return matroid_from_json(detail::member(j, "inner")).dual();
    throw ParseError("unknown matroid kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Configuration lattices: {"labels": [[corank, nullity], ...], "le": [[0/1, ...], ...]}
// with le[i][j] = 1 when node i lies below node j.

inline Json config_to_json(const ConfigLattice& C) {
    Json labels = Json::array();
    for (const CorankNullity& l : C.labels()) labels.push_back(Json::array({l.corank, l.nullity}));
    Json le = Json::array();
    for (const auto& row : C.relation()) {
        Json r = Json::array();
        for (char v : row) r.push_back(v ? 1 : 0);
        le.push_back(std::move(r));
    }
    return Json{{"labels", std::move(labels)}, {"le", std::move(le)}};
}

inline ConfigLattice config_from_json(const Json& j) {
    std::vector<CorankNullity> labels;
    for (const Json& l : detail::array_member(j, "labels")) {
        if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer())
            throw ParseError("labels entries must be [corank, nullity] integer pairs");
        labels.push_back(CorankNullity{l[0].get<int>(), l[1].get<int>()});
    }
    std::vector<std::vector<char>> le;
    for (const Json& row : detail::array_member(j, "le")) {
        if (!row.is_array()) throw ParseError("le rows must be arrays");
        std::vector<char> r;
        for (const Json& v : row) {
            if (!v.is_number_integer()) throw ParseError("le entries must be 0 or 1");
            int b = v.get<int>();
            if (b != 0 && b != 1) throw ParseError("le entries must be 0 or 1");
            r.push_back((char)b);
        }
        le.push_back(std::move(r));
    }
    return ConfigLattice(std::move(labels), std::move(le));
}

// ---------------------------------------------------------------------------
// Classical matroid input for the coordinate-subspace lift:
//   {"ground_size": n, "cyclic_sets": [[bitmask, rank], ...], "q": 2}
// with "q" optional.

inline MatroidCyclicData matroid_cyclic_data_from_json(const Json& j) {
    MatroidCyclicData d;
    d.ground_size = detail::int_member(j, "ground_size");
    for (const Json& s : detail::array_member(j, "cyclic_sets")) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
            throw ParseError("cyclic_sets entries must be [bitmask, rank] integer pairs");
        long mask = s[0].get<long>();
        if (mask < 0) throw ParseError("cyclic_sets bitmasks must be non-negative");
        d.cyclic_sets.emplace_back((uint32_t)mask, s[1].get<int>());
    }
    return d;
}

// ---------------------------------------------------------------------------
// Polynomials: {"deg_x": i, "deg_y": j, "coeffs": [[c_00, ...], ...]} with
// coeffs[i][j] the coefficient of x^i y^j.  Coefficients beyond int64 are
// decimal strings; the parser accepts either form everywhere.

inline Json int_to_json(const Int& v) {
    static const Int kLo = Int(std::numeric_limits<int64_t>::min());
    static const Int kHi = Int(std::numeric_limits<int64_t>::max());
    if (v >= kLo && v <= kHi) return Json(v.convert_to<int64_t>());
    return Json(v.str());
}

inline Json poly_to_json(const BivariatePoly& p) {
    Json coeffs = Json::array();
    for (const auto& row : p.grid()) {
        Json r = Json::array();
        for (const Int& c : row) r.push_back(int_to_json(c));
        coeffs.push_back(std::move(r));
    }
    return Json{{"deg_x", p.deg_x()}, {"deg_y", p.deg_y()}, {"coeffs", std::move(coeffs)}};
}

inline BivariatePoly poly_from_json(const Json& j) {
    int dx = detail::int_member(j, "deg_x");
    int dy = detail::int_member(j, "deg_y");
    const Json& coeffs = detail::array_member(j, "coeffs");
    if (dx < 0 || dy < 0) throw ParseError("polynomial degrees must be non-negative");
    if ((int)coeffs.size() != dx + 1) throw ParseError("coeffs needs deg_x + 1 rows");
    BivariatePoly p;
    for (int i = 0; i <= dx; ++i) {
        const Json& row = coeffs[i];
        if (!row.is_array() || (int)row.size() != dy + 1)
            throw ParseError("each coeffs row needs deg_y + 1 entries");
        for (int k = 0; k <= dy; ++k) {
            const Json& e = row[k];
            if (e.is_number_integer()) {
                p.set(i, k, Int(e.get<int64_t>()));
            } else if (e.is_string()) {
                try {
                    p.set(i, k, Int(e.get<std::string>()));
                } catch (const std::exception&) {
                    throw ParseError("coefficient string is not a decimal integer");
                }
            } else {
                throw ParseError("coefficients must be integers or decimal strings");
            }
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Condensed configurations:
//   {"blocks": [[node ids], ...], "gamma": [[...], ...], "lambda": [[corank, nullity], ...]}

inline Json condensation_to_json(const Condensation& c) {
    Json blocks = Json::array();
    for (const auto& b : c.blocks) blocks.push_back(b);
    Json gamma = Json::array();
    for (const auto& row : c.gamma) gamma.push_back(row);
    Json lambda = Json::array();
    for (const CorankNullity& l : c.lambda) lambda.push_back(Json::array({l.corank, l.nullity}));
    return Json{{"blocks", std::move(blocks)}, {"gamma", std::move(gamma)}, {"lambda", std::move(lambda)}};
}

inline Condensation condensation_from_json(const Json& j) {
    Condensation c;
    for (const Json& b : detail::array_member(j, "blocks")) {
        if (!b.is_array()) throw ParseError("blocks entries must be arrays of node ids");
        std::vector<int> ids;
        for (const Json& v : b) {
            if (!v.is_number_integer()) throw ParseError("block node ids must be integers");
            ids.push_back(v.get<int>());
        }
        c.blocks.push_back(std::move(ids));
    }
    for (const Json& row : detail::array_member(j, "gamma")) {
        if (!row.is_array()) throw ParseError("gamma rows must be arrays");
        std::vector<long> r;
        for (const Json& v : row) {
            if (!v.is_number_integer()) throw ParseError("gamma entries must be integers");
            r.push_back(v.get<long>());
        }
        c.gamma.push_back(std::move(r));
    }
    for (const Json& l : detail::array_member(j, "lambda")) {
        if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer())
            throw ParseError("lambda entries must be [corank, nullity] integer pairs");
        c.lambda.push_back(CorankNullity{l[0].get<int>(), l[1].get<int>()});
    }
    return c;
}

// ---------------------------------------------------------------------------

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace qmat
