// Batch front end: loads q-matroid descriptors, computes invariants, and
// emits text, JSON, or DOT.  Exit codes: 0 success, 1 domain errors
// (axiom violations print their certificates), 2 I/O and parse errors.
// QMAT_MAX_N (default 8) caps the ambient dimension of enumeration work.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <qmat/condense.hpp>
#include <qmat/invariants.hpp>
#include <qmat/io.hpp>
#include <qmat/lattice.hpp>
#include <qmat/qmatroid.hpp>

using namespace qmat;

namespace {

struct Options {
    std::string input;
    std::string format = "text";
    std::string mode = "exhaustive";
    uint64_t seed = 20240801;
};

const Json& member(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError(std::string("expected an object with a '") + key + "' member");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing member '") + key + "'");
    return *it;
}

int int_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_number_integer()) throw ParseError(std::string("member '") + key + "' must be an integer");
    return v.get<int>();
}

int max_ambient() {
    const char* env = std::getenv("QMAT_MAX_N");
    if (!env || !*env) return 8;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ParseError("QMAT_MAX_N must be a non-negative integer");
    return (int)v;
}

QMatroid guard(QMatroid M) {
    int cap = max_ambient();
    if (M.n() > cap)
        throw ScaleError("ambient dimension " + std::to_string(M.n()) + " exceeds QMAT_MAX_N (" +
                         std::to_string(cap) + ")");
    return M;
}

QMatroid load_matroid(const std::string& path) { return guard(matroid_from_json(load_json(path))); }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

[[noreturn]] void reject_format(const std::string& verb, const std::string& format) {
    throw ParseError("--format " + format + " is not available for " + verb);
}

void print_flats(const QMatroid& M) {
    auto zs = M.cyclic_flats();
    std::cout << "q=" << M.q() << " n=" << M.n() << " rank=" << M.max_rank() << "\n";
    std::cout << "cyclic flats (" << zs.size() << "):\n";
    for (const auto& z : zs) std::cout << "  rank " << z.rank << "  " << pretty(z.space) << "\n";
}

int run_poly_verb(const Options& o, const std::string& verb, const BivariatePoly& p) {
    if (o.format == "json") emit(poly_to_json(p));
    else if (o.format == "dot") reject_format(verb, o.format);
    else std::cout << p.str() << "\n";
    return 0;
}

int run_flats_verb(const Options& o, const QMatroid& M, const std::string& graph) {
    if (o.format == "json") emit(cyclic_flats_descriptor(M));
    else if (o.format == "dot") std::cout << to_dot(cyclic_flat_lattice(M), graph);
    else print_flats(M);
    return 0;
}

int run_cloud_flock(const Options& o) {
    QMatroid M = load_matroid(o.input);
    int q = M.q();
    SubspaceLattice L = cyclic_flat_lattice(M);
    ConfigLattice C = config(M);
    std::vector<BivariatePoly> cs, fs, hs;
    BivariatePoly R;
    for (int z = 0; z < L.size(); ++z) {
        cs.push_back(cloud(M, L.label(z)));
        fs.push_back(flock(M, L.label(z)));
        hs.push_back(star_product(cs.back(), fs.back(), q));
        R += hs.back();
    }
    if (o.format == "json") {
        Json rows = Json::array();
        for (int z = 0; z < L.size(); ++z)
            rows.push_back(Json{{"subspace", subspace_to_json(L.label(z))},
                                {"corank", C.label(z).corank},
                                {"nullity", C.label(z).nullity},
                                {"cloud", poly_to_json(cs[z])},
                                {"flock", poly_to_json(fs[z])},
                                {"h", poly_to_json(hs[z])}});
        emit(Json{{"q", q}, {"rows", std::move(rows)}, {"whitney", poly_to_json(R)}});
    } else if (o.format == "dot") {
        std::cout << to_dot(cf_lattice(M), "cloud_flock");
    } else {
        for (int z = 0; z < L.size(); ++z)
            std::cout << "Z" << z << ": " << pretty(L.label(z)) << "\n"
                      << "  corank " << C.label(z).corank << ", nullity " << C.label(z).nullity
                      << "\n"
                      << "  cloud: " << cs[z].str() << "\n"
                      << "  flock: " << fs[z].str() << "\n"
                      << "  h:     " << hs[z].str() << "\n";
        std::cout << "whitney: " << R.str() << "\n";
    }
    return 0;
}

int run_config(const Options& o) {
    QMatroid M = load_matroid(o.input);
    ConfigLattice C = config(M);
    if (o.format == "json") {
        Json j = config_to_json(C);
        j["q"] = M.q();
        emit(j);
    } else if (o.format == "dot") {
        std::cout << to_dot(C, "configuration");
    } else {
        std::cout << "nodes (" << C.size() << "):\n";
        for (int z = 0; z < C.size(); ++z)
            std::cout << "  " << z << ": " << label_text(C.label(z)) << "\n";
        std::cout << "cover edges:\n";
        for (auto [lo, hi] : C.cover_edges()) std::cout << "  " << lo << " < " << hi << "\n";
    }
    return 0;
}

int run_cf_from_config(const Options& o) {
    Json doc = load_json(o.input);
    int q = int_member(doc, "q");
    ConfigLattice C = config_from_json(doc);
    CFLattice CF = cf_from_config(C, q);
    BivariatePoly R = whitney_from_cf(CF, q);
    if (o.format == "json") {
        Json nodes = Json::array();
        for (int z = 0; z < CF.size(); ++z)
            nodes.push_back(Json{{"label", Json::array({C.label(z).corank, C.label(z).nullity})},
                                 {"cloud", poly_to_json(CF.label(z).cloud)},
                                 {"flock", poly_to_json(CF.label(z).flock)}});
        emit(Json{{"q", q}, {"nodes", std::move(nodes)}, {"whitney", poly_to_json(R)}});
    } else if (o.format == "dot") {
        std::cout << to_dot(CF, "cloud_flock");
    } else {
        for (int z = 0; z < CF.size(); ++z)
            std::cout << z << " " << label_text(C.label(z)) << ": cloud " << CF.label(z).cloud.str()
                      << ", flock " << CF.label(z).flock.str() << "\n";
        std::cout << "whitney: " << R.str() << "\n";
    }
    return 0;
}

int run_direct_sum(const Options& o) {
    Json doc = load_json(o.input);
    if (doc.is_object() && !doc.contains("kind") && doc.contains("left") && doc.contains("right"))
        doc["kind"] = "direct_sum";
    QMatroid M = guard(matroid_from_json(doc));
    if (M.kind() != "direct_sum")
        throw ParseError("direct-sum needs a descriptor with left and right parts");
    return run_flats_verb(o, M, "direct_sum");
}

void print_condensation(const Condensation& cc, int q, const Options& o) {
    if (o.format == "json") {
        Json j = condensation_to_json(cc);
        j["q"] = q;
        emit(j);
    } else if (o.format == "dot") {
        std::cout << to_dot(cc, "condensation");
    } else {
        std::cout << "blocks (" << cc.blocks.size() << "):\n";
        for (size_t b = 0; b < cc.blocks.size(); ++b) {
            std::cout << "  B" << b << " " << label_text(cc.lambda[b]) << " {";
            for (size_t i = 0; i < cc.blocks[b].size(); ++i)
                std::cout << (i ? ", " : "") << cc.blocks[b][i];
            std::cout << "}\n";
        }
        std::cout << "gamma:\n";
        for (const auto& row : cc.gamma) {
            std::cout << " ";
            for (long v : row) std::cout << " " << v;
            std::cout << "\n";
        }
    }
}

int run_condense(const Options& o) {
    QMatroid M = load_matroid(o.input);
    print_condensation(coarsest_condensation(config(M)), M.q(), o);
    return 0;
}

int run_condensed_config(const Options& o) {
    Json doc = load_json(o.input);
    QMatroid M = guard(matroid_from_json(member(doc, "matroid")));
    std::vector<std::vector<int>> blocks;
    for (const Json& b : member(doc, "blocks")) {
        if (!b.is_array()) throw ParseError("blocks entries must be arrays of node ids");
        std::vector<int> ids;
        for (const Json& v : b) {
            if (!v.is_number_integer()) throw ParseError("block node ids must be integers");
            ids.push_back(v.get<int>());
        }
        blocks.push_back(std::move(ids));
    }
    print_condensation(condensed_config(config(M), blocks), M.q(), o);
    return 0;
}

int run_whitney_from_condensed(const Options& o) {
    Json doc = load_json(o.input);
    int q = int_member(doc, "q");
    return run_poly_verb(o, "whitney-from-condensed",
                         whitney_from_condensed(condensation_from_json(doc), q));
}

int run_extremal(const Options& o) {
    QMatroid M = load_matroid(o.input);
    BivariatePoly R = whitney(M);
    std::vector<ExtremalTerm> terms = extremal_terms(R);
    if (o.format == "json") {
        Json ex = Json::array();
        for (const auto& t : terms)
            ex.push_back(Json::array({t.corank, t.nullity, int_to_json(t.count)}));
        emit(Json{{"whitney", poly_to_json(R)}, {"extremal", std::move(ex)}});
    } else if (o.format == "dot") {
        reject_format("extremal", o.format);
    } else {
        std::cout << "whitney matrix (rows by corank, columns by nullity):\n";
        for (const auto& row : R.grid()) {
            std::cout << " ";
            for (const Int& v : row) std::cout << " " << v.str();
            std::cout << "\n";
        }
        std::cout << "extremal positions (" << terms.size() << "):\n";
        for (const auto& t : terms)
            std::cout << "  corank " << t.corank << ", nullity " << t.nullity << ": "
                      << t.count.str() << "\n";
    }
    return 0;
}

int run_from_cyclic_flats(const Options& o) {
    Json doc = load_json(o.input);
    const Json& kind = member(doc, "kind");
    if (!kind.is_string() || kind.get<std::string>() != "cyclic_flats")
        throw ParseError("from-cyclic-flats needs a cyclic_flats descriptor");
    QMatroid M = guard(matroid_from_json(doc));
    if (o.format == "text") std::cout << "valid cyclic-flat family\n";
    return run_flats_verb(o, M, "cyclic_flats");
}

int run_lift(const Options& o) {
    Json doc = load_json(o.input);
    MatroidCyclicData d = matroid_cyclic_data_from_json(doc);
    int q = doc.contains("q") ? int_member(doc, "q") : 2;
    QMatroid M = guard(lift_matroid(d, q));
    if (o.format == "text") std::cout << "lifted to coordinate subspaces\n";
    return run_flats_verb(o, M, "lifted_cyclic_flats");
}

struct CheckRow {
    std::string name;
    bool ok;
    std::string detail;
};

int run_verify(const Options& o) {
    QMatroid M = load_matroid(o.input);
    int q = M.q(), n = M.n();
    std::vector<CheckRow> rows;
    auto check = [&](const std::string& name, const std::function<void()>& fn) {
        try {
            fn();
            rows.push_back({name, true, ""});
        } catch (const Error& e) {
            rows.push_back({name, false, e.what()});
        }
    };

    if (o.mode == "sampled") {
        check("rank axioms (sampled)",
              [&] { M.validate_rank_axioms(ValidationMode::sampled, o.seed); });
    } else {
        try {
            M.validate_rank_axioms(ValidationMode::exhaustive);
            rows.push_back({"rank axioms (exhaustive)", true, ""});
        } catch (const ScaleError&) {
            check("rank axioms (sampled; exhaustive exceeds the size limit)",
                  [&] { M.validate_rank_axioms(ValidationMode::sampled, o.seed); });
        } catch (const Error& e) {
            rows.push_back({"rank axioms (exhaustive)", false, e.what()});
        }
    }

    BivariatePoly R = whitney(M);

    check("whitney equals its cloud-flock decomposition", [&] {
        if (whitney_from_cf(M) != R) throw ConsistencyError("decomposition sum differs");
    });

    check("whitney equals the subflock-supercloud sum", [&] {
        BivariatePoly sum;
        for (const auto& z : M.cyclic_flats())
            sum += star_product(supercloud(M, z.space), subflock(M, z.space), q);
        if (sum != R) throw ConsistencyError("subflock-supercloud sum differs");
    });

    QMatroid D = M.dual();

    check("dual whitney is the variable swap", [&] {
        if (whitney(D) != R.swapped()) throw ConsistencyError("dual whitney differs");
    });

    check("dual cyclic flats are the orthogonal complements", [&] {
        std::vector<Subspace> expect;
        for (const auto& z : M.cyclic_flats()) expect.push_back(perp(z.space));
        std::sort(expect.begin(), expect.end());
        std::vector<Subspace> got;
        for (const auto& z : D.cyclic_flats()) got.push_back(z.space);
        std::sort(got.begin(), got.end());
        if (got != expect) throw ConsistencyError("dual family is not the complement family");
    });

    check("configuration recovers the cloud-flock lattice", [&] {
        if (!(cf_from_config(config(M), q) == cf_lattice(M)))
            throw ConsistencyError("recovered labels differ");
    });

    check("coarsest condensation recovers the whitney function", [&] {
        if (whitney_from_condensed(coarsest_condensation(config(M)), q) != R)
            throw ConsistencyError("block recursion differs");
    });

    check("extremal entries count cyclic flats", [&] {
        ConfigLattice C = config(M);
        for (const auto& t : extremal_terms(R)) {
            long cnt = 0;
            for (int z = 0; z < C.size(); ++z)
                if (C.label(z).corank == t.corank && C.label(z).nullity == t.nullity) ++cnt;
            if (Int(cnt) != t.count)
                throw ConsistencyError("count mismatch at corank " + std::to_string(t.corank) +
                                       ", nullity " + std::to_string(t.nullity));
        }
    });

    if (M.is_full()) {
        check("truncations split the interior off the uniform fibers", [&] {
            int top = M.max_rank();
            BivariatePoly interior;
            for (const auto& z : M.cyclic_flats()) {
                if (z.space.is_zero() || z.space.dim() == n) continue;
                interior += star_product(cloud(M, z.space), flock(M, z.space), q);
            }
            if (uniform_cloud(top, n, q) != trunc_x(interior) + cloud(M, zero_space(q, n)))
                throw ConsistencyError("cloud truncation identity differs");
            if (uniform_flock(top, n, q) != trunc_y(interior) + flock(M, full_space(q, n)))
                throw ConsistencyError("flock truncation identity differs");
        });
    }

    bool all = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.ok; });
    if (o.format == "json") {
        Json checks = Json::array();
        for (const auto& r : rows)
            checks.push_back(Json{{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
        emit(Json{{"ok", all}, {"checks", std::move(checks)}});
    } else if (o.format == "dot") {
        reject_format("verify", o.format);
    } else {
        for (const auto& r : rows)
            std::cout << (r.ok ? "ok    " : "FAIL  ") << r.name
                      << (r.ok ? "" : ": " + r.detail) << "\n";
        std::cout << (all ? "all checks passed" : "some checks failed") << "\n";
    }
    return all ? 0 : 1;
}

int dispatch(const std::string& verb, const Options& o) {
    if (verb == "whitney") return run_poly_verb(o, verb, whitney(load_matroid(o.input)));
    if (verb == "char-poly") return run_poly_verb(o, verb, char_poly(load_matroid(o.input)));
    if (verb == "cyclic-flats") return run_flats_verb(o, load_matroid(o.input), "cyclic_flats");
    if (verb == "cloud-flock") return run_cloud_flock(o);
    if (verb == "config") return run_config(o);
    if (verb == "cf-from-config") return run_cf_from_config(o);
    if (verb == "dual") return run_flats_verb(o, load_matroid(o.input).dual(), "dual_cyclic_flats");
    if (verb == "direct-sum") return run_direct_sum(o);
    if (verb == "condense") return run_condense(o);
    if (verb == "condensed-config") return run_condensed_config(o);
    if (verb == "whitney-from-condensed") return run_whitney_from_condensed(o);
    if (verb == "extremal") return run_extremal(o);
    if (verb == "from-cyclic-flats") return run_from_cyclic_flats(o);
    if (verb == "lift-matroid") return run_lift(o);
    return run_verify(o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-matroid invariants: Whitney functions, clouds and flocks, "
                 "configurations, and condensations"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<std::string, std::string>> verbs = {
        {"whitney", "corank-nullity generating function of a q-matroid"},
        {"char-poly", "characteristic polynomial"},
        {"cyclic-flats", "cyclic flats with their ranks"},
        {"cloud-flock", "cloud, flock, and star-product table over the cyclic flats"},
        {"config", "configuration: the cyclic-flat lattice with corank-nullity labels"},
        {"cf-from-config", "recover cloud-flock labels from a configuration alone"},
        {"dual", "cyclic flats of the dual q-matroid"},
        {"direct-sum", "cyclic flats of a direct sum"},
        {"condense", "coarsest condensation of the configuration"},
        {"condensed-config", "condensation for a user-supplied block partition"},
        {"whitney-from-condensed", "whitney function from a condensed configuration"},
        {"extremal", "whitney matrix and its extremal positions"},
        {"from-cyclic-flats", "build and validate a q-matroid from a cyclic-flat family"},
        {"lift-matroid", "lift a classical matroid to coordinate subspaces"},
        {"verify", "run the invariant suite on a q-matroid and report pass/fail"},
    };
    for (const auto& [name, desc] : verbs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--input", opt.input, "input descriptor path")->required();
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--mode", opt.mode, "axiom check mode")
            ->check(CLI::IsMember({"exhaustive", "sampled"}));
        sub->add_option("--seed", opt.seed, "seed for sampled axiom checks");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        return dispatch(verb, opt);
    } catch (const qmat::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
