// End-to-end acceptance runner: eleven numbered scenarios covering the worked
// examples, the duality and condensation suites, and the counting laws.
// Prints one line per scenario and exits nonzero if any of them fails.
// Polynomial and table comparisons are byte comparisons of canonical forms.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <qmat/condense.hpp>
#include <qmat/gfq.hpp>
#include <qmat/invariants.hpp>
#include <qmat/lattice.hpp>
#include <qmat/poly.hpp>
#include <qmat/qmatroid.hpp>
#include <qmat/subspace.hpp>

using namespace qmat;

namespace {

struct Failure {
    std::string msg;
};

void expect(bool ok, const std::string& msg) {
    if (!ok) throw Failure{msg};
}

void expect_eq(const std::string& got, const std::string& want, const std::string& what) {
    if (got != want) throw Failure{what + ": got \"" + got + "\", want \"" + want + "\""};
}

ExtFieldPtr f128() {
    static ExtFieldPtr f = std::make_shared<const ExtensionField>(
        2, 7, std::vector<int>{1, 1, 0, 0, 0, 0, 0, 1});
    return f;
}

ExtFieldPtr f64() {
    static ExtFieldPtr f = std::make_shared<const ExtensionField>(
        2, 6, std::vector<int>{1, 1, 0, 1, 1, 0, 1});
    return f;
}

QMatroid running_example() {
    auto F = f128();
    auto w = [&](int k) { return F->omega_pow((uint64_t)k); };
    std::vector<std::vector<uint32_t>> g = {
        {F->one(), w(90), 0, w(10), 0, w(4)},
        {0, 0, F->one(), w(7), 0, w(90)},
        {0, 0, 0, 0, F->one(), w(32)},
    };
    return represented_matroid(F, g);
}

QMatroid running_example_dual_rep() {
    auto F = f128();
    auto w = [&](int k) { return F->omega_pow((uint64_t)k); };
    std::vector<std::vector<uint32_t>> h = {
        {F->one(), 0, 0, w(59), w(8), w(103)},
        {0, F->one(), 0, w(22), w(98), w(66)},
        {0, 0, F->one(), w(100), w(11), w(106)},
    };
    return represented_matroid(F, h);
}

QMatroid five_col(int a1, int a2, int b1, int b2, int c1, int c2) {
    auto F = f128();
    auto w = [&](int k) { return F->omega_pow((uint64_t)k); };
    std::vector<std::vector<uint32_t>> g = {
        {F->one(), 0, 0, w(a1), w(a2)},
        {0, F->one(), 0, w(b1), w(b2)},
        {0, 0, F->one(), w(c1), w(c2)},
    };
    return represented_matroid(F, g);
}

QMatroid sample_represented() { return five_col(65, 85, 37, 72, 124, 118); }
QMatroid sample_represented_2() { return five_col(26, 64, 27, 20, 50, 92); }

QMatroid six_col(int a1, int a2, int b1, int b2) {
    auto F = f64();
    auto w = [&](int k) { return F->omega_pow((uint64_t)k); };
    std::vector<std::vector<uint32_t>> g = {
        {F->one(), 0, 0, w(a1), w(a2), 0},
        {0, F->one(), 0, w(b1), w(b2), F->one()},
        {0, 0, F->one(), w(7), w(5), w(1)},
    };
    return represented_matroid(F, g);
}

QMatroid sixteen_flats() { return six_col(44, 34, 37, 9); }
QMatroid thirteen_flats() { return six_col(31, 22, 56, 30); }

Subspace sp(int n, const std::vector<std::string>& gens) {
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& s : gens) {
        std::vector<uint8_t> row(n, 0);
        for (int i = 0; i < n; ++i) row[i] = (uint8_t)(s[i] - '0');
        rows.push_back(std::move(row));
    }
    return canonicalize(2, n, rows);
}

// The eight cyclic flats of running_example() in canonical node order.
std::vector<Subspace> running_flats() {
    return {
        zero_space(2, 6),
        sp(6, {"100000", "010000"}),
        sp(6, {"110100", "001100"}),
        sp(6, {"010010", "001011", "000100"}),
        sp(6, {"100110", "011010", "000001"}),
        sp(6, {"101100", "010110", "000001"}),
        sp(6, {"100000", "010000", "001000", "000100"}),
        full_space(2, 6),
    };
}

// The seven cyclic flats shared by the two rank-4 condensation examples,
// differing only in the next-to-last space.
std::vector<CyclicFlat> condensation_flats(bool second) {
    std::vector<CyclicFlat> zs = {
        {zero_space(2, 8), 0},
        {sp(8, {"10000000", "01000000", "00100000"}), 2},
        {sp(8, {"00010000", "00001000", "00000100"}), 2},
        {sp(8, {"10010000", "01001000", "00100100"}), 2},
        {sp(8, {"10000000", "01000000", "00100000", "00000010", "00000001"}), 3},
        {sp(8, {"00010000", "00001000", "00000100", "00000010", "00000001"}), 3},
        {full_space(2, 8), 4},
    };
    if (second)
        zs[5] = {sp(8, {"10000000", "01000000", "00100000", "00010010", "00001001"}), 3};
    return zs;
}

Subspace embed_window(const Subspace& V, int lo, int n) {
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& r : V.rows) {
        std::vector<uint8_t> row(n, 0);
        std::copy(r.begin(), r.end(), row.begin() + lo);
        rows.push_back(std::move(row));
    }
    return canonicalize(V.q, n, rows);
}

Subspace window(const Subspace& V, int lo, int len) {
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& r : V.rows) rows.emplace_back(r.begin() + lo, r.begin() + lo + len);
    return canonicalize(V.q, len, rows);
}

std::set<std::pair<Subspace, int>> cf_set(const std::vector<CyclicFlat>& v) {
    std::set<std::pair<Subspace, int>> s;
    for (const auto& z : v) s.insert({z.space, z.rank});
    return s;
}

std::string label_str(const CorankNullity& l) {
    return "(" + std::to_string(l.corank) + "," + std::to_string(l.nullity) + ")";
}

// Every named example the suites below run over, built once and shared; the
// rank caches on the instances amortize repeated scans.
struct Fixture {
    std::string name;
    QMatroid M;
};

const std::vector<Fixture>& fixtures() {
    static std::vector<Fixture> fx = [] {
        std::vector<CyclicFlat> n1 = {
            {zero_space(2, 6), 0},
            {sp(6, {"100000", "010000", "001000"}), 2},
            {sp(6, {"000100", "000010", "000001"}), 2},
            {full_space(2, 6), 3},
        };
        std::vector<CyclicFlat> n2 = {
            {zero_space(2, 6), 0},
            {sp(6, {"100000", "010000", "001000"}), 2},
            {sp(6, {"001000", "000100", "000010"}), 2},
            {full_space(2, 6), 3},
        };
        MatroidCyclicData lift{8,
                               {{0u, 0},
                                {7u, 2},
                                {28u, 2},
                                {105u, 3},
                                {177u, 3},
                                {170u, 3},
                                {31u, 3},
                                {255u, 4}}};
        std::vector<Fixture> v;
        v.push_back({"u_1_2", uniform_matroid(1, 2)});
        v.push_back({"cloudflock2", running_example()});
        v.push_back({"configcfduality", running_example_dual_rep()});
        v.push_back({"cloudflock3_m1", sample_represented()});
        v.push_back({"cloudflock3_m2", sample_represented_2()});
        v.push_back({"noniso_m1", from_cyclic_flats(2, 6, n1)});
        v.push_back({"noniso_m2", from_cyclic_flats(2, 6, n2)});
        v.push_back({"diffcycflats_m1", sixteen_flats()});
        v.push_back({"diffcycflats_m2", thirteen_flats()});
        v.push_back({"whitds_m1", direct_sum(uniform_matroid(1, 2), sixteen_flats())});
        v.push_back({"whitds_m2", direct_sum(uniform_matroid(1, 2), thirteen_flats())});
        v.push_back({"cconfig_m1", from_cyclic_flats(2, 8, condensation_flats(false))});
        v.push_back({"cconfig_m2", from_cyclic_flats(2, 8, condensation_flats(true))});
        v.push_back({"primefree", direct_sum(uniform_matroid(2, 2), uniform_matroid(0, 2))});
        v.push_back({"noconfig_lift", lift_matroid(lift)});
        return v;
    }();
    return fx;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    QMatroid M = running_example();
    expect((int)enumerate_all_subspaces(2, 6).size() == 2825,
           "subspace count of the rank-3 ambient space");

    SubspaceLattice L = cyclic_flat_lattice(M);
    std::vector<Subspace> want = running_flats();
    std::vector<int> want_rank = {0, 1, 1, 2, 2, 2, 2, 3};
    expect(L.size() == 8, "eight cyclic flats");
    for (int i = 0; i < 8; ++i) {
        expect(L.label(i) == want[i], "cyclic flat " + std::to_string(i));
        expect(M.rank(want[i]) == want_rank[i], "rank of cyclic flat " + std::to_string(i));
    }

    std::set<std::pair<int, int>> hasse;
    for (auto [a, b] : L.cover_edges()) hasse.insert({a, b});
    std::set<std::pair<int, int>> want_hasse = {{0, 1}, {0, 2}, {0, 3}, {0, 4},
                                                {0, 5}, {1, 6}, {2, 6}, {3, 7},
                                                {4, 7}, {5, 7}, {6, 7}};
    expect(hasse == want_hasse, "the eleven cover edges");

    std::vector<std::pair<std::string, std::string>> table = {
        {"x^3+57x^2+451x", "1"},
        {"x^2+12x", "y+3"},
        {"x^2+12x", "y+3"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"x", "y^2+15y+33"},
        {"1", "y^3+63y^2+650y+1353"},
    };
    std::vector<std::string> want_h = {
        "x^3+57x^2+451x",
        "(y+3)x^2+(12y+72)x",
        "(y+3)x^2+(12y+72)x",
        "(y+7)x",
        "(y+7)x",
        "(y+7)x",
        "(y^2+15y+33)x",
        "y^3+63y^2+650y+1353",
    };
    BivariatePoly total;
    for (int i = 0; i < 8; ++i) {
        BivariatePoly c = cloud(M, want[i]), f = flock(M, want[i]);
        expect_eq(c.str(), table[i].first, "cloud at node " + std::to_string(i));
        expect_eq(f.str(), table[i].second, "flock at node " + std::to_string(i));
        BivariatePoly h = star_product(c, f, 2);
        expect_eq(h.str(), want_h[i], "h column at node " + std::to_string(i));
        total += h;
    }
    BivariatePoly R = whitney(M);
    expect(total == R, "the h column sums to the corank-nullity polynomial");
    expect_eq(R.str(), "x^3+(2y+63)x^2+(y^2+42y+649)x+y^3+63y^2+650y+1353",
              "corank-nullity polynomial");
}

void criterion_2() {
    Subspace V1 = sp(6, {"100000", "010000", "001000"});
    Subspace V2 = sp(6, {"000100", "000010", "000001"});
    Subspace V3 = sp(6, {"001000", "000100", "000010"});

    auto t = space_table(2, 6);
    auto modified = [&](const Subspace& A, const Subspace& B) {
        std::vector<int16_t> ranks(t->size());
        for (int id = 0; id < t->size(); ++id)
            ranks[id] = (int16_t)std::min(3, t->dim(id));
        ranks[t->id_of(A)] = 2;
        ranks[t->id_of(B)] = 2;
        return table_matroid(2, 6, std::move(ranks));
    };
    QMatroid M1 = modified(V1, V2);
    QMatroid M2 = modified(V1, V3);
    M1.validate_rank_axioms();
    M2.validate_rank_axioms();

    std::set<std::pair<Subspace, int>> z1 = {{zero_space(2, 6), 0},
                                             {V1, 2},
                                             {V2, 2},
                                             {full_space(2, 6), 3}};
    std::set<std::pair<Subspace, int>> z2 = {{zero_space(2, 6), 0},
                                             {V1, 2},
                                             {V3, 2},
                                             {full_space(2, 6), 3}};
    expect(cf_set(M1.cyclic_flats()) == z1, "cyclic flats of the first table");
    expect(cf_set(M2.cyclic_flats()) == z2, "cyclic flats of the second table");

    std::string want = "x^3+63x^2+(2y+651)x+y^3+63y^2+651y+1393";
    expect_eq(whitney(M1).str(), want, "first corank-nullity polynomial");
    expect_eq(whitney(M2).str(), want, "second corank-nullity polynomial");

    expect(intersect(V1, V2).dim() == 0, "the first pair of special spaces meets in 0");
    expect(intersect(V1, V3).dim() == 1, "the second pair of special spaces meets in a line");
}

void criterion_3() {
    QMatroid M1 = sample_represented();
    QMatroid M2 = sample_represented_2();

    SubspaceLattice L1 = cyclic_flat_lattice(M1), L2 = cyclic_flat_lattice(M2);
    expect(L1.size() == 5 && L2.size() == 5, "five cyclic flats each");
    expect(config(M1) == config(M2), "identical configurations");

    std::vector<std::pair<std::string, std::string>> table = {
        {"x^3+31x^2+134x", "1"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"1", "y^2+31y+152"},
    };
    for (const auto* L : {&L1, &L2}) {
        const QMatroid& M = (L == &L1) ? M1 : M2;
        for (int i = 0; i < 5; ++i) {
            expect_eq(cloud(M, L->label(i)).str(), table[i].first,
                      "cloud at node " + std::to_string(i));
            expect_eq(flock(M, L->label(i)).str(), table[i].second,
                      "flock at node " + std::to_string(i));
        }
    }

    std::string want = "x^3+31x^2+(3y+155)x+y^2+31y+152";
    expect_eq(whitney(M1).str(), want, "first corank-nullity polynomial");
    expect_eq(whitney(M2).str(), want, "second corank-nullity polynomial");

    // middle flats: pairwise intersections are three distinct lines in the
    // first matroid and a single common line in the second
    auto middles = [](const SubspaceLattice& L) {
        return std::vector<Subspace>{L.label(1), L.label(2), L.label(3)};
    };
    auto meets = [](const std::vector<Subspace>& zs) {
        return std::vector<Subspace>{intersect(zs[0], zs[1]), intersect(zs[0], zs[2]),
                                     intersect(zs[1], zs[2])};
    };
    std::vector<Subspace> m1 = meets(middles(L1)), m2 = meets(middles(L2));
    for (const auto& v : m1) expect(v.dim() == 1, "first matroid meets are lines");
    for (const auto& v : m2) expect(v.dim() == 1, "second matroid meets are lines");
    expect(!(m1[0] == m1[1]) && !(m1[0] == m1[2]) && !(m1[1] == m1[2]),
           "three distinct meets in the first matroid");
    expect(m2[0] == m2[1] && m2[1] == m2[2], "a single common meet in the second matroid");
}

void criterion_4() {
    QMatroid M = running_example();
    QMatroid D = M.dual();
    BivariatePoly R = whitney(M);

    expect(whitney(D) == R.swapped(), "duality swaps the two variables");

    SubspaceLattice L = cyclic_flat_lattice(M);
    std::set<std::pair<Subspace, int>> want_dual;
    for (const auto& z : M.cyclic_flats())
        want_dual.insert({perp(z.space), perp(z.space).dim() + z.rank - M.max_rank()});
    expect(cf_set(D.cyclic_flats()) == want_dual,
           "dual cyclic flats are the orthogonal complements");

    // the double dual evaluated through the dual rank function
    for (const auto& V : enumerate_all_subspaces(2, 6)) {
        int dd = V.dim() + D.rank(perp(V)) - D.max_rank();
        expect(dd == M.rank(V), "double dual rank at " + pretty(V));
    }

    // the printed dual representation is the same matroid as the dual
    expect(cf_set(running_example_dual_rep().cyclic_flats()) == cf_set(D.cyclic_flats()),
           "the explicit dual representation matches the dual");

    std::vector<std::pair<std::string, std::string>> table = {
        {"1", "y^3+63y^2+649y+1353"},
        {"x", "y^2+15y+34"},
        {"x", "y^2+15y+34"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"x", "y+7"},
        {"x^2+9x", "y+3"},
        {"x^3+60x^2+507x", "1"},
    };
    for (int i = 0; i < 8; ++i) {
        Subspace zp = perp(L.label(i));
        expect_eq(cloud(D, zp).str(), table[i].first,
                  "dual cloud at complement of node " + std::to_string(i));
        expect_eq(flock(D, zp).str(), table[i].second,
                  "dual flock at complement of node " + std::to_string(i));
    }
}

void criterion_5() {
    QMatroid M1 = sixteen_flats();
    QMatroid M2 = thirteen_flats();
    BivariatePoly R1 = whitney(M1), R2 = whitney(M2);

    std::string want = "x^3+(y+63)x^2+(y^2+39y+650)x+y^3+63y^2+650y+1356";
    expect_eq(R1.str(), want, "first corank-nullity polynomial");
    expect_eq(R2.str(), want, "second corank-nullity polynomial");
    expect((int)M1.cyclic_flats().size() == 16, "sixteen cyclic flats");
    expect((int)M2.cyclic_flats().size() == 13, "thirteen cyclic flats");

    // first configuration: a (2,1) node under the single (1,2) node, twelve
    // (1,1) nodes straight from bottom to top
    ConfigLattice C1 = config(M1);
    expect(C1.size() == 16, "sixteen configuration nodes");
    std::map<std::string, std::vector<int>> by_label;
    for (int i = 0; i < C1.size(); ++i) by_label[label_str(C1.label(i))].push_back(i);
    expect(by_label["(3,0)"].size() == 1 && by_label["(2,1)"].size() == 1 &&
               by_label["(1,1)"].size() == 12 && by_label["(1,2)"].size() == 1 &&
               by_label["(0,3)"].size() == 1,
           "first configuration label counts");
    int bot = by_label["(3,0)"][0], top = by_label["(0,3)"][0];
    int c21 = by_label["(2,1)"][0], c12 = by_label["(1,2)"][0];
    expect(C1.bottom() == bot && C1.top() == top, "extremes of the first configuration");
    expect(C1.covers(c21, c12) && C1.covers(c12, top) && C1.covers(bot, c21),
           "the (2,1) chain of the first configuration");
    for (int i : by_label["(1,1)"]) {
        expect(C1.covers(bot, i) && C1.covers(i, top),
               "a (1,1) node spans bottom to top");
        expect(!C1.le(c21, i) && !C1.le(i, c12), "(1,1) nodes avoid the (2,1) chain");
    }

    // second configuration: every middle node is a coatom over the bottom
    ConfigLattice C2 = config(M2);
    expect(C2.size() == 13, "thirteen configuration nodes");
    by_label.clear();
    for (int i = 0; i < C2.size(); ++i) by_label[label_str(C2.label(i))].push_back(i);
    expect(by_label["(3,0)"].size() == 1 && by_label["(2,1)"].size() == 1 &&
               by_label["(1,1)"].size() == 9 && by_label["(1,2)"].size() == 1 &&
               by_label["(0,3)"].size() == 1,
           "second configuration label counts");
    bot = by_label["(3,0)"][0];
    top = by_label["(0,3)"][0];
    for (int i = 0; i < C2.size(); ++i) {
        if (i == bot || i == top) continue;
        expect(C2.covers(bot, i) && C2.covers(i, top),
               "every middle node spans bottom to top");
    }

    std::vector<std::vector<Int>> want_grid = {
        {1356, 650, 63, 1}, {650, 39, 1, 0}, {63, 1, 0, 0}, {1, 0, 0, 0}};
    expect(R1.grid() == want_grid, "coefficient matrix");

    std::set<std::tuple<int, int, std::string>> ext;
    for (const auto& t : extremal_terms(R1)) ext.insert({t.corank, t.nullity, t.count.str()});
    std::set<std::tuple<int, int, std::string>> want_ext = {
        {3, 0, "1"}, {2, 1, "1"}, {1, 2, "1"}, {0, 3, "1"}};
    expect(ext == want_ext, "the four extremal positions");
}

void criterion_6() {
    QMatroid S1 = direct_sum(uniform_matroid(1, 2), sixteen_flats());
    QMatroid S2 = direct_sum(uniform_matroid(1, 2), thirteen_flats());
    BivariatePoly R1 = whitney(S1), R2 = whitney(S2);

    expect_eq(R1.str(),
              "x^4+(2y+255)x^3+(2y^2+159y+10793)x^2+(2y^3+159y^2+3469y+96996)x"
              "+y^4+255y^3+10793y^2+96996y+197316",
              "first quartic");
    expect_eq(R2.str(),
              "x^4+(2y+255)x^3+(2y^2+159y+10793)x^2+(2y^3+159y^2+3475y+96996)x"
              "+y^4+255y^3+10793y^2+96996y+197310",
              "second quartic");

    // the quartics differ exactly at the xy term and the constant
    BivariatePoly diff = R2 - R1;
    for (int i = 0; i <= diff.deg_x(); ++i)
        for (int j = 0; j <= diff.deg_y(); ++j) {
            Int want = (i == 1 && j == 1) ? Int(6) : (i == 0 && j == 0) ? Int(-6) : Int(0);
            expect(diff.coeff(i, j) == want,
                   "difference at x^" + std::to_string(i) + "y^" + std::to_string(j));
        }

    expect(!(char_poly(S1) == char_poly(S2)), "distinct characteristic polynomials");
}

void criterion_7() {
    QMatroid M1 = from_cyclic_flats(2, 8, condensation_flats(false));
    QMatroid M2 = from_cyclic_flats(2, 8, condensation_flats(true));
    expect(cf_set(M1.cyclic_flats()) == cf_set(condensation_flats(false)),
           "first cyclic-flat family recovered");
    expect(cf_set(M2.cyclic_flats()) == cf_set(condensation_flats(true)),
           "second cyclic-flat family recovered");

    std::vector<std::vector<long>> want_gamma = {
        {1, 1, 1, 1}, {0, 1, 1, 3}, {0, 0, 1, 2}, {0, 0, 0, 1}};
    std::vector<CorankNullity> want_lambda = {{4, 0}, {2, 1}, {1, 2}, {0, 4}};
    std::vector<std::vector<int>> want_blocks = {{0}, {1, 2, 3}, {4, 5}, {6}};
    for (const QMatroid* M : {&M1, &M2}) {
        Condensation cc = coarsest_condensation(config(*M));
        expect(cc.blocks == want_blocks, "coarsest blocks");
        expect(cc.gamma == want_gamma, "block counting matrix");
        expect(cc.lambda.size() == want_lambda.size(), "block label count");
        for (size_t i = 0; i < want_lambda.size(); ++i)
            expect(cc.lambda[i] == want_lambda[i], "block label " + std::to_string(i));
    }

    std::string want =
        "x^4+255x^3+(3y+10795)x^2+(2y^2+149y+97152)x"
        "+y^4+255y^3+10795y^2+97153y+200638";
    expect_eq(whitney(M1).str(), want, "first corank-nullity polynomial");
    expect_eq(whitney(M2).str(), want, "second corank-nullity polynomial");

    // identical condensed data, yet the clouds at the first middle flat differ
    Subspace Z1 = sp(8, {"10000000", "01000000", "00100000"});
    expect(!(cloud(M1, Z1) == cloud(M2, Z1)), "clouds at the shared flat differ");
}

void criterion_8() {
    for (const auto& fx : fixtures()) {
        const QMatroid& M = fx.M;
        int q = M.q(), n = M.n();
        BivariatePoly R = whitney(M);
        auto tag = [&](const std::string& what) { return fx.name + ": " + what; };

        expect(whitney_from_cf(cf_lattice(M), q) == R, tag("cloud-flock block sum"));

        BivariatePoly super_sum;
        for (const auto& z : M.cyclic_flats())
            super_sum += star_product(supercloud(M, z.space), subflock(M, z.space), q);
        expect(super_sum == R, tag("supercloud-subflock block sum"));

        expect(cf_from_config(config(M), q) == cf_lattice(M),
               tag("cloud-flock labels recovered from the configuration"));

        Condensation cc = coarsest_condensation(config(M));
        expect(whitney_from_condensed(cc, q) == R, tag("condensed block sum"));

        if (M.is_full()) {
            int top = M.max_rank();
            BivariatePoly interior;
            for (const auto& z : M.cyclic_flats()) {
                if (z.space.is_zero() || z.space.dim() == n) continue;
                interior += star_product(cloud(M, z.space), flock(M, z.space), q);
            }
            expect(uniform_cloud(top, n, q) == trunc_x(interior) + cloud(M, zero_space(q, n)),
                   tag("interior truncation against the uniform cloud"));
            expect(uniform_flock(top, n, q) == trunc_y(interior) + flock(M, full_space(q, n)),
                   tag("interior truncation against the uniform flock"));
        }

        // block recursion entries match the member sums for every
        // representative choice; restriction to the full space and
        // contraction by zero keep coordinates and ranks, so M serves there
        SubspaceLattice L = cyclic_flat_lattice(M);
        CFRecursionState st = cf_recursion(cc, q);
        int t = (int)cc.gamma.size();
        Subspace full = full_space(q, n), zero = zero_space(q, n);
        for (int j = 0; j < t; ++j) {
            for (int zp : cc.blocks[j]) {
                Subspace Zp = L.label(zp);
                QMatroid restricted = (Zp == full) ? M : M.restrict(Zp);
                for (int i = 0; i < t; ++i) {
                    if (cc.gamma[i][j] <= 0) continue;
                    BivariatePoly want_c, want_f;
                    for (int zi : cc.blocks[i]) {
                        if (!L.le(zi, zp)) continue;
                        Subspace Z = L.label(zi);
                        QMatroid contracted = Z.is_zero() ? M : M.contract(Z);
                        want_c += cloud(restricted, in_coordinates(Z, Zp));
                        want_f += flock(contracted, in_quotient_coordinates(Zp, Z));
                    }
                    expect(st.c[i][j] == want_c,
                           tag("recursion cloud block (" + std::to_string(i) + "," +
                               std::to_string(j) + ") at representative " +
                               std::to_string(zp)));
                    expect(st.f[i][j] == want_f,
                           tag("recursion flock block (" + std::to_string(i) + "," +
                               std::to_string(j) + ") at representative " +
                               std::to_string(zp)));
                }
            }
        }
    }
}

void criterion_9() {
    // subspace enumeration against the one-term counts
    for (int q : {2, 3})
        for (int n = 0; n <= 5; ++n) {
            auto all = enumerate_all_subspaces(q, n);
            std::map<int, long> by_dim;
            for (const auto& V : all) ++by_dim[V.dim()];
            for (int k = 0; k <= n; ++k)
                expect(Int(by_dim[k]) == gaussian_binomial(n, k, q),
                       "subspace count at q=" + std::to_string(q) + " n=" +
                           std::to_string(n) + " k=" + std::to_string(k));
        }

    // complements of Z inside F: the count, and the translate multiset
    for (auto [q, n] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}}) {
        auto all = enumerate_all_subspaces(q, n);
        for (const auto& Fs : all) {
            if (Fs.dim() < 1) continue;
            for (const auto& Z : all) {
                if (!contains(Fs, Z) || Z.dim() == Fs.dim()) continue;
                int f = Fs.dim(), z = Z.dim();
                auto comps = complements(Z, Fs);
                expect(Int((long)comps.size()) == int_pow(q, (f - z) * z),
                       "complement count at q=" + std::to_string(q));
                for (const auto& V : all) {
                    if (!contains(Z, V)) continue;
                    int v = V.dim();
                    std::map<Subspace, long> hits;
                    for (const auto& W : comps) ++hits[sum(V, W)];
                    expect(Int((long)hits.size()) == int_pow(q, (f - z) * (z - v)),
                           "translate count at q=" + std::to_string(q));
                    for (const auto& [space, mult] : hits) {
                        expect(space.dim() == v + f - z, "translate dimension");
                        expect(Int(mult) == int_pow(q, (f - z) * v), "translate multiplicity");
                    }
                }
            }
        }
    }

    // extensions across a coordinate split follow the two q-binomial laws
    for (int q : {2, 3})
        for (auto [n1, n2] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
            int n = n1 + n2;
            auto all = enumerate_all_subspaces(q, n);
            Subspace E2 = embed_window(full_space(q, n2), n1, n);
            for (const auto& V1 : enumerate_all_subspaces(q, n1)) {
                int k1 = V1.dim();
                for (int j = 0; j <= n; ++j) {
                    long count = 0;
                    for (const auto& V : all)
                        if (V.dim() == j && window(V, 0, n1) == V1) ++count;
                    expect(Int(count) == gaussian_binomial(n2, j - k1, q) *
                                             int_pow(q, k1 * (n2 - j + k1)),
                           "projection fiber count at q=" + std::to_string(q));
                }
            }
            for (const auto& V2 : enumerate_all_subspaces(q, n2)) {
                int k2 = V2.dim();
                Subspace V2e = embed_window(V2, n1, n);
                for (int j = 0; j <= n1; ++j) {
                    long count = 0;
                    for (const auto& V : all)
                        if (intersect(V, E2) == V2e && window(V, 0, n1).dim() == j) ++count;
                    expect(Int(count) == gaussian_binomial(n1, j, q) *
                                             int_pow(q, j * (n2 - k2)),
                           "slice fiber count at q=" + std::to_string(q));
                }
            }
        }

    // closure fibers over a flat scale the fibers over its core
    for (const auto& M : {uniform_matroid(2, 4), uniform_matroid(2, 3, 3),
                          sample_represented()}) {
        int q = M.q();
        auto all = enumerate_all_subspaces(q, M.n());
        for (const auto& z : M.cyclic_flats()) {
            const Subspace& Z = z.space;
            std::map<int, long> base;
            for (const auto& V : all)
                if (M.closure(V) == Z) ++base[V.dim()];
            for (const auto& F : M.flats()) {
                if (!(M.cyclic_core(F) == Z)) continue;
                std::map<int, long> fiber;
                for (const auto& T : all)
                    if (M.closure(T) == F) ++fiber[T.dim()];
                int fd = F.dim(), zd = Z.dim();
                for (int v = 0; v <= zd; ++v)
                    expect(Int(fiber[v + fd - zd]) ==
                               int_pow(q, (fd - zd) * (zd - v)) * base[v],
                           "closure fiber size over a flat");
            }
        }
    }

    // free and trivial summands: rank identities and flat characterizations
    for (int q : {2, 3})
        for (int n2 : {1, 2}) {
            QMatroid M1 = uniform_matroid(1, 2, q);
            int n1 = M1.n(), n = n1 + n2;
            auto all = enumerate_all_subspaces(q, n);
            Subspace E2 = embed_window(full_space(q, n2), n1, n);

            QMatroid Mf = direct_sum(M1, uniform_matroid(n2, n2, q));
            for (const auto& V : all) {
                Subspace V1 = intersect(V, embed_window(full_space(q, n1), 0, n));
                int p2 = window(V, n1, n2).dim();
                expect(V.dim() == V1.dim() + p2, "free summand dimension split");
                expect(Mf.rank(V) == M1.rank(window(V1, 0, n1)) + p2,
                       "free summand rank identity");
            }
            std::set<Subspace> want_f, got_f;
            std::set<Subspace> flats1(M1.flats().begin(), M1.flats().end());
            for (const auto& V : all) {
                Subspace V1 = window(intersect(V, embed_window(full_space(q, n1), 0, n)), 0, n1);
                if (flats1.count(V1)) want_f.insert(V);
            }
            for (const auto& F : Mf.flats()) got_f.insert(F);
            expect(got_f == want_f, "free summand flats");

            QMatroid Mt = direct_sum(M1, uniform_matroid(0, n2, q));
            for (const auto& V : all)
                expect(Mt.rank(V) == M1.rank(window(V, 0, n1)),
                       "trivial summand rank identity");
            std::set<Subspace> want_t, got_t;
            for (const auto& F1 : M1.flats())
                want_t.insert(sum(embed_window(F1, 0, n), E2));
            for (const auto& F : Mt.flats()) got_t.insert(F);
            expect(got_t == want_t, "trivial summand flats");
        }

    // flats and opens of restrictions and contractions are the filtered sets
    for (const auto& M : {uniform_matroid(2, 4), uniform_matroid(2, 3, 3),
                          sample_represented()}) {
        auto flats = M.flats();
        auto opens = M.opens();
        for (const auto& Fh : flats) {
            QMatroid Mr = M.restrict(Fh);
            std::set<Subspace> want, got;
            for (const auto& F : flats)
                if (contains(Fh, F)) want.insert(in_coordinates(F, Fh));
            for (const auto& F : Mr.flats()) got.insert(F);
            expect(got == want, "restriction flats filter down");

            QMatroid Mc = M.contract(Fh);
            want.clear();
            got.clear();
            for (const auto& F : flats)
                if (contains(F, Fh)) want.insert(in_quotient_coordinates(F, Fh));
            for (const auto& F : Mc.flats()) got.insert(F);
            expect(got == want, "contraction flats lift up");
        }
        for (const auto& Oh : opens) {
            QMatroid Mr = M.restrict(Oh);
            std::set<Subspace> want, got;
            for (const auto& O : opens)
                if (contains(Oh, O)) want.insert(in_coordinates(O, Oh));
            for (const auto& O : Mr.opens()) got.insert(O);
            expect(got == want, "restriction opens filter down");

            QMatroid Mc = M.contract(Oh);
            want.clear();
            got.clear();
            for (const auto& O : opens)
                if (contains(O, Oh)) want.insert(in_quotient_coordinates(O, Oh));
            for (const auto& O : Mc.opens()) got.insert(O);
            expect(got == want, "contraction opens lift up");
        }
        for (const auto& z : M.cyclic_flats()) {
            QMatroid Mc = M.contract(z.space);
            Subspace zero_c = zero_space(M.q(), M.n() - z.space.dim());
            bool zero_cyclic = false;
            for (const auto& zc : Mc.cyclic_flats())
                if (zc.space == zero_c) zero_cyclic = true;
            expect(zero_cyclic, "zero is a cyclic flat of the contraction");
            std::set<Subspace> want, got;
            for (const auto& F : M.flats())
                if (M.cyclic_core(F) == z.space) want.insert(in_quotient_coordinates(F, z.space));
            for (const auto& F : Mc.flats())
                if (Mc.cyclic_core(F) == zero_c) got.insert(F);
            expect(got == want, "core fiber transports through contraction");
        }
    }

    // direct-sum rank against the defining minimization
    auto brute = [](const QMatroid& a, const QMatroid& b, const Subspace& V,
                    const std::vector<Subspace>& all) {
        int best = 1 << 20;
        for (const auto& X : all) {
            if (!contains(V, X)) continue;
            int cand = a.rank(window(X, 0, a.n())) + b.rank(window(X, a.n(), b.n())) - X.dim();
            best = std::min(best, cand);
        }
        return V.dim() + best;
    };
    std::vector<std::pair<QMatroid, QMatroid>> sums2 = {
        {uniform_matroid(1, 1), uniform_matroid(1, 2)},
        {uniform_matroid(1, 2), uniform_matroid(2, 3)},
        {uniform_matroid(2, 2), uniform_matroid(0, 3)},
        {uniform_matroid(1, 3), uniform_matroid(1, 2)},
    };
    std::vector<std::pair<QMatroid, QMatroid>> sums3 = {
        {uniform_matroid(1, 1, 3), uniform_matroid(1, 2, 3)},
        {uniform_matroid(1, 2, 3), uniform_matroid(1, 2, 3)},
    };
    for (const auto* group : {&sums2, &sums3})
        for (const auto& [a, b] : *group) {
            QMatroid S = direct_sum(a, b);
            auto all = enumerate_all_subspaces(S.q(), S.n());
            for (const auto& V : all)
                expect(S.rank(V) == brute(a, b, V, all), "direct-sum rank minimization");
        }
}

void criterion_10() {
    for (const auto& fx : fixtures()) {
        const QMatroid& M = fx.M;
        auto tag = [&](const std::string& what) { return fx.name + ": " + what; };
        BivariatePoly R = whitney(M);

        std::map<std::pair<int, int>, Int> config_count;
        for (const auto& z : M.cyclic_flats())
            ++config_count[{M.max_rank() - z.rank, z.space.dim() - z.rank}];
        for (const auto& t : extremal_terms(R))
            expect(t.count == config_count[{t.corank, t.nullity}],
                   tag("extremal count at (" + std::to_string(t.corank) + "," +
                       std::to_string(t.nullity) + ")"));

        // the dual coefficient matrix is the transpose, aligned at (0,0)
        BivariatePoly RD = whitney(M.dual());
        int dx = std::max(R.deg_x(), RD.deg_y());
        int dy = std::max(R.deg_y(), RD.deg_x());
        for (int i = 0; i <= dx; ++i)
            for (int j = 0; j <= dy; ++j)
                expect(R.coeff(i, j) == RD.coeff(j, i),
                       tag("transposed matrix entry (" + std::to_string(i) + "," +
                           std::to_string(j) + ")"));
    }
}

void criterion_11() {
    auto closed_form = [](int n1, int n2, int q) {
        BivariatePoly out;
        for (int a = 0; a <= n1; ++a)
            for (int b = 0; b <= n2; ++b)
                out.add_to(a, b,
                           gaussian_binomial(n1, a, q) * gaussian_binomial(n2, b, q) *
                               int_pow(q, (n1 - a) * (n2 - b)));
        return out;
    };
    auto run = [&](int n1, int n2, int q) {
        QMatroid M = (n1 == 0)   ? uniform_matroid(0, n2, q)
                     : (n2 == 0) ? uniform_matroid(n1, n1, q)
                                 : direct_sum(uniform_matroid(n1, n1, q),
                                              uniform_matroid(0, n2, q));
        BivariatePoly closed = closed_form(n1, n2, q);
        std::string where = " at n1=" + std::to_string(n1) + " n2=" + std::to_string(n2) +
                            " q=" + std::to_string(q);
        expect(whitney(M) == closed, "closed form against enumeration" + where);
        expect(free_summand_whitney(uniform_whitney(0, n2, q), n1, q) == closed,
               "free summand transform" + where);
        expect(trivial_summand_whitney(uniform_whitney(n1, n1, q), n2, q) == closed,
               "trivial summand transform" + where);
    };
    for (int n1 = 0; n1 <= 6; ++n1)
        for (int n2 = 0; n1 + n2 <= 6; ++n2) {
            if (n1 + n2 == 0) continue;
            run(n1, n2, 2);
            if (n1 + n2 <= 4) run(n1, n2, 3);
        }
}

}  // namespace

// Runs every criterion by default; numeric arguments select a subset.
int main(int argc, char** argv) {
    struct Entry {
        int num;
        double budget_s;  // 0 means unbudgeted
        void (*fn)();
    };
    std::vector<Entry> plan = {
        {1, 5.0, criterion_1},  {2, 0.0, criterion_2},  {3, 0.0, criterion_3},
        {4, 10.0, criterion_4}, {5, 0.0, criterion_5},  {6, 60.0, criterion_6},
        {7, 120.0, criterion_7}, {8, 0.0, criterion_8}, {9, 0.0, criterion_9},
        {10, 0.0, criterion_10}, {11, 0.0, criterion_11},
    };
    std::set<int> chosen;
    for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& e : plan) {
        if (!chosen.empty() && !chosen.count(e.num)) continue;
        auto t0 = std::chrono::steady_clock::now();
        std::string fail;
        try {
            e.fn();
        } catch (const Failure& f) {
            fail = f.msg;
        } catch (const std::exception& ex) {
            fail = std::string("unexpected error: ") + ex.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (fail.empty() && e.budget_s > 0 && dt > e.budget_s) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "took %.1fs, budget %.0fs", dt, e.budget_s);
            fail = buf;
        }
        if (fail.empty()) {
            std::printf("criterion %d: PASS (%.1fs)\n", e.num, dt);
        } else {
            std::printf("criterion %d: FAIL (%s)\n", e.num, fail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
