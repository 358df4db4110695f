// Condensations of the cyclic-flat lattice: blocks of cyclic flats sharing a
// corank-nullity pair and a containment count, the condensed configuration
// (Gamma, Lambda), and the block recursion that recovers the Whitney
// function from it.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/invariants.hpp>
#include <qmat/lattice.hpp>
#include <qmat/poly.hpp>

namespace qmat {

struct Condensation {
    std::vector<std::vector<int>> blocks;  // node ids per block
    std::vector<std::vector<long>> gamma;  // gamma[i][j] = |{Z in B_i : Z <= Z'}|, Z' in B_j
    std::vector<CorankNullity> lambda;     // shared corank-nullity pair per block
};

// Witness for a failed condensation test: the offending blocks and nodes.
struct CondensationCheck {
    bool ok = true;
    std::string reason;
    int block = -1, other_block = -1;
    int node = -1, other_node = -1;
};

inline CondensationCheck is_condensation(const ConfigLattice& L,
                                         const std::vector<std::vector<int>>& blocks) {
    auto fail = [](std::string reason, int b, int b2, int z, int z2) {
        return CondensationCheck{false, std::move(reason), b, b2, z, z2};
    };

    std::vector<int> owner(L.size(), -1);
    for (int b = 0; b < (int)blocks.size(); ++b) {
        if (blocks[b].empty()) return fail("a block is empty", b, -1, -1, -1);
        for (int z : blocks[b]) {
            if (z < 0 || z >= L.size())
                return fail("a block member is not a node of the lattice", b, -1, z, -1);
            if (owner[z] != -1)
                return fail("the blocks do not partition the node set", b, owner[z], z, z);
            owner[z] = b;
        }
    }
    for (int z = 0; z < L.size(); ++z)
        if (owner[z] == -1)
            return fail("the blocks do not partition the node set", -1, -1, z, -1);

    for (int b = 0; b < (int)blocks.size(); ++b)
        for (int z : blocks[b])
            if (L.label(z) != L.label(blocks[b][0]))
                return fail("a block mixes corank-nullity pairs", b, b, blocks[b][0], z);

    for (int b = 0; b < (int)blocks.size(); ++b)
        for (int b2 = 0; b2 < (int)blocks.size(); ++b2) {
            long want = -1;
            for (int zp : blocks[b2]) {
                long count = 0;
                for (int z : blocks[b]) count += L.le(z, zp) ? 1 : 0;
                if (want == -1) want = count;
                if (count != want)
                    return fail("containment counts differ inside a block", b, b2,
                                blocks[b2][0], zp);
            }
        }

    // the positivity order on blocks must be a poset; transitivity follows
    // from the counting property, antisymmetry does not
    auto below = [&](int b, int b2) {
        for (int z : blocks[b])
            if (L.le(z, blocks[b2][0])) return true;
        return false;
    };
    for (int b = 0; b < (int)blocks.size(); ++b)
        for (int b2 = b + 1; b2 < (int)blocks.size(); ++b2)
            if (below(b, b2) && below(b2, b))
                return fail("the block order is not antisymmetric", b, b2, blocks[b][0],
                            blocks[b2][0]);
    return {};
}

namespace detail {

// Deterministic block order: bottom first (corank descending, nullity
// ascending), ties by least node id.
inline void sort_blocks(std::vector<std::vector<int>>& blocks, const ConfigLattice& L) {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(), [&](const auto& a, const auto& b) {
        const auto &la = L.label(a[0]), &lb = L.label(b[0]);
        if (la.corank != lb.corank) return la.corank > lb.corank;
        if (la.nullity != lb.nullity) return la.nullity < lb.nullity;
        return a[0] < b[0];
    });
}

}  // namespace detail

inline Condensation condensed_config(const ConfigLattice& L,
                                     std::vector<std::vector<int>> blocks) {
    detail::sort_blocks(blocks, L);
    CondensationCheck check = is_condensation(L, blocks);
    if (!check.ok) throw CondensationError(check.reason);

    Condensation out;
    out.blocks = std::move(blocks);
    int t = (int)out.blocks.size();
    out.gamma.assign(t, std::vector<long>(t, 0));
    for (int i = 0; i < t; ++i) {
        out.lambda.push_back(L.label(out.blocks[i][0]));
        for (int j = 0; j < t; ++j)
            for (int z : out.blocks[i])
                out.gamma[i][j] += L.le(z, out.blocks[j][0]) ? 1 : 0;
    }
    return out;
}

// Partition refinement from the corank-nullity classes: split any block
// whose members disagree on how many elements of some block they contain.
// The fixed point is the coarsest condensation.
inline Condensation coarsest_condensation(const ConfigLattice& L) {
    std::map<std::pair<int, int>, std::vector<int>> by_label;
    for (int z = 0; z < L.size(); ++z)
        by_label[{L.label(z).corank, L.label(z).nullity}].push_back(z);
    std::vector<std::vector<int>> blocks;
    for (auto& [label, ids] : by_label) blocks.push_back(std::move(ids));

    for (bool changed = true; changed;) {
        changed = false;
        for (size_t b = 0; b < blocks.size() && !changed; ++b)
            for (size_t b2 = 0; b2 < blocks.size() && !changed; ++b2) {
                std::map<long, std::vector<int>> split;
                for (int zp : blocks[b2]) {
                    long count = 0;
                    for (int z : blocks[b]) count += L.le(z, zp) ? 1 : 0;
                    split[count].push_back(zp);
                }
                if (split.size() <= 1) continue;
                blocks.erase(blocks.begin() + b2);
                for (auto& [count, ids] : split) blocks.push_back(std::move(ids));
                changed = true;
            }
    }
    return condensed_config(L, std::move(blocks));
}

struct CFRecursionState {
    std::vector<int> representative;            // least node id per block
    std::vector<std::vector<BivariatePoly>> c;  // c[i][j], polynomial in x
    std::vector<std::vector<BivariatePoly>> f;  // f[i][j], polynomial in y
    std::vector<std::vector<BivariatePoly>> S;  // interior double sums
};

namespace detail {

template <typename OrderFault>
void check_condensed(const Condensation& cc) {
    int t = (int)cc.gamma.size();
    if (t == 0) throw CondensationError("a condensed configuration needs a block");
    if ((int)cc.lambda.size() != t)
        throw CondensationError("gamma and lambda sizes disagree");
    for (const auto& row : cc.gamma)
        if ((int)row.size() != t) throw CondensationError("gamma is not square");
    if (!cc.blocks.empty() && (int)cc.blocks.size() != t)
        throw CondensationError("blocks and gamma sizes disagree");
    for (int i = 0; i < t; ++i) {
        if (cc.gamma[i][i] != 1)
            throw CondensationError("gamma must be one on the diagonal");
        for (int j = 0; j < t; ++j) {
            if (cc.gamma[i][j] < 0) throw CondensationError("gamma must be non-negative");
            if (i == j || cc.gamma[i][j] == 0) continue;
            if (cc.gamma[j][i] > 0)
                throw OrderFault("the block order is not antisymmetric");
            for (int k = 0; k < t; ++k)
                if (cc.gamma[j][k] > 0 && cc.gamma[i][k] == 0)
                    throw OrderFault("the block order is not transitive");
            int r = cc.lambda[i].corank - cc.lambda[j].corank;
            int s = r + cc.lambda[j].nullity - cc.lambda[i].nullity;
            if (r < 1 || s - r < 1)
                throw CondensationError("block labels do not respect the order");
        }
    }
}

}  // namespace detail

// Runs the block recursion over the interval poset of the condensation:
// length-one intervals scale the uniform cloud and flock, longer intervals
// subtract the truncated interior sum.
inline CFRecursionState cf_recursion(const Condensation& cc, int q) {
    detail::check_condensed<OrderError>(cc);
    int t = (int)cc.gamma.size();

    CFRecursionState st;
    for (int b = 0; b < t; ++b)
        st.representative.push_back(
            cc.blocks.empty() ? b : *std::min_element(cc.blocks[b].begin(), cc.blocks[b].end()));
    st.c.assign(t, std::vector<BivariatePoly>(t));
    st.f.assign(t, std::vector<BivariatePoly>(t));
    st.S.assign(t, std::vector<BivariatePoly>(t));

    auto le = [&](int i, int j) { return cc.gamma[i][j] > 0; };
    std::vector<std::pair<int, std::pair<int, int>>> pairs;
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            if (!le(i, j)) continue;
            int len = 0;
            for (int d = 0; d < t; ++d) len += le(i, d) && le(d, j) ? 1 : 0;
            pairs.push_back({len, {i, j}});
        }
    std::sort(pairs.begin(), pairs.end());

    BivariatePoly one = BivariatePoly::constant(1);
    for (const auto& [len, ij] : pairs) {
        auto [i, j] = ij;
        if (i == j) {
            st.c[i][j] = one;
            st.f[i][j] = one;
            continue;
        }
        for (int d = 0; d < t; ++d) {
            if (d == i || d == j || !le(i, d) || !le(d, j)) continue;
            st.S[i][j] += star_product(st.c[d][j], st.f[i][d], q);
        }
        int r = cc.lambda[i].corank - cc.lambda[j].corank;
        int s = r + cc.lambda[j].nullity - cc.lambda[i].nullity;
        st.c[i][j] = uniform_cloud(r, s, q).scaled(cc.gamma[i][j]) - trunc_x(st.S[i][j]);
        st.f[i][j] = uniform_flock(r, s, q).scaled(cc.gamma[i][j]) - trunc_y(st.S[i][j]);
    }
    return st;
}

// Whitney function from a condensed configuration alone: block sum of the
// recursion over the full part, then the trivial and free transforms read
// off the extreme block labels.
inline BivariatePoly whitney_from_condensed(const Condensation& cc, int q) {
    detail::check_condensed<CondensationError>(cc);
    int t = (int)cc.gamma.size();
    int bot = -1, top = -1;
    for (int b = 0; b < t; ++b) {
        bool is_bot = true, is_top = true;
        for (int b2 = 0; b2 < t; ++b2) {
            is_bot = is_bot && cc.gamma[b][b2] > 0;
            is_top = is_top && cc.gamma[b2][b] > 0;
        }
        if (is_bot) bot = b;
        if (is_top) top = b;
    }
    if (bot < 0 || top < 0)
        throw CondensationError("the block order has no least or no greatest block");

    CFRecursionState st = cf_recursion(cc, q);
    BivariatePoly full;
    for (int b = 0; b < t; ++b) full += star_product(st.c[b][top], st.f[bot][b], q);

    int n_trivial = cc.lambda[bot].nullity;
    int n_free = cc.lambda[top].corank;
    return free_summand_whitney(trivial_summand_whitney(full, n_trivial, q), n_free, q);
}

inline std::string to_dot(const Condensation& cc, const std::string& name = "condensation") {
    int t = (int)cc.gamma.size();
    auto le = [&](int i, int j) { return cc.gamma[i][j] > 0; };
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=box];\n";
    for (int b = 0; b < t; ++b) {
        os << "  b" << b << " [label=\"B" << b << " " << label_text(cc.lambda[b]) << " {";
        for (size_t k = 0; b < (int)cc.blocks.size() && k < cc.blocks[b].size(); ++k)
            os << (k ? "," : "") << cc.blocks[b][k];
        os << "}\"];\n";
    }
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            if (i == j || !le(i, j)) continue;
            bool cover = true;
            for (int d = 0; d < t; ++d)
                if (d != i && d != j && le(i, d) && le(d, j)) cover = false;
            if (cover) os << "  b" << i << " -> b" << j << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace qmat
