// Labeled lattices: the cyclic-flat lattice of a q-matroid, its
// corank-nullity configuration, the cloud-flock lattice, and the recursion
// that recovers the cloud-flock labels from the configuration alone.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/invariants.hpp>
#include <qmat/poly.hpp>
#include <qmat/qmatroid.hpp>
#include <qmat/subspace.hpp>

namespace qmat {

struct CorankNullity {
    int corank = 0;
    int nullity = 0;

    bool operator==(const CorankNullity& o) const {
        return corank == o.corank && nullity == o.nullity;
    }
    bool operator!=(const CorankNullity& o) const { return !(*this == o); }
};

struct CloudFlockPair {
    BivariatePoly cloud;  // polynomial in x
    BivariatePoly flock;  // polynomial in y

    bool operator==(const CloudFlockPair& o) const {
        return cloud == o.cloud && flock == o.flock;
    }
    bool operator!=(const CloudFlockPair& o) const { return !(*this == o); }
};

// Finite lattice over node ids 0..size-1 with one label per node. The full
// reflexive order relation is stored; meet and join tables are derived on
// construction and every pair must have a unique greatest lower and least
// upper bound.
template <typename Label>
class LabeledLattice {
public:
    LabeledLattice(std::vector<Label> labels, std::vector<std::vector<char>> le)
        : labels_(std::move(labels)), le_(std::move(le)) {
        int n = (int)labels_.size();
        if (n == 0) throw LatticeError("a lattice needs at least one node");
        if ((int)le_.size() != n)
            throw LatticeError("order relation does not match the node count");
        for (const auto& row : le_)
            if ((int)row.size() != n)
                throw LatticeError("order relation does not match the node count");
        for (int i = 0; i < n; ++i)
            if (!le_[i][i]) throw LatticeError("the order relation is not reflexive");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i != j && le_[i][j] && le_[j][i])
                    throw LatticeError("the order relation is not antisymmetric");
                if (!le_[i][j]) continue;
                for (int k = 0; k < n; ++k)
                    if (le_[j][k] && !le_[i][k])
                        throw LatticeError("the order relation is not transitive");
            }
        meet_.assign(n, std::vector<int>(n, -1));
        join_.assign(n, std::vector<int>(n, -1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                meet_[i][j] = bound(i, j, true);
                join_[i][j] = bound(i, j, false);
            }
        check_axioms();
        bottom_ = 0;
        top_ = 0;
        for (int i = 1; i < n; ++i) {
            bottom_ = meet_[bottom_][i];
            top_ = join_[top_][i];
        }
    }

    int size() const { return (int)labels_.size(); }
    bool le(int i, int j) const { return le_[i][j]; }
    int meet(int i, int j) const { return meet_[i][j]; }
    int join(int i, int j) const { return join_[i][j]; }
    int bottom() const { return bottom_; }
    int top() const { return top_; }
    const Label& label(int i) const { return labels_[i]; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<std::vector<char>>& relation() const { return le_; }

    bool covers(int i, int j) const {
        if (i == j || !le_[i][j]) return false;
        for (int k = 0; k < size(); ++k)
            if (k != i && k != j && le_[i][k] && le_[k][j]) return false;
        return true;
    }

    // Hasse edges as (lower, upper) pairs.
    std::vector<std::pair<int, int>> cover_edges() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j)
                if (covers(i, j)) out.push_back({i, j});
        return out;
    }

    template <typename L2>
    LabeledLattice<L2> with_labels(std::vector<L2> labels) const {
        return LabeledLattice<L2>(std::move(labels), le_);
    }

    bool operator==(const LabeledLattice& o) const {
        return labels_ == o.labels_ && le_ == o.le_;
    }

private:
    // Unique greatest lower (lower=true) or least upper bound of {i, j}.
    int bound(int i, int j, bool lower) const {
        int n = size(), best = -1;
        for (int k = 0; k < n; ++k) {
            bool under = lower ? (le_[k][i] && le_[k][j]) : (le_[i][k] && le_[j][k]);
            if (!under) continue;
            if (best == -1 || (lower ? le_[best][k] : le_[k][best])) best = k;
        }
        if (best == -1)
            throw LatticeError(lower ? "two nodes have no common lower bound"
                                     : "two nodes have no common upper bound");
        for (int k = 0; k < n; ++k) {
            bool under = lower ? (le_[k][i] && le_[k][j]) : (le_[i][k] && le_[j][k]);
            bool dominated = lower ? le_[k][best] : le_[best][k];
            if (under && !dominated)
                throw LatticeError(lower ? "two nodes have no unique meet"
                                         : "two nodes have no unique join");
        }
        return best;
    }

    void check_axioms() const {
        int n = size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (meet_[i][j] != meet_[j][i] || join_[i][j] != join_[j][i])
                    throw LatticeError("meet or join is not commutative");
                if (meet_[i][join_[i][j]] != i || join_[i][meet_[i][j]] != i)
                    throw LatticeError("meet and join do not absorb");
                for (int k = 0; k < n; ++k) {
                    if (meet_[meet_[i][j]][k] != meet_[i][meet_[j][k]])
                        throw LatticeError("meet is not associative");
                    if (join_[join_[i][j]][k] != join_[i][join_[j][k]])
                        throw LatticeError("join is not associative");
                }
            }
    }

    std::vector<Label> labels_;
    std::vector<std::vector<char>> le_;
    std::vector<std::vector<int>> meet_, join_;
    int bottom_ = 0, top_ = 0;
};

using SubspaceLattice = LabeledLattice<Subspace>;
using ConfigLattice = LabeledLattice<CorankNullity>;
using CFLattice = LabeledLattice<CloudFlockPair>;

namespace detail {

// Cyclic flats in canonical subspace order; the node indexing shared by the
// subspace, configuration, and cloud-flock lattices of the same q-matroid.
inline std::vector<CyclicFlat> sorted_cyclic_flats(const QMatroid& M) {
    auto zs = M.cyclic_flats();
    std::sort(zs.begin(), zs.end(),
              [](const CyclicFlat& a, const CyclicFlat& b) { return a.space < b.space; });
    return zs;
}

inline std::vector<std::vector<char>> containment_relation(const std::vector<CyclicFlat>& zs) {
    int n = (int)zs.size();
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) le[i][j] = contains(zs[j].space, zs[i].space);
    return le;
}

}  // namespace detail

inline SubspaceLattice cyclic_flat_lattice(const QMatroid& M) {
    auto zs = detail::sorted_cyclic_flats(M);
    std::vector<Subspace> labels;
    for (const auto& z : zs) labels.push_back(z.space);
    SubspaceLattice L(labels, detail::containment_relation(zs));
    // the order-theoretic meet and join must agree with cyc of the
    // intersection and cl of the sum
    for (int i = 0; i < L.size(); ++i)
        for (int j = 0; j < L.size(); ++j) {
            if (!(L.label(L.meet(i, j)) == M.cyclic_core(intersect(labels[i], labels[j]))))
                throw LatticeError("meet differs from the core of the intersection");
            if (!(L.label(L.join(i, j)) == M.closure(sum(labels[i], labels[j]))))
                throw LatticeError("join differs from the closure of the sum");
        }
    return L;
}

inline ConfigLattice config(const QMatroid& M) {
    auto zs = detail::sorted_cyclic_flats(M);
    std::vector<CorankNullity> labels;
    for (const auto& z : zs)
        labels.push_back({M.max_rank() - z.rank, z.space.dim() - z.rank});
    return ConfigLattice(labels, detail::containment_relation(zs));
}

inline CFLattice cf_lattice(const QMatroid& M) {
    auto zs = detail::sorted_cyclic_flats(M);
    std::vector<CloudFlockPair> labels;
    for (const auto& z : zs) labels.push_back({cloud(M, z.space), flock(M, z.space)});
    return CFLattice(labels, detail::containment_relation(zs));
}

namespace detail {

// Corank must strictly drop and nullity strictly grow along the order.
inline void check_config_labels(const ConfigLattice& C) {
    for (int i = 0; i < C.size(); ++i) {
        if (C.label(i).corank < 0 || C.label(i).nullity < 0)
            throw LabelError("corank-nullity labels must be non-negative");
        for (int j = 0; j < C.size(); ++j) {
            if (i == j || !C.le(i, j)) continue;
            if (C.label(i).corank <= C.label(j).corank ||
                C.label(i).nullity >= C.label(j).nullity)
                throw LabelError("corank-nullity labels do not respect the order");
        }
    }
}

// Cloud-flock labels of the full q-matroid carried by an interval of a
// configuration, resolved by recursion on the interval. Results are shared
// across overlapping intervals since labels enter only by differences, which
// uniform shifts of the labels cancel.
class CfSolver {
public:
    CfSolver(const ConfigLattice& C, int q) : C_(C), q_(q) {}

    const std::map<int, CloudFlockPair>& solve(int a, int b) {
        auto key = std::make_pair(a, b);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        std::vector<int> ids;
        for (int v = 0; v < C_.size(); ++v)
            if (C_.le(a, v) && C_.le(v, b)) ids.push_back(v);
        int rr = C_.label(a).corank - C_.label(b).corank;
        int nn = rr + C_.label(b).nullity - C_.label(a).nullity;

        std::map<int, CloudFlockPair> out;
        BivariatePoly one = BivariatePoly::constant(1);
        if (a == b) {
            out[a] = {one, one};
        } else {
            BivariatePoly rhat;
            for (int v : ids) {
                if (v == a || v == b) continue;
                CloudFlockPair p{solve(v, b).at(v).cloud, solve(a, v).at(v).flock};
                rhat += star_product(p.cloud, p.flock, q_);
                out[v] = std::move(p);
            }
            out[a] = {uniform_cloud(rr, nn, q_) - trunc_x(rhat), one};
            out[b] = {one, uniform_flock(rr, nn, q_) - trunc_y(rhat)};
        }
        return memo_[key] = std::move(out);
    }

private:
    const ConfigLattice& C_;
    int q_;
    std::map<std::pair<int, int>, std::map<int, CloudFlockPair>> memo_;
};

}  // namespace detail

// Recovers the cloud-flock labels from the corank-nullity labels alone. The
// bottom label carries the rank and the trivial part, the top label carries
// the free part; the interior is resolved by the interval recursion and the
// free and trivial summand transforms are applied last.
inline CFLattice cf_from_config(const ConfigLattice& C, int q) {
    detail::check_config_labels(C);
    int bot = C.bottom(), top = C.top();
    int n_trivial = C.label(bot).nullity;
    int n_free = C.label(top).corank;
    int rho = C.label(bot).corank;
    int n = rho + C.label(top).nullity;
    int n_full = n - n_free - n_trivial;
    int rho_full = rho - n_free;

    detail::CfSolver solver(C, q);
    const auto& full = solver.solve(bot, top);

    std::vector<CloudFlockPair> labels;
    for (int v = 0; v < C.size(); ++v) {
        const CloudFlockPair& p = full.at(v);
        int rank_z = rho_full - (C.label(v).corank - n_free);
        int dim_z = rank_z + C.label(v).nullity - n_trivial;
        labels.push_back(
            {free_summand_cloud(p.cloud, n_full, n_free, rank_z, dim_z, q),
             trivial_summand_flock(p.flock, n_trivial, rank_z, q)});
    }
    return C.with_labels(std::move(labels));
}

// Whitney function as the star-product block sum of the cloud-flock labels.
inline BivariatePoly whitney_from_cf(const CFLattice& CF, int q) {
    BivariatePoly out;
    for (int i = 0; i < CF.size(); ++i)
        out += star_product(CF.label(i).cloud, CF.label(i).flock, q);
    return out;
}

inline ConfigLattice config_dual(const ConfigLattice& C) {
    int n = C.size();
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) le[i][j] = C.le(j, i);
    std::vector<CorankNullity> labels;
    for (int i = 0; i < n; ++i) labels.push_back({C.label(i).nullity, C.label(i).corank});
    return ConfigLattice(std::move(labels), std::move(le));
}

inline CFLattice cf_dual(const CFLattice& CF, int q) {
    std::vector<CorankNullity> degrees;
    for (int i = 0; i < CF.size(); ++i)
        degrees.push_back({CF.label(i).cloud.deg_x(), CF.label(i).flock.deg_y()});
    return cf_from_config(config_dual(CF.with_labels(std::move(degrees))), q);
}

// Product lattice with componentwise label sums; node (i, j) gets id
// i * |C2| + j.
inline ConfigLattice config_direct_sum(const ConfigLattice& C1, const ConfigLattice& C2) {
    int n1 = C1.size(), n2 = C2.size();
    std::vector<CorankNullity> labels;
    std::vector<std::vector<char>> le(n1 * n2, std::vector<char>(n1 * n2, 0));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            labels.push_back({C1.label(i).corank + C2.label(j).corank,
                              C1.label(i).nullity + C2.label(j).nullity});
            for (int i2 = 0; i2 < n1; ++i2)
                for (int j2 = 0; j2 < n2; ++j2)
                    le[i * n2 + j][i2 * n2 + j2] = C1.le(i, i2) && C2.le(j, j2);
        }
    return ConfigLattice(std::move(labels), std::move(le));
}

inline std::string label_text(const Subspace& V) { return pretty(V); }

inline std::string label_text(const CorankNullity& l) {
    return "(" + std::to_string(l.corank) + "," + std::to_string(l.nullity) + ")";
}

inline std::string label_text(const CloudFlockPair& l) {
    return "(" + l.cloud.str() + ", " + l.flock.str() + ")";
}

template <typename Label>
std::string to_dot(const LabeledLattice<Label>& L, const std::string& name = "lattice") {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=box];\n";
    for (int i = 0; i < L.size(); ++i)
        os << "  n" << i << " [label=\"" << label_text(L.label(i)) << "\"];\n";
    for (auto [lo, hi] : L.cover_edges()) os << "  n" << lo << " -> n" << hi << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace qmat
