#pragma once

#include <string>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/gaussian.hpp>
#include <qmat/poly.hpp>
#include <qmat/qmatroid.hpp>
#include <qmat/subspace.hpp>

namespace qmat {

// Corank-nullity generating function: every subspace V contributes
// x^(top - rank V) y^(dim V - rank V).
inline BivariatePoly whitney(const QMatroid& M) {
    const Materialized& mv = M.materialized();
    BivariatePoly out;
    for (int id = 0; id < mv.table->size(); ++id)
        out.add_to(mv.corank(id), mv.nullity(id), 1);
    return out;
}

// The same data as a dense (top+1) x (n-top+1) matrix of counts.
inline std::vector<std::vector<Int>> whitney_counts(const QMatroid& M) {
    return whitney(M).grid();
}

inline BivariatePoly char_poly(const QMatroid& M) {
    BivariatePoly w = whitney(M);
    int top = w.deg_x();
    BivariatePoly out;
    for (int i = 0; i <= w.deg_x(); ++i)
        for (int j = 0; j <= w.deg_y(); ++j) {
            const Int& nu = w.coeff(i, j);
            if (nu == 0) continue;
            int d = top - i + j;  // dimension of the counted spaces
            Int term = nu * int_pow(M.q(), d * (d - 1) / 2);
            out.add_to(i, 0, (d % 2) ? Int(-term) : term);
        }
    return out;
}

namespace detail {

inline int cyclic_flat_id(const Materialized& mv, const Subspace& Z) {
    int zid = mv.table->id_of(Z);
    if (!mv.flat_mask()[zid] || !mv.is_open(zid))
        throw NotCyclicFlatError(pretty(Z) + " is not a cyclic flat");
    return zid;
}

}  // namespace detail

// Flats whose deficient-hyperplane intersection is Z, weighted by corank.
inline BivariatePoly cloud(const QMatroid& M, const Subspace& Z) {
    const Materialized& mv = M.materialized();
    int zid = detail::cyclic_flat_id(mv, Z);
    int target = mv.nullity(zid);
    const auto& flat = mv.flat_mask();
    BivariatePoly out;
    for (int id = 0; id < mv.table->size(); ++id) {
        if (!flat[id] || mv.nullity(id) != target) continue;
        if (!contains(mv.table->space(id), Z)) continue;
        out.add_to(mv.corank(id), 0, 1);
    }
    return out;
}

// Subspaces of Z of full rank, weighted by nullity.
inline BivariatePoly flock(const QMatroid& M, const Subspace& Z) {
    const Materialized& mv = M.materialized();
    int zid = detail::cyclic_flat_id(mv, Z);
    int r = mv.rank[zid];
    BivariatePoly out;
    if (Z.dim() == M.n()) {
        for (int id = 0; id < mv.table->size(); ++id)
            if (mv.rank[id] == r) out.add_to(0, mv.dim(id) - r, 1);
        return out;
    }
    for (const auto& W : enumerate_all_subspaces(M.q(), Z.dim())) {
        Subspace V = from_coordinates(W, Z);
        int vid = mv.table->id_of(V);
        if (mv.rank[vid] == r) out.add_to(0, V.dim() - r, 1);
    }
    return out;
}

// All spaces whose deficient-hyperplane intersection is Z, weighted by corank.
inline BivariatePoly supercloud(const QMatroid& M, const Subspace& Z) {
    const Materialized& mv = M.materialized();
    int zid = detail::cyclic_flat_id(mv, Z);
    const auto& core = mv.core_ids();
    BivariatePoly out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (core[id] == zid) out.add_to(mv.corank(id), 0, 1);
    return out;
}

// Open spaces whose closure is Z, weighted by nullity.
inline BivariatePoly subflock(const QMatroid& M, const Subspace& Z) {
    const Materialized& mv = M.materialized();
    int zid = detail::cyclic_flat_id(mv, Z);
    const auto& open = mv.open_mask();
    const auto& cl = mv.closure_ids();
    BivariatePoly out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (open[id] && cl[id] == zid) out.add_to(0, mv.nullity(id), 1);
    return out;
}

// Rebuild the corank-nullity polynomial from the cloud-flock table.
inline BivariatePoly whitney_from_cf(const QMatroid& M) {
    BivariatePoly out;
    for (const auto& z : M.cyclic_flats())
        out += star_product(cloud(M, z.space), flock(M, z.space), M.q());
    return out;
}

// Closed forms for the uniform geometry.
inline BivariatePoly uniform_whitney(int k, int n, int q) {
    if (k < 0 || k > n) throw RangeError("uniform rank must lie in [0, n]");
    BivariatePoly out;
    for (int j = 0; j <= k; ++j) out.add_to(k - j, 0, gaussian_binomial(n, j, q));
    for (int j = k + 1; j <= n; ++j) out.add_to(0, j - k, gaussian_binomial(n, j, q));
    return out;
}

inline BivariatePoly uniform_cloud(int k, int n, int q) {
    if (k < 0 || k > n) throw RangeError("uniform rank must lie in [0, n]");
    BivariatePoly out;
    if (k == n) out.add_to(0, 0, 1);
    for (int j = 0; j < k; ++j) out.add_to(k - j, 0, gaussian_binomial(n, j, q));
    return out;
}

inline BivariatePoly uniform_flock(int k, int n, int q) {
    if (k < 0 || k > n) throw RangeError("uniform rank must lie in [0, n]");
    BivariatePoly out;
    for (int j = k; j <= n; ++j) out.add_to(0, j - k, gaussian_binomial(n, j, q));
    return out;
}

// Positions that are simultaneously last in their row and last in their
// column of the coefficient matrix.
struct ExtremalTerm {
    int corank = 0;
    int nullity = 0;
    Int count;
};

inline std::vector<ExtremalTerm> extremal_terms(const BivariatePoly& w) {
    if (w.is_zero()) throw NotWhitneyError("the zero polynomial counts nothing");
    for (int i = 0; i <= w.deg_x(); ++i)
        for (int j = 0; j <= w.deg_y(); ++j)
            if (w.coeff(i, j) < 0)
                throw NotWhitneyError("negative coefficient at x^" + std::to_string(i) + "y^" +
                                      std::to_string(j));
    if (w.coeff(w.deg_x(), 0) != 1 || w.coeff(0, w.deg_y()) != 1)
        throw NotWhitneyError("corner coefficients must count one space each");
    std::vector<int> row_last(w.deg_x() + 1, -1), col_last(w.deg_y() + 1, -1);
    for (int i = 0; i <= w.deg_x(); ++i)
        for (int j = 0; j <= w.deg_y(); ++j)
            if (w.coeff(i, j) != 0) {
                row_last[i] = std::max(row_last[i], j);
                col_last[j] = std::max(col_last[j], i);
            }
    std::vector<ExtremalTerm> out;
    for (int i = w.deg_x(); i >= 0; --i) {
        int j = row_last[i];
        if (j >= 0 && col_last[j] == i) out.push_back({i, j, w.coeff(i, j)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// closed-form transforms for a free or trivial summand
//
// The matroid gains n2 fresh directions that are everywhere independent
// (free) or everywhere dependent (trivial); each invariant of the extended
// matroid is a q-binomial convolution of the original one.

namespace detail {

inline void require_x_only(const BivariatePoly& p, const char* what) {
    if (p.deg_y() > 0) throw ShapeError(std::string(what) + " must be a polynomial in x only");
}

inline void require_y_only(const BivariatePoly& p, const char* what) {
    if (p.deg_x() > 0) throw ShapeError(std::string(what) + " must be a polynomial in y only");
}

}  // namespace detail

inline BivariatePoly free_summand_flock(const BivariatePoly& f1) {
    detail::require_y_only(f1, "a flock");
    return f1;
}

inline BivariatePoly trivial_summand_cloud(const BivariatePoly& c1) {
    detail::require_x_only(c1, "a cloud");
    return c1;
}

inline BivariatePoly free_summand_cloud(const BivariatePoly& c1, int n1, int n2, int rank_z,
                                        int dim_z, int q) {
    detail::require_x_only(c1, "a cloud");
    if (n2 < 0 || rank_z < 0 || dim_z < rank_z || n1 < dim_z)
        throw RangeError("inconsistent summand parameters");
    int top = c1.deg_x() + rank_z;
    BivariatePoly out;
    for (int t = rank_z; t <= top + n2; ++t) {
        Int acc = 0;
        for (int j = rank_z; j <= std::min(t, top); ++j) {
            const Int& bj = c1.coeff(top - j, 0);
            if (bj == 0 || t - j > n2) continue;
            acc += bj * gaussian_binomial(n2, t - j, q) *
                   int_pow(q, (t - j) * (n1 - j - dim_z + rank_z));
        }
        if (acc != 0) out.add_to(top + n2 - t, 0, acc);
    }
    return out;
}

inline BivariatePoly trivial_summand_flock(const BivariatePoly& f1, int n2, int rank_z, int q) {
    detail::require_y_only(f1, "a flock");
    if (n2 < 0 || rank_z < 0) throw RangeError("inconsistent summand parameters");
    int dim_z = f1.deg_y() + rank_z;
    BivariatePoly out;
    for (int j = rank_z; j <= dim_z + n2; ++j) {
        Int acc = 0;
        for (int t = rank_z; t <= std::min(j, dim_z); ++t) {
            const Int& bt = f1.coeff(0, t - rank_z);
            if (bt == 0 || j - t > n2) continue;
            acc += bt * gaussian_binomial(n2, j - t, q) *
                   int_pow(q, t * (n2 - j + t));
        }
        if (acc != 0) out.add_to(0, j - rank_z, acc);
    }
    return out;
}

inline BivariatePoly free_summand_whitney(const BivariatePoly& r1, int n2, int q) {
    if (n2 < 0) throw RangeError("inconsistent summand parameters");
    int top = r1.deg_x(), eta = r1.deg_y();
    BivariatePoly out;
    for (int l = 0; l <= top; ++l)
        for (int b = 0; b <= eta; ++b) {
            const Int& nu = r1.coeff(l, b);
            if (nu == 0) continue;
            for (int a = l; a <= std::min(top + n2, l + n2); ++a) {
                Int term = nu * gaussian_binomial(n2, a - l, q) *
                           int_pow(q, (l - a + n2) * (eta - b + l));
                out.add_to(a, b, term);
            }
        }
    return out;
}

inline BivariatePoly trivial_summand_whitney(const BivariatePoly& r1, int n2, int q) {
    if (n2 < 0) throw RangeError("inconsistent summand parameters");
    int top = r1.deg_x(), eta = r1.deg_y();
    BivariatePoly out;
    for (int a = 0; a <= top; ++a)
        for (int j = 0; j <= eta; ++j) {
            const Int& nu = r1.coeff(a, j);
            if (nu == 0) continue;
            for (int b = j; b <= std::min(eta + n2, j + n2); ++b) {
                Int term = nu * gaussian_binomial(n2, b - j, q) *
                           int_pow(q, (top - a + j) * (n2 - b + j));
                out.add_to(a, b, term);
            }
        }
    return out;
}

}  // namespace qmat
