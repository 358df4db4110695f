#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/gaussian.hpp>
#include <qmat/linalg.hpp>

namespace qmat {

// A subspace of F_q^n held by its unique RREF basis (pivot columns strictly
// increasing, pivots 1, zeros above and below pivots, no zero rows).
// Two values are equal iff their bases are identical.
struct Subspace {
    int q = 2;
    int n = 0;
    std::vector<std::vector<uint8_t>> rows;

    int dim() const { return (int)rows.size(); }
    bool is_zero() const { return rows.empty(); }
    bool operator==(const Subspace& o) const { return q == o.q && n == o.n && rows == o.rows; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    bool operator<(const Subspace& o) const {
        if (dim() != o.dim()) return dim() < o.dim();
        return rows < o.rows;
    }
};

namespace detail {

inline void require_same_ambient(const Subspace& V, const Subspace& W) {
    if (V.q != W.q || V.n != W.n)
        throw ShapeError("ambient spaces differ: F_" + std::to_string(V.q) + "^" + std::to_string(V.n) +
                         " vs F_" + std::to_string(W.q) + "^" + std::to_string(W.n));
}

inline DenseMat to_mat(const Subspace& V) {
    DenseMat M;
    M.rows = V.dim();
    M.cols = V.n;
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < V.n; ++j) M[i][j] = V.rows[i][j];
    return M;
}

inline Subspace from_mat(int q, int n, const DenseMat& M, int rank) {
    Subspace S;
    S.q = q;
    S.n = n;
    S.rows.resize(rank);
    for (int i = 0; i < rank; ++i) S.rows[i].assign(M[i], M[i] + n);
    return S;
}

}  // namespace detail

inline Subspace canonicalize(int q, int n, const std::vector<std::vector<uint8_t>>& rows) {
    if (n < 0 || n > 16) throw RangeError("ambient dimension must be in [0, 16]");
    if ((int)rows.size() > DenseMat::kCap) throw ShapeError("too many generator rows");
    DenseMat M;
    M.rows = (int)rows.size();
    M.cols = n;
    for (size_t i = 0; i < rows.size(); ++i) {
        if ((int)rows[i].size() != n)
            throw ShapeError("row " + std::to_string(i) + " has length " +
                             std::to_string(rows[i].size()) + ", ambient is " + std::to_string(n));
        for (int j = 0; j < n; ++j) {
            if (rows[i][j] >= q) throw RangeError("entry out of F_q range");
            M[(int)i][j] = rows[i][j];
        }
    }
    PrimeField F(q);
    int rank = rref(M, F);
    return detail::from_mat(q, n, M, rank);
}

inline Subspace zero_space(int q, int n) { return canonicalize(q, n, {}); }

inline Subspace full_space(int q, int n) {
    std::vector<std::vector<uint8_t>> rows(n, std::vector<uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) rows[i][i] = 1;
    return canonicalize(q, n, rows);
}

inline Subspace unit_vector_space(int q, int n, const std::vector<int>& coords) {
    std::vector<std::vector<uint8_t>> rows;
    for (int c : coords) {
        if (c < 0 || c >= n) throw RangeError("unit vector index out of range");
        std::vector<uint8_t> r(n, 0);
        r[c] = 1;
        rows.push_back(r);
    }
    return canonicalize(q, n, rows);
}

inline Subspace sum(const Subspace& V, const Subspace& W) {
    detail::require_same_ambient(V, W);
    DenseMat M;
    M.rows = V.dim() + W.dim();
    M.cols = V.n;
    for (int i = 0; i < V.dim(); ++i)
        for (int j = 0; j < V.n; ++j) M[i][j] = V.rows[i][j];
    for (int i = 0; i < W.dim(); ++i)
        for (int j = 0; j < V.n; ++j) M[V.dim() + i][j] = W.rows[i][j];
    PrimeField F(V.q);
    int rank = rref(M, F);
    return detail::from_mat(V.q, V.n, M, rank);
}

// Intersection via the doubled-width scheme: reduce [V | V; W | 0] and read the
// right halves of the rows whose left half vanished.
inline Subspace intersect(const Subspace& V, const Subspace& W) {
    detail::require_same_ambient(V, W);
    int n = V.n;
    DenseMat M;
    M.rows = V.dim() + W.dim();
    M.cols = 2 * n;
    for (int i = 0; i < V.dim(); ++i)
        for (int j = 0; j < n; ++j) M[i][j] = M[i][n + j] = V.rows[i][j];
    for (int i = 0; i < W.dim(); ++i)
        for (int j = 0; j < n; ++j) M[V.dim() + i][j] = W.rows[i][j];
    PrimeField F(V.q);
    int rank = rref(M, F);
    std::vector<std::vector<uint8_t>> rows;
    for (int i = 0; i < rank; ++i) {
        bool left_zero = true;
        for (int j = 0; j < n && left_zero; ++j) left_zero = M[i][j] == 0;
        if (left_zero) rows.emplace_back(M[i] + n, M[i] + 2 * n);
    }
    return canonicalize(V.q, n, rows);
}

// True iff W <= V.
inline bool contains(const Subspace& V, const Subspace& W) {
    detail::require_same_ambient(V, W);
    if (W.dim() > V.dim()) return false;
    PrimeField F(V.q);
    std::vector<int> pivot(V.dim());
    for (int i = 0; i < V.dim(); ++i) {
        int c = 0;
        while (V.rows[i][c] == 0) ++c;
        pivot[i] = c;
    }
    for (const auto& w : W.rows) {
        std::vector<uint8_t> r = w;
        for (int i = 0; i < V.dim(); ++i) {
            int c = r[pivot[i]];
            if (c == 0) continue;
            for (int j = 0; j < V.n; ++j) r[j] = (uint8_t)F.sub(r[j], F.mul(c, V.rows[i][j]));
        }
        for (int j = 0; j < V.n; ++j)
            if (r[j] != 0) return false;
    }
    return true;
}

// Orthogonal complement w.r.t. the standard dot product.
inline Subspace perp(const Subspace& V) {
    DenseMat M = detail::to_mat(V);
    PrimeField F(V.q);
    DenseMat K = kernel_basis(M, V.dim(), F);
    return detail::from_mat(V.q, V.n, K, K.rows);
}

// All codimension-1 subspaces of V: kernels of the (q^d-1)/(q-1) normalized
// functionals on the row space.
inline std::vector<Subspace> hyperplanes(const Subspace& V) {
    int d = V.dim();
    if (d == 0) throw EmptyError("the zero space has no hyperplanes");
    PrimeField F(V.q);
    std::vector<Subspace> out;
    std::vector<int> a(d, 0);
    while (true) {
        int i = 0;
        while (i < d && a[i] == V.q - 1) a[i++] = 0;
        if (i == d) break;
        ++a[i];
        int lead = 0;
        while (a[lead] == 0) ++lead;
        if (a[lead] != 1) continue;  // one functional per scalar class
        std::vector<std::vector<uint8_t>> rows;
        for (int t = 0; t < d; ++t) {
            if (t == lead) continue;
            if (a[t] == 0) {
                rows.push_back(V.rows[t]);
            } else {
                std::vector<uint8_t> r(V.n);
                for (int j = 0; j < V.n; ++j)
                    r[j] = (uint8_t)F.sub(V.rows[t][j], F.mul(a[t], V.rows[lead][j]));
                rows.push_back(std::move(r));
            }
        }
        out.push_back(canonicalize(V.q, V.n, rows));
    }
    return out;
}

// Coordinates of W with respect to the row basis of X. The coordinate rows of
// a canonical W are again canonical. Throws ContainmentError when W is not
// inside X.
inline Subspace in_coordinates(const Subspace& W, const Subspace& X) {
    detail::require_same_ambient(W, X);
    PrimeField F(W.q);
    int f = X.dim(), z = W.dim();
    std::vector<int> xpivot(f);
    for (int i = 0; i < f; ++i) {
        int c = 0;
        while (X.rows[i][c] == 0) ++c;
        xpivot[i] = c;
    }
    Subspace C;
    C.q = W.q;
    C.n = f;
    C.rows.assign(z, std::vector<uint8_t>(f, 0));
    for (int i = 0; i < z; ++i) {
        for (int t = 0; t < f; ++t) C.rows[i][t] = W.rows[i][xpivot[t]];
        std::vector<uint8_t> rec(X.n, 0);
        for (int t = 0; t < f; ++t)
            for (int j = 0; j < X.n; ++j)
                rec[j] = (uint8_t)F.add(rec[j], F.mul(C.rows[i][t], X.rows[t][j]));
        if (rec != W.rows[i]) throw ContainmentError("subspace is not contained in the frame");
    }
    return C;
}

// Rows of W (living in F_q^dim(X)) mapped through the basis of X.
inline Subspace from_coordinates(const Subspace& W, const Subspace& X) {
    if (W.q != X.q || W.n != X.dim())
        throw ShapeError("coordinate rows do not match the frame dimension");
    PrimeField F(W.q);
    std::vector<std::vector<uint8_t>> rows(W.dim(), std::vector<uint8_t>(X.n, 0));
    for (int i = 0; i < W.dim(); ++i)
        for (int t = 0; t < W.n; ++t)
            for (int j = 0; j < X.n; ++j)
                rows[i][j] = (uint8_t)F.add(rows[i][j], F.mul(W.rows[i][t], X.rows[t][j]));
    return canonicalize(X.q, X.n, rows);
}

// Image of W in the quotient by X, written in the coordinates given by the
// non-pivot columns of X. Requires X <= W.
inline Subspace in_quotient_coordinates(const Subspace& W, const Subspace& X) {
    detail::require_same_ambient(W, X);
    if (!contains(W, X)) throw ContainmentError("the space must contain the quotient kernel");
    bool pivot[16] = {};
    for (const auto& row : X.rows) {
        int c = 0;
        while (row[c] == 0) ++c;
        pivot[c] = true;
    }
    std::vector<int> free_cols;
    for (int j = 0; j < W.n; ++j)
        if (!pivot[j]) free_cols.push_back(j);
    Subspace S = intersect(W, unit_vector_space(W.q, W.n, free_cols));
    std::vector<std::vector<uint8_t>> rows;
    for (const auto& r : S.rows) {
        std::vector<uint8_t> out(free_cols.size());
        for (size_t t = 0; t < free_cols.size(); ++t) out[t] = r[free_cols[t]];
        rows.push_back(std::move(out));
    }
    return canonicalize(W.q, (int)free_cols.size(), rows);
}

// Preimage of a quotient-coordinate space: X plus the rows lifted into the
// non-pivot columns of X.
inline Subspace from_quotient_coordinates(const Subspace& W, const Subspace& X) {
    bool pivot[16] = {};
    for (const auto& row : X.rows) {
        int c = 0;
        while (row[c] == 0) ++c;
        pivot[c] = true;
    }
    std::vector<int> free_cols;
    for (int j = 0; j < X.n; ++j)
        if (!pivot[j]) free_cols.push_back(j);
    if (W.q != X.q || W.n != (int)free_cols.size())
        throw ShapeError("coordinate rows do not match the quotient dimension");
    std::vector<std::vector<uint8_t>> rows = X.rows;
    for (const auto& r : W.rows) {
        std::vector<uint8_t> out(X.n, 0);
        for (size_t t = 0; t < free_cols.size(); ++t) out[free_cols[t]] = r[t];
        rows.push_back(std::move(out));
    }
    return canonicalize(X.q, X.n, rows);
}

// All W <= F with Z (+) W = F; exactly q^((f-z)z) of them.
inline std::vector<Subspace> complements(const Subspace& Z, const Subspace& F_space) {
    detail::require_same_ambient(Z, F_space);
    PrimeField F(Z.q);
    int f = F_space.dim(), z = Z.dim();
    Subspace ZC = in_coordinates(Z, F_space);

    std::vector<int> piv, fre;
    for (int i = 0, col = 0; col < f; ++col) {
        if (i < z && ZC.rows[i][col] != 0) {
            piv.push_back(col);
            ++i;
        } else {
            fre.push_back(col);
        }
    }
    int nfree = (int)fre.size();  // = f - z

    // Complements are graphs of linear maps from the fixed complement
    // span{F.rows[fre[t]]} into Z: shift each basis row by any element of Z.
    std::vector<Subspace> out;
    std::vector<int> lam(nfree * z, 0);
    while (true) {
        std::vector<std::vector<uint8_t>> rows;
        for (int t = 0; t < nfree; ++t) {
            std::vector<uint8_t> r = F_space.rows[fre[t]];
            for (int i = 0; i < z; ++i) {
                int lv = lam[t * z + i];
                if (lv == 0) continue;
                for (int j = 0; j < F_space.n; ++j)
                    r[j] = (uint8_t)F.add(r[j], F.mul(lv, Z.rows[i][j]));
            }
            rows.push_back(std::move(r));
        }
        out.push_back(canonicalize(Z.q, Z.n, rows));
        int i = 0;
        while (i < nfree * z && lam[i] == Z.q - 1) lam[i++] = 0;
        if (i == nfree * z) break;
        ++lam[i];
    }
    return out;
}

// Packed canonical key: basis rows folded as base-q^n digits, row 0 least
// significant. Injective on RREF bases (rows are nonzero).
using SpaceKey = unsigned __int128;

struct SpaceKeyHash {
    size_t operator()(SpaceKey k) const {
        uint64_t lo = (uint64_t)k, hi = (uint64_t)(k >> 64);
        return std::hash<uint64_t>()(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

inline uint32_t pack_row(const std::vector<uint8_t>& row, int q) {
    uint32_t v = 0;
    for (int j = (int)row.size() - 1; j >= 0; --j) v = v * q + row[j];
    return v;
}

inline SpaceKey key_of(const Subspace& V) {
    if (std::log2((double)V.q) * V.n * V.dim() > 126.0)
        throw ScaleError("subspace too large to pack into a 128-bit key");
    SpaceKey base = 1;
    for (int j = 0; j < V.n; ++j) base *= (unsigned)V.q;
    SpaceKey k = 0;
    for (int i = V.dim() - 1; i >= 0; --i) k = k * base + pack_row(V.rows[i], V.q);
    return k;
}

inline Subspace space_from_key(int q, int n, SpaceKey k) {
    SpaceKey base = 1;
    for (int j = 0; j < n; ++j) base *= (unsigned)q;
    std::vector<std::vector<uint8_t>> rows;
    while (k != 0) {
        uint32_t rv = (uint32_t)(k % base);
        k /= base;
        std::vector<uint8_t> row(n);
        for (int j = 0; j < n; ++j, rv /= q) row[j] = (uint8_t)(rv % q);
        rows.push_back(std::move(row));
    }
    Subspace S;
    S.q = q;
    S.n = n;
    S.rows = std::move(rows);  // already canonical by construction of the key
    return S;
}

// Every k-dimensional subspace exactly once, via pivot profiles and free entries.
inline std::vector<Subspace> enumerate_subspaces(int q, int n, int k) {
    if (k < 0 || k > n) throw RangeError("dimension out of range");
    std::vector<Subspace> out;
    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
        bool is_piv[16] = {};
        for (int i = 0; i < k; ++i) is_piv[piv[i]] = true;
        std::vector<std::pair<int, int>> free_pos;
        for (int i = 0; i < k; ++i)
            for (int j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free_pos.emplace_back(i, j);

        std::vector<std::vector<uint8_t>> rows(k, std::vector<uint8_t>(n, 0));
        for (int i = 0; i < k; ++i) rows[i][piv[i]] = 1;
        std::vector<int> v(free_pos.size(), 0);
        while (true) {
            Subspace S;
            S.q = q;
            S.n = n;
            S.rows = rows;
            out.push_back(std::move(S));
            size_t i = 0;
            while (i < v.size() && v[i] == q - 1) {
                v[i] = 0;
                rows[free_pos[i].first][free_pos[i].second] = 0;
                ++i;
            }
            if (i == v.size()) break;
            ++v[i];
            rows[free_pos[i].first][free_pos[i].second] = (uint8_t)v[i];
        }

        // next pivot combination in lexicographic order
        int i = k - 1;
        while (i >= 0 && piv[i] == n - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    return out;
}

inline std::vector<Subspace> enumerate_all_subspaces(int q, int n) {
    std::vector<Subspace> out;
    for (int k = 0; k <= n; ++k) {
        auto part = enumerate_subspaces(q, n, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// Renders a basis as <e1+e2, e3> etc.; the zero space prints as <0>.
inline std::string pretty(const Subspace& V) {
    if (V.is_zero()) return "<0>";
    std::string s = "<";
    for (int i = 0; i < V.dim(); ++i) {
        if (i) s += ", ";
        bool first = true;
        for (int j = 0; j < V.n; ++j) {
            int c = V.rows[i][j];
            if (c == 0) continue;
            if (!first) s += "+";
            if (c != 1) s += std::to_string(c);
            s += "e" + std::to_string(j + 1);
            first = false;
        }
    }
    return s + ">";
}

}  // namespace qmat
