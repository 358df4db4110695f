#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>

#include <qmat/gfq.hpp>

namespace qmat {

// Reduce bitmask rows (coordinate i = bit i) to RREF in place; returns the rank.
// Rows [0, rank) end up sorted by pivot position, the rest are zero.
inline int rref_bits(uint32_t* r, int nrows) {
    int rank = 0;
    for (int col = 0; col < 32 && rank < nrows; ++col) {
        uint32_t bit = 1u << col;
        int piv = -1;
        for (int i = rank; i < nrows; ++i)
            if (r[i] & bit) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(r[rank], r[piv]);
        for (int i = 0; i < nrows; ++i)
            if (i != rank && (r[i] & bit)) r[i] ^= r[rank];
        ++rank;
    }
    return rank;
}

// Small dense byte matrix over F_q. Capacity suffices for stacked bases and
// the doubled-width intersection scheme at the ambient dimensions supported.
struct DenseMat {
    static constexpr int kCap = 32;
    int rows = 0, cols = 0;
    uint8_t a[kCap][kCap] = {};

    uint8_t* operator[](int i) { return a[i]; }
    const uint8_t* operator[](int i) const { return a[i]; }
};

inline int rref(DenseMat& M, const PrimeField& F) {
    int rank = 0;
    for (int col = 0; col < M.cols && rank < M.rows; ++col) {
        int piv = -1;
        for (int i = rank; i < M.rows; ++i)
            if (M[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < M.cols; ++j) std::swap(M[rank][j], M[piv][j]);
        int s = F.inv(M[rank][col]);
        if (s != 1)
            for (int j = 0; j < M.cols; ++j) M[rank][j] = (uint8_t)F.mul(M[rank][j], s);
        for (int i = 0; i < M.rows; ++i) {
            if (i == rank || M[i][col] == 0) continue;
            int c = M[i][col];
            for (int j = 0; j < M.cols; ++j)
                M[i][j] = (uint8_t)F.sub(M[i][j], F.mul(c, M[rank][j]));
        }
        ++rank;
    }
    return rank;
}

// Null-space basis of an RREF matrix (rank rows assumed reduced), canonicalized.
inline DenseMat kernel_basis(const DenseMat& M, int rank, const PrimeField& F) {
    bool is_pivot[DenseMat::kCap] = {};
    int pivot_row[DenseMat::kCap] = {};
    for (int i = 0, col = 0; i < rank; ++i) {
        while (M[i][col] == 0) ++col;
        is_pivot[col] = true;
        pivot_row[col] = i;
        ++col;
    }
    DenseMat K;
    K.cols = M.cols;
    for (int f = 0; f < M.cols; ++f) {
        if (is_pivot[f]) continue;
        uint8_t* v = K[K.rows++];
        v[f] = 1;
        for (int c = 0; c < f; ++c)
            if (is_pivot[c]) v[c] = (uint8_t)F.neg(M[pivot_row[c]][f]);
    }
    rref(K, F);
    return K;
}

}  // namespace qmat
