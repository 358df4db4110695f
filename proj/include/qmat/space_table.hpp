#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/gaussian.hpp>
#include <qmat/linalg.hpp>
#include <qmat/subspace.hpp>

namespace qmat {

// Row-echelon working basis on stack arrays. Rows keep ascending pivots and
// leading coefficient 1; upper elimination is deferred to canonical_key().
struct Basis {
    int q = 2, n = 0, d = 0;
    uint8_t rows[17][16] = {};
    uint8_t piv[17] = {};

    static Basis of(const Subspace& V) {
        Basis b;
        b.q = V.q;
        b.n = V.n;
        b.d = V.dim();
        for (int i = 0; i < b.d; ++i) {
            for (int j = 0; j < V.n; ++j) b.rows[i][j] = V.rows[i][j];
            int c = 0;
            while (V.rows[i][c] == 0) ++c;
            b.piv[i] = (uint8_t)c;
        }
        return b;
    }

    static Basis of_key(int q, int n, SpaceKey k) {
        Basis b;
        b.q = q;
        b.n = n;
        SpaceKey base = 1;
        for (int j = 0; j < n; ++j) base *= (unsigned)q;
        while (k != 0) {
            uint32_t rv = (uint32_t)(k % base);
            k /= base;
            int i = b.d++;
            for (int j = 0; j < n; ++j, rv /= q) b.rows[i][j] = (uint8_t)(rv % q);
            int c = 0;
            while (b.rows[i][c] == 0) ++c;
            b.piv[i] = (uint8_t)c;
        }
        return b;
    }

    // Reduces x in place against the basis; returns the leading column of the
    // residue (normalized to leading coefficient 1), or -1 if x is in the span.
    int reduce(uint8_t* x) const {
        for (int i = 0; i < d; ++i) {
            int c = x[piv[i]];
            if (c == 0) continue;
            int s = q - c;
            const uint8_t* r = rows[i];
            for (int j = piv[i]; j < n; ++j) x[j] = (uint8_t)((x[j] + s * r[j]) % q);
        }
        int lead = -1;
        for (int j = 0; j < n; ++j)
            if (x[j] != 0) {
                lead = j;
                break;
            }
        if (lead < 0) return -1;
        if (x[lead] != 1) {
            int inv = 1;
            for (int t = 1; t < q; ++t)
                if (t * x[lead] % q == 1) inv = t;
            for (int j = lead; j < n; ++j) x[j] = (uint8_t)(x[j] * inv % q);
        }
        return lead;
    }

    // Reduce-then-insert keeping echelon order; returns -1 if x was in the span.
    int insert(const uint8_t* x0) {
        uint8_t x[16] = {};
        for (int j = 0; j < n; ++j) x[j] = x0[j];
        int lead = reduce(x);
        if (lead < 0) return -1;
        int pos = d;
        while (pos > 0 && piv[pos - 1] > lead) --pos;
        for (int i = d; i > pos; --i) {
            std::memcpy(rows[i], rows[i - 1], sizeof(rows[i]));
            piv[i] = piv[i - 1];
        }
        std::memcpy(rows[pos], x, sizeof(x));
        piv[pos] = (uint8_t)lead;
        ++d;
        return lead;
    }

    // Upper-eliminates into reduced form, then packs the canonical key.
    SpaceKey canonical_key() {
        for (int i = 1; i < d; ++i)
            for (int r = 0; r < i; ++r) {
                int c = rows[r][piv[i]];
                if (c == 0) continue;
                int s = q - c;
                for (int j = piv[i]; j < n; ++j)
                    rows[r][j] = (uint8_t)((rows[r][j] + s * rows[i][j]) % q);
            }
        SpaceKey base = 1;
        for (int j = 0; j < n; ++j) base *= (unsigned)q;
        SpaceKey k = 0;
        for (int i = d - 1; i >= 0; --i) {
            uint32_t rv = 0;
            for (int j = n - 1; j >= 0; --j) rv = rv * q + rows[i][j];
            k = k * base + rv;
        }
        return k;
    }

    Subspace to_subspace() {
        canonical_key();
        Subspace S;
        S.q = q;
        S.n = n;
        S.rows.resize(d);
        for (int i = 0; i < d; ++i) S.rows[i].assign(rows[i], rows[i] + n);
        return S;
    }
};

// Full lattice of subspaces of F_q^n, indexed by the sorted canonical keys.
// Keys grow with dimension, so ids are dimension-major.
class SpaceTable {
   public:
    SpaceTable(int q, int n) : q_(q), n_(n) {
        PrimeField F(q);  // validates that q is prime
        if (n < 0 || n > 12) throw RangeError("ambient dimension out of table range");
        if (subspace_count(n, q) > Int(1) << 21)
            throw ScaleError("subspace lattice of F_" + std::to_string(q) + "^" +
                             std::to_string(n) + " is too large to materialize");
        enumerate_keys();
        std::sort(keys_.begin(), keys_.end());
        SpaceKey base = 1;
        for (int j = 0; j < n; ++j) base *= (unsigned)q;
        dims_.resize(keys_.size());
        for (size_t i = 0; i < keys_.size(); ++i) {
            int d = 0;
            for (SpaceKey k = keys_[i]; k != 0; k /= base) ++d;
            dims_[i] = (uint8_t)d;
        }
        for (const auto& L : enumerate_subspaces(q, n, std::min(1, n)))
            if (L.dim() == 1) lines_.push_back(L.rows[0]);
    }

    int q() const { return q_; }
    int n() const { return n_; }
    int size() const { return (int)keys_.size(); }

    SpaceKey key(int id) const { return keys_[id]; }
    int dim(int id) const { return dims_[id]; }
    Subspace space(int id) const { return space_from_key(q_, n_, keys_[id]); }
    Basis basis(int id) const { return Basis::of_key(q_, n_, keys_[id]); }

    int id_of_key(SpaceKey k) const {
        auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
        if (it == keys_.end() || *it != k) return -1;
        return (int)(it - keys_.begin());
    }

    int id_of(const Subspace& V) const {
        if (V.q != q_ || V.n != n_)
            throw ShapeError("subspace does not live in this ambient space");
        return id_of_key(key_of(V));
    }

    // Representatives of the 1-dimensional subspaces (leading coefficient 1).
    const std::vector<std::vector<uint8_t>>& lines() const { return lines_; }

    // id of V + <x>; reports whether x already lies in V.
    int extend(const Basis& V, const uint8_t* x, bool* inside = nullptr) const {
        Basis b = V;
        bool in = b.insert(x) < 0;
        if (inside) *inside = in;
        return id_of_key(b.canonical_key());
    }

    int sum_id(const Basis& V, const Basis& W) const {
        Basis b = V;
        for (int i = 0; i < W.d; ++i) b.insert(W.rows[i]);
        return id_of_key(b.canonical_key());
    }

    int perp_of(int id) const {
        if (perp_.empty()) {
            perp_.resize(keys_.size());
            PrimeField F(q_);
            for (int i = 0; i < (int)keys_.size(); ++i) {
                Subspace V = space(i);
                DenseMat M;
                M.rows = V.dim();
                M.cols = n_;
                for (int r = 0; r < M.rows; ++r)
                    for (int c = 0; c < n_; ++c) M[r][c] = V.rows[r][c];
                DenseMat K = kernel_basis(M, M.rows, F);
                Basis b;
                b.q = q_;
                b.n = n_;
                for (int r = 0; r < K.rows; ++r) b.insert(K[r]);
                perp_[i] = id_of_key(b.canonical_key());
            }
        }
        return perp_[id];
    }

   private:
    int q_, n_;
    std::vector<SpaceKey> keys_;
    std::vector<uint8_t> dims_;
    std::vector<std::vector<uint8_t>> lines_;
    mutable std::vector<int32_t> perp_;

    void enumerate_keys() {
        SpaceKey base = 1;
        for (int j = 0; j < n_; ++j) base *= (unsigned)q_;
        keys_.push_back(0);
        for (int k = 1; k <= n_; ++k) {
            std::vector<int> piv(k);
            for (int i = 0; i < k; ++i) piv[i] = i;
            while (true) {
                bool is_piv[16] = {};
                for (int i = 0; i < k; ++i) is_piv[piv[i]] = true;
                std::vector<std::pair<int, int>> free_pos;
                for (int i = 0; i < k; ++i)
                    for (int j = piv[i] + 1; j < n_; ++j)
                        if (!is_piv[j]) free_pos.emplace_back(i, j);

                uint8_t rows[12][16] = {};
                for (int i = 0; i < k; ++i) rows[i][piv[i]] = 1;
                std::vector<int> v(free_pos.size(), 0);
                while (true) {
                    SpaceKey key = 0;
                    for (int i = k - 1; i >= 0; --i) {
                        uint32_t rv = 0;
                        for (int j = n_ - 1; j >= 0; --j) rv = rv * q_ + rows[i][j];
                        key = key * base + rv;
                    }
                    keys_.push_back(key);
                    size_t t = 0;
                    while (t < v.size() && v[t] == q_ - 1) {
                        v[t] = 0;
                        rows[free_pos[t].first][free_pos[t].second] = 0;
                        ++t;
                    }
                    if (t == v.size()) break;
                    ++v[t];
                    rows[free_pos[t].first][free_pos[t].second] = (uint8_t)v[t];
                }

                int i = k - 1;
                while (i >= 0 && piv[i] == n_ - k + i) --i;
                if (i < 0) break;
                ++piv[i];
                for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
            }
        }
    }
};

inline std::shared_ptr<const SpaceTable> space_table(int q, int n) {
    static std::map<std::pair<int, int>, std::shared_ptr<const SpaceTable>> cache;
    auto key = std::make_pair(q, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const SpaceTable>(q, n);
    cache.emplace(key, t);
    return t;
}

}  // namespace qmat
