#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/gaussian.hpp>
#include <qmat/gfq.hpp>
#include <qmat/space_table.hpp>
#include <qmat/subspace.hpp>

namespace qmat {

struct CyclicFlat {
    Subspace space;
    int rank = 0;
};

class RankBackend {
   public:
    virtual ~RankBackend() = default;
    virtual int rank(const Subspace& V) const = 0;
    virtual std::string kind() const = 0;
};

// Bulk view of one matroid over the full subspace lattice.
class Materialized {
   public:
    std::shared_ptr<const SpaceTable> table;
    std::vector<int16_t> rank;
    int top = 0;

    int dim(int id) const { return table->dim(id); }
    int nullity(int id) const { return table->dim(id) - rank[id]; }
    int corank(int id) const { return top - rank[id]; }

    // Visits the ids of all hyperplanes of the space with the given id;
    // stops early when fn returns false.
    template <class Fn>
    void scan_hyperplanes(int id, Fn fn) const {
        Basis V = table->basis(id);
        int d = V.d, q = V.q, n = V.n;
        if (d == 0) return;
        std::vector<int> a(d, 0);
        while (true) {
            int i = 0;
            while (i < d && a[i] == q - 1) a[i++] = 0;
            if (i == d) break;
            ++a[i];
            int lead = 0;
            while (a[lead] == 0) ++lead;
            if (a[lead] != 1) continue;
            Basis H;
            H.q = q;
            H.n = n;
            for (int t = 0; t < d; ++t) {
                if (t == lead) continue;
                uint8_t row[16];
                int s = q - a[t];
                for (int j = 0; j < n; ++j)
                    row[j] = (uint8_t)((V.rows[t][j] + s * V.rows[lead][j]) % q);
                H.insert(row);
            }
            if (!fn(table->id_of_key(H.canonical_key()))) return;
        }
    }

    bool is_flat(int id) const {
        ensure_flats();
        return flat_[id] != 0;
    }

    // Open: no hyperplane drops the rank.
    bool is_open(int id) const {
        int r = rank[id];
        bool open = true;
        scan_hyperplanes(id, [&](int hid) {
            if (rank[hid] < r) {
                open = false;
                return false;
            }
            return true;
        });
        return open;
    }

    const std::vector<uint8_t>& flat_mask() const {
        ensure_flats();
        return flat_;
    }

    const std::vector<uint8_t>& open_mask() const {
        if (open_.empty()) {
            open_.resize(table->size());
            for (int id = 0; id < table->size(); ++id) open_[id] = is_open(id) ? 1 : 0;
        }
        return open_;
    }

    // id of the closure of every space
    const std::vector<int>& closure_ids() const {
        if (cl_.empty()) {
            cl_.resize(table->size());
            const auto& lines = table->lines();
            for (int id = 0; id < table->size(); ++id) {
                int r = rank[id];
                Basis base = table->basis(id);
                Basis acc = base;
                for (const auto& x : lines) {
                    bool inside = false;
                    int nid = table->extend(base, x.data(), &inside);
                    if (!inside && rank[nid] == r) acc.insert(x.data());
                }
                cl_[id] = table->id_of_key(acc.canonical_key());
            }
        }
        return cl_;
    }

    // id of the intersection of the rank-deficient hyperplanes of every space
    const std::vector<int>& core_ids() const {
        if (cyc_.empty()) {
            cyc_.resize(table->size());
            for (int id = 0; id < table->size(); ++id) {
                int r = rank[id];
                bool any = false;
                Subspace core;
                scan_hyperplanes(id, [&](int hid) {
                    if (rank[hid] < r) {
                        core = any ? intersect(core, table->space(hid)) : table->space(hid);
                        any = true;
                    }
                    return true;
                });
                cyc_[id] = any ? table->id_of(core) : id;
            }
        }
        return cyc_;
    }

   private:
    mutable std::vector<uint8_t> flat_;
    mutable std::vector<uint8_t> open_;
    mutable std::vector<int> cl_;
    mutable std::vector<int> cyc_;

    // Flat: every one-dimensional extension raises the rank.
    void ensure_flats() const {
        if (!flat_.empty()) return;
        flat_.assign(table->size(), 1);
        const auto& lines = table->lines();
        for (int id = 0; id < table->size(); ++id) {
            if (table->dim(id) == table->n()) continue;
            int r = rank[id];
            Basis V = table->basis(id);
            for (const auto& x : lines) {
                bool inside = false;
                int nid = table->extend(V, x.data(), &inside);
                if (!inside && rank[nid] == r) {
                    flat_[id] = 0;
                    break;
                }
            }
        }
    }
};

enum class ValidationMode { exhaustive, sampled };

struct FullDecomposition;

class QMatroid {
   public:
    QMatroid(int q, int n, std::shared_ptr<const RankBackend> backend)
        : q_(q), n_(n), b_(std::move(backend)), memo_(std::make_shared<Memo>()) {}

    int q() const { return q_; }
    int n() const { return n_; }
    std::string kind() const { return b_->kind(); }
    const RankBackend& backend() const { return *b_; }
    std::shared_ptr<const RankBackend> backend_ptr() const { return b_; }

    Subspace ambient() const { return full_space(q_, n_); }

    int rank(const Subspace& V) const {
        if (V.q != q_ || V.n != n_)
            throw ShapeError("subspace does not live in the matroid's ambient space");
        if (view_) return view_->rank[view_->table->id_of(V)];
        if (std::log2((double)q_) * n_ * V.dim() > 126.0) return b_->rank(V);
        SpaceKey k = key_of(V);
        auto it = memo_->m.find(k);
        if (it != memo_->m.end()) return it->second;
        int r = b_->rank(V);
        memo_->m.emplace(k, (int16_t)r);
        return r;
    }

    int max_rank() const {
        if (memo_->top < 0) memo_->top = rank(ambient());
        return memo_->top;
    }

    int nullity(const Subspace& V) const { return V.dim() - rank(V); }

    Subspace closure(const Subspace& V) const;
    Subspace cyclic_core(const Subspace& V) const;
    bool is_full() const;

    const Materialized& materialized() const;

    std::vector<Subspace> flats() const;
    std::vector<Subspace> opens() const;
    std::vector<CyclicFlat> cyclic_flats() const;
    std::vector<Subspace> independents() const;
    std::vector<Subspace> circuits() const;
    std::vector<Subspace> bases() const;
    std::vector<Subspace> spanning() const;

    void validate_rank_axioms(ValidationMode mode = ValidationMode::exhaustive,
                              uint64_t seed = 20240801, uint64_t samples = 1000000) const;

    QMatroid dual() const;
    QMatroid restrict(const Subspace& X) const;
    QMatroid contract(const Subspace& X) const;
    FullDecomposition full_decomposition() const;

   private:
    int q_, n_;
    std::shared_ptr<const RankBackend> b_;
    struct Memo {
        std::unordered_map<SpaceKey, int16_t, SpaceKeyHash> m;
        int top = -1;
    };
    std::shared_ptr<Memo> memo_;
    mutable std::shared_ptr<Materialized> view_;

    std::vector<std::vector<uint8_t>> line_reps() const {
        std::vector<std::vector<uint8_t>> lines;
        for (const auto& L : enumerate_subspaces(q_, n_, std::min(1, n_)))
            if (L.dim() == 1) lines.push_back(L.rows[0]);
        return lines;
    }
};

struct FullDecomposition {
    int n_trivial = 0;
    int n_free = 0;
    QMatroid core;
};

// ---------------------------------------------------------------------------
// backends

class UniformBackend : public RankBackend {
   public:
    int k;
    explicit UniformBackend(int k_) : k(k_) {}
    int rank(const Subspace& V) const override { return std::min(k, V.dim()); }
    std::string kind() const override { return "uniform"; }
};

class RepresentedBackend : public RankBackend {
   public:
    ExtFieldPtr field;
    std::vector<std::vector<uint32_t>> gen;  // rows of the generator over the extension
    int cols;
    std::vector<uint32_t> embed;  // prime subfield into the extension

    RepresentedBackend(ExtFieldPtr f, std::vector<std::vector<uint32_t>> g, int ncols)
        : field(std::move(f)), gen(std::move(g)), cols(ncols) {
        if (gen.size() > 16) throw ShapeError("too many generator rows");
        for (const auto& row : gen) {
            if (cols < 0) cols = (int)row.size();
            if ((int)row.size() != cols) throw ShapeError("ragged generator matrix");
            for (uint32_t v : row)
                if (v >= field->size) throw RangeError("generator entry outside the field");
        }
        if (cols < 0) throw ShapeError("empty generator needs an explicit column count");
        embed.resize(field->q);
        embed[0] = field->zero();
        for (int c = 1; c < field->q; ++c) embed[c] = field->add(embed[c - 1], field->one());
    }

    int rank(const Subspace& V) const override {
        int g = (int)gen.size(), d = V.dim();
        if (g == 0 || d == 0) return 0;
        uint32_t m[16][17];
        for (int r = 0; r < g; ++r)
            for (int c = 0; c < d; ++c) {
                uint32_t acc = 0;
                for (int j = 0; j < cols; ++j) {
                    int e = V.rows[c][j];
                    if (e == 0) continue;
                    acc = field->add(acc, field->mul(embed[e], gen[r][j]));
                }
                m[r][c] = acc;
            }
        int rk = 0;
        for (int c = 0; c < d && rk < g; ++c) {
            int p = -1;
            for (int r = rk; r < g; ++r)
                if (m[r][c] != 0) {
                    p = r;
                    break;
                }
            if (p < 0) continue;
            for (int j = c; j < d; ++j) std::swap(m[rk][j], m[p][j]);
            uint32_t inv = field->inv(m[rk][c]);
            for (int r = rk + 1; r < g; ++r) {
                if (m[r][c] == 0) continue;
                uint32_t factor = field->mul(m[r][c], inv);
                for (int j = c; j < d; ++j)
                    m[r][j] = field->sub(m[r][j], field->mul(factor, m[rk][j]));
            }
            ++rk;
        }
        return rk;
    }
    std::string kind() const override { return "represented"; }
};

class CyclicFlatsBackend : public RankBackend {
   public:
    std::vector<CyclicFlat> flats;
    std::vector<Basis> bases;

    explicit CyclicFlatsBackend(std::vector<CyclicFlat> zs) : flats(std::move(zs)) {
        for (const auto& z : flats) bases.push_back(Basis::of(z.space));
    }

    // rank(V) = min over the family of rank(Z) + dim(V + Z) - dim(Z)
    int rank(const Subspace& V) const override {
        int best = 1 << 20;
        for (size_t i = 0; i < flats.size(); ++i) {
            Basis b = bases[i];
            for (const auto& row : V.rows) b.insert(row.data());
            int cand = flats[i].rank + b.d - flats[i].space.dim();
            best = std::min(best, cand);
        }
        return best;
    }
    std::string kind() const override { return "cyclic_flats"; }
};

class TableBackend : public RankBackend {
   public:
    std::shared_ptr<const SpaceTable> table;
    std::vector<int16_t> ranks;

    TableBackend(std::shared_ptr<const SpaceTable> t, std::vector<int16_t> r)
        : table(std::move(t)), ranks(std::move(r)) {
        if ((int)ranks.size() != table->size())
            throw ShapeError("rank vector does not match the subspace count");
    }
    int rank(const Subspace& V) const override { return ranks[table->id_of(V)]; }
    std::string kind() const override { return "table"; }
};

class DualBackend : public RankBackend {
   public:
    QMatroid inner;
    explicit DualBackend(QMatroid m) : inner(std::move(m)) {}
    int rank(const Subspace& V) const override {
        return V.dim() + inner.rank(perp(V)) - inner.max_rank();
    }
    std::string kind() const override { return "dual"; }
};

class RestrictionBackend : public RankBackend {
   public:
    QMatroid inner;
    Subspace frame;
    RestrictionBackend(QMatroid m, Subspace x) : inner(std::move(m)), frame(std::move(x)) {}
    int rank(const Subspace& V) const override {
        return inner.rank(from_coordinates(V, frame));
    }
    std::string kind() const override { return "restriction"; }
};

class ContractionBackend : public RankBackend {
   public:
    QMatroid inner;
    Subspace by;
    std::vector<int> free_cols;  // non-pivot columns of the contracted space
    int base_rank;

    ContractionBackend(QMatroid m, Subspace x) : inner(std::move(m)), by(std::move(x)) {
        bool pivot[16] = {};
        for (const auto& row : by.rows) {
            int c = 0;
            while (row[c] == 0) ++c;
            pivot[c] = true;
        }
        for (int j = 0; j < inner.n(); ++j)
            if (!pivot[j]) free_cols.push_back(j);
        base_rank = inner.rank(by);
    }

    int rank(const Subspace& V) const override {
        Basis b = Basis::of(by);
        for (const auto& row : V.rows) {
            uint8_t lifted[16] = {};
            for (int t = 0; t < (int)free_cols.size(); ++t) lifted[free_cols[t]] = row[t];
            b.insert(lifted);
        }
        return inner.rank(b.to_subspace()) - base_rank;
    }
    std::string kind() const override { return "contraction"; }
};

class DirectSumBackend : public RankBackend {
   public:
    QMatroid left, right;
    struct SummandPair {
        Basis basis;
        int dim, rank_sum;
    };
    std::vector<SummandPair> pairs;

    DirectSumBackend(QMatroid l, QMatroid r) : left(std::move(l)), right(std::move(r)) {
        int n1 = left.n(), n2 = right.n(), n = n1 + n2, q = left.q();
        for (const auto& z1 : left.cyclic_flats())
            for (const auto& z2 : right.cyclic_flats()) {
                Basis b;
                b.q = q;
                b.n = n;
                for (const auto& row : z1.space.rows) {
                    uint8_t padded[16] = {};
                    std::copy(row.begin(), row.end(), padded);
                    b.insert(padded);
                }
                for (const auto& row : z2.space.rows) {
                    uint8_t padded[16] = {};
                    std::copy(row.begin(), row.end(), padded + n1);
                    b.insert(padded);
                }
                pairs.push_back({b, b.d, z1.rank + z2.rank});
            }
    }

    // rank(V) = dim V + min over pairs of rank sum - dim((Z1 (+) Z2) cap V)
    int rank(const Subspace& V) const override {
        int dv = V.dim();
        int best = 1 << 20;
        for (const auto& p : pairs) {
            Basis b = p.basis;
            for (const auto& row : V.rows) b.insert(row.data());
            int meet_dim = p.dim + dv - b.d;
            best = std::min(best, p.rank_sum - meet_dim);
        }
        return dv + best;
    }
    std::string kind() const override { return "direct_sum"; }
};

class MappedBackend : public RankBackend {
   public:
    QMatroid inner;
    std::vector<std::vector<uint8_t>> map;  // invertible, acts on row vectors

    MappedBackend(QMatroid m, std::vector<std::vector<uint8_t>> a)
        : inner(std::move(m)), map(std::move(a)) {}

    int rank(const Subspace& V) const override {
        PrimeField F(inner.q());
        int n = inner.n();
        std::vector<std::vector<uint8_t>> rows(V.dim(), std::vector<uint8_t>(n, 0));
        for (int i = 0; i < V.dim(); ++i)
            for (int t = 0; t < n; ++t) {
                int c = V.rows[i][t];
                if (c == 0) continue;
                for (int j = 0; j < n; ++j)
                    rows[i][j] = (uint8_t)F.add(rows[i][j], F.mul(c, map[t][j]));
            }
        return inner.rank(canonicalize(inner.q(), n, rows));
    }
    std::string kind() const override { return "mapped"; }
};

// ---------------------------------------------------------------------------
// QMatroid methods that need the backends

inline const Materialized& QMatroid::materialized() const {
    if (view_) return *view_;
    auto t = space_table(q_, n_);
    auto mv = std::make_shared<Materialized>();
    mv->table = t;
    mv->rank.resize(t->size());
    if (auto* d = dynamic_cast<const DualBackend*>(b_.get())) {
        const Materialized& im = d->inner.materialized();
        int top = im.rank[t->size() - 1];
        for (int id = 0; id < t->size(); ++id)
            mv->rank[id] = (int16_t)(t->dim(id) + im.rank[t->perp_of(id)] - top);
    } else {
        for (int id = 0; id < t->size(); ++id) mv->rank[id] = (int16_t)b_->rank(t->space(id));
    }
    mv->top = mv->rank[t->size() - 1];
    view_ = mv;
    memo_->top = mv->top;
    return *view_;
}

inline Subspace QMatroid::closure(const Subspace& V) const {
    if (V.q != q_ || V.n != n_) throw ShapeError("ambient mismatch");
    int r = rank(V);
    Basis acc = Basis::of(V);
    if (view_ || subspace_count(n_, q_) <= (Int(1) << 21)) {
        const Materialized& mv = materialized();
        Basis base = mv.table->basis(mv.table->id_of(V));
        for (const auto& x : mv.table->lines()) {
            bool inside = false;
            int nid = mv.table->extend(base, x.data(), &inside);
            if (inside || mv.rank[nid] == r) acc.insert(x.data());
        }
    } else {
        for (const auto& x : line_reps()) {
            Subspace L = canonicalize(q_, n_, {x});
            if (rank(sum(V, L)) == r) acc.insert(x.data());
        }
    }
    return acc.to_subspace();
}

inline Subspace QMatroid::cyclic_core(const Subspace& V) const {
    if (V.q != q_ || V.n != n_) throw ShapeError("ambient mismatch");
    if (V.dim() == 0) return V;
    int r = rank(V);
    Subspace core = V;
    bool any = false;
    for (const auto& H : hyperplanes(V)) {
        if (rank(H) < r) {
            core = intersect(core, H);
            any = true;
        }
    }
    return any ? core : V;
}

inline bool QMatroid::is_full() const {
    return closure(zero_space(q_, n_)).is_zero() && cyclic_core(ambient()) == ambient();
}

inline std::vector<Subspace> QMatroid::flats() const {
    const Materialized& mv = materialized();
    const auto& mask = mv.flat_mask();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mask[id]) out.push_back(mv.table->space(id));
    return out;
}

inline std::vector<Subspace> QMatroid::opens() const {
    const Materialized& mv = materialized();
    const auto& mask = mv.open_mask();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mask[id]) out.push_back(mv.table->space(id));
    return out;
}

inline std::vector<CyclicFlat> QMatroid::cyclic_flats() const {
    if (auto* u = dynamic_cast<const UniformBackend*>(b_.get())) {
        std::vector<CyclicFlat> out;
        if (u->k == n_) {
            out.push_back({zero_space(q_, n_), 0});
        } else if (u->k == 0) {
            out.push_back({ambient(), 0});
        } else {
            out.push_back({zero_space(q_, n_), 0});
            out.push_back({ambient(), u->k});
        }
        return out;
    }
    const Materialized& mv = materialized();
    const auto& mask = mv.flat_mask();
    std::vector<CyclicFlat> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mask[id] && mv.is_open(id)) out.push_back({mv.table->space(id), mv.rank[id]});
    return out;
}

inline std::vector<Subspace> QMatroid::independents() const {
    const Materialized& mv = materialized();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mv.rank[id] == mv.dim(id)) out.push_back(mv.table->space(id));
    return out;
}

inline std::vector<Subspace> QMatroid::circuits() const {
    const Materialized& mv = materialized();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id) {
        int d = mv.dim(id);
        if (mv.rank[id] == d) continue;
        bool minimal = true;
        mv.scan_hyperplanes(id, [&](int hid) {
            if (mv.rank[hid] < d - 1) {
                minimal = false;
                return false;
            }
            return true;
        });
        if (minimal) out.push_back(mv.table->space(id));
    }
    return out;
}

inline std::vector<Subspace> QMatroid::bases() const {
    const Materialized& mv = materialized();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mv.rank[id] == mv.top && mv.dim(id) == mv.top) out.push_back(mv.table->space(id));
    return out;
}

inline std::vector<Subspace> QMatroid::spanning() const {
    const Materialized& mv = materialized();
    std::vector<Subspace> out;
    for (int id = 0; id < mv.table->size(); ++id)
        if (mv.rank[id] == mv.top) out.push_back(mv.table->space(id));
    return out;
}

inline void QMatroid::validate_rank_axioms(ValidationMode mode, uint64_t seed,
                                           uint64_t samples) const {
    auto fail = [](const char* axiom, const Subspace& V, const Subspace& W,
                   const std::string& detail) {
        throw AxiomError(std::string(axiom) + " fails for V=" + pretty(V) + ", W=" + pretty(W) +
                         ": " + detail);
    };
    if (mode == ValidationMode::exhaustive) {
        const Materialized& mv = materialized();
        int N = mv.table->size();
        if (N > 3000)
            throw ScaleError("exhaustive validation is limited to 3000 subspaces; use sampling");
        std::vector<Subspace> sp(N);
        std::vector<Basis> bs(N);
        for (int id = 0; id < N; ++id) {
            sp[id] = mv.table->space(id);
            bs[id] = Basis::of(sp[id]);
            if (mv.rank[id] < 0 || mv.rank[id] > mv.dim(id))
                fail("(R1)", sp[id], sp[id],
                     "rank " + std::to_string(mv.rank[id]) + " outside [0, dim]");
        }
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) {
                int sid = mv.table->sum_id(bs[i], bs[j]);
                int iid = mv.table->id_of(intersect(sp[i], sp[j]));
                int ri = mv.rank[i], rj = mv.rank[j];
                if (mv.rank[iid] > std::min(ri, rj) || std::max(ri, rj) > mv.rank[sid])
                    fail("(R2)", sp[i], sp[j], "rank is not monotone");
                if (ri + rj < mv.rank[sid] + mv.rank[iid])
                    fail("(R3)", sp[i], sp[j],
                         std::to_string(ri) + "+" + std::to_string(rj) + " < " +
                             std::to_string(mv.rank[sid]) + "+" + std::to_string(mv.rank[iid]));
            }
        return;
    }
    std::mt19937_64 rng(seed);
    auto random_space = [&]() {
        int d = (int)(rng() % (n_ + 1));
        std::vector<std::vector<uint8_t>> rows(d, std::vector<uint8_t>(n_));
        for (auto& row : rows)
            for (auto& x : row) x = (uint8_t)(rng() % q_);
        return canonicalize(q_, n_, rows);
    };
    for (uint64_t t = 0; t < samples; ++t) {
        Subspace V = random_space(), W = random_space();
        int rv = rank(V), rw = rank(W);
        if (rv < 0 || rv > V.dim())
            fail("(R1)", V, V, "rank " + std::to_string(rv) + " outside [0, dim]");
        int rs = rank(sum(V, W)), ri = rank(intersect(V, W));
        if (ri > std::min(rv, rw) || std::max(rv, rw) > rs)
            fail("(R2)", V, W, "rank is not monotone");
        if (rv + rw < rs + ri)
            fail("(R3)", V, W,
                 std::to_string(rv) + "+" + std::to_string(rw) + " < " + std::to_string(rs) +
                     "+" + std::to_string(ri));
    }
}

inline QMatroid QMatroid::dual() const {
    if (auto* d = dynamic_cast<const DualBackend*>(b_.get())) return d->inner;
    return QMatroid(q_, n_, std::make_shared<DualBackend>(*this));
}

inline QMatroid QMatroid::restrict(const Subspace& X) const {
    if (X.q != q_ || X.n != n_) throw ShapeError("ambient mismatch");
    return QMatroid(q_, X.dim(), std::make_shared<RestrictionBackend>(*this, X));
}

inline QMatroid QMatroid::contract(const Subspace& X) const {
    if (X.q != q_ || X.n != n_) throw ShapeError("ambient mismatch");
    return QMatroid(q_, n_ - X.dim(), std::make_shared<ContractionBackend>(*this, X));
}

inline FullDecomposition QMatroid::full_decomposition() const {
    Subspace loops = closure(zero_space(q_, n_));
    Subspace core_frame = cyclic_core(ambient());
    QMatroid core = restrict(core_frame).contract(in_coordinates(loops, core_frame));
    return {loops.dim(), n_ - core_frame.dim(), core};
}

// ---------------------------------------------------------------------------
// constructors

inline QMatroid uniform_matroid(int k, int n, int q = 2) {
    PrimeField check(q);
    if (n < 0 || n > 16) throw RangeError("ambient dimension out of range");
    if (k < 0 || k > n) throw RangeError("uniform rank must lie in [0, n]");
    return QMatroid(q, n, std::make_shared<UniformBackend>(k));
}

inline QMatroid represented_matroid(ExtFieldPtr field, std::vector<std::vector<uint32_t>> gen,
                                    int ncols = -1) {
    auto b = std::make_shared<RepresentedBackend>(std::move(field), std::move(gen), ncols);
    int q = b->field->q, n = b->cols;
    if (n > 16) throw RangeError("ambient dimension out of range");
    return QMatroid(q, n, std::move(b));
}

inline QMatroid table_matroid(int q, int n, std::vector<int16_t> ranks) {
    auto t = space_table(q, n);
    return QMatroid(q, n, std::make_shared<TableBackend>(t, std::move(ranks)));
}

inline QMatroid direct_sum(const QMatroid& a, const QMatroid& b) {
    if (a.q() != b.q()) throw ShapeError("direct sum needs a common base field");
    if (a.n() + b.n() > 16) throw RangeError("ambient dimension out of range");
    return QMatroid(a.q(), a.n() + b.n(), std::make_shared<DirectSumBackend>(a, b));
}

inline QMatroid apply_linear_iso(const QMatroid& m,
                                 const std::vector<std::vector<uint8_t>>& a) {
    int n = m.n();
    if ((int)a.size() != n) throw ShapeError("map must be a square matrix of ambient size");
    DenseMat d;
    d.rows = n;
    d.cols = n;
    for (int i = 0; i < n; ++i) {
        if ((int)a[i].size() != n) throw ShapeError("map must be a square matrix of ambient size");
        for (int j = 0; j < n; ++j) {
            if (a[i][j] >= m.q()) throw RangeError("map entry outside F_q");
            d[i][j] = a[i][j];
        }
    }
    PrimeField F(m.q());
    if (rref(d, F) != n) throw SingularError("the map is not invertible");
    return QMatroid(m.q(), n, std::make_shared<MappedBackend>(m, a));
}

// ---------------------------------------------------------------------------
// cyclic-flat families

namespace detail {

// Meet and join tables for a family ordered by containment; le[i][j] means
// element i lies inside element j. Throws AxiomError when a pair has no
// greatest lower or least upper bound within the family.
struct FamilyLattice {
    std::vector<std::vector<char>> le;
    std::vector<std::vector<int>> meet, join;
    int bottom = -1, top = -1;
};

template <class LeFn, class NameFn>
FamilyLattice family_lattice(int m, LeFn le_fn, NameFn name) {
    FamilyLattice L;
    L.le.assign(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) L.le[i][j] = le_fn(i, j) ? 1 : 0;
    L.meet.assign(m, std::vector<int>(m, -1));
    L.join.assign(m, std::vector<int>(m, -1));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                if (!(L.le[k][i] && L.le[k][j])) continue;
                bool greatest = true;
                for (int l = 0; l < m && greatest; ++l)
                    if (L.le[l][i] && L.le[l][j] && !L.le[l][k]) greatest = false;
                if (greatest) {
                    L.meet[i][j] = k;
                    break;
                }
            }
            if (L.meet[i][j] < 0)
                throw AxiomError("(Z0) no meet of " + name(i) + " and " + name(j) +
                                 " inside the family");
            for (int k = 0; k < m; ++k) {
                if (!(L.le[i][k] && L.le[j][k])) continue;
                bool least = true;
                for (int l = 0; l < m && least; ++l)
                    if (L.le[i][l] && L.le[j][l] && !L.le[k][l]) least = false;
                if (least) {
                    L.join[i][j] = k;
                    break;
                }
            }
            if (L.join[i][j] < 0)
                throw AxiomError("(Z0) no join of " + name(i) + " and " + name(j) +
                                 " inside the family");
        }
    L.bottom = 0;
    L.top = 0;
    for (int i = 1; i < m; ++i) {
        L.bottom = L.meet[L.bottom][i];
        L.top = L.join[L.top][i];
    }
    return L;
}

}  // namespace detail

inline QMatroid from_cyclic_flats(int q, int n, const std::vector<CyclicFlat>& input) {
    std::vector<CyclicFlat> zs;
    for (const auto& cf : input) {
        if (cf.space.q != q || cf.space.n != n)
            throw ShapeError("cyclic flat does not live in the requested ambient space");
        if (cf.rank < 0) throw RangeError("negative rank label");
        Subspace c = canonicalize(q, n, cf.space.rows);
        bool dup = false;
        for (const auto& z : zs)
            if (z.space == c) {
                if (z.rank != cf.rank)
                    throw ShapeError("conflicting ranks for " + pretty(c));
                dup = true;
            }
        if (!dup) zs.push_back({std::move(c), cf.rank});
    }
    if (zs.empty()) throw AxiomError("(Z1) the family is empty");
    std::sort(zs.begin(), zs.end(),
              [](const CyclicFlat& a, const CyclicFlat& b) { return a.space < b.space; });
    int m = (int)zs.size();

    auto L = detail::family_lattice(
        m, [&](int i, int j) { return contains(zs[j].space, zs[i].space); },
        [&](int i) { return pretty(zs[i].space); });

    if (zs[L.bottom].rank != 0)
        throw AxiomError("(Z1) the minimal member " + pretty(zs[L.bottom].space) +
                         " has rank " + std::to_string(zs[L.bottom].rank));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j || !L.le[i][j]) continue;
            int dr = zs[j].rank - zs[i].rank;
            int dd = zs[j].space.dim() - zs[i].space.dim();
            if (dr <= 0 || dr >= dd)
                throw AxiomError("(Z2) fails for " + pretty(zs[i].space) + " inside " +
                                 pretty(zs[j].space));
        }
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            int icap = intersect(zs[i].space, zs[j].space).dim();
            int lhs = zs[i].rank + zs[j].rank;
            int rhs = zs[L.join[i][j]].rank + zs[L.meet[i][j]].rank + icap -
                      zs[L.meet[i][j]].space.dim();
            if (lhs < rhs)
                throw AxiomError("(Z3) fails for " + pretty(zs[i].space) + " and " +
                                 pretty(zs[j].space));
        }

    QMatroid M(q, n, std::make_shared<CyclicFlatsBackend>(zs));

    // the family must reproduce itself as the cyclic flats of the matroid it
    // generates
    auto back = M.cyclic_flats();
    std::set<std::pair<Subspace, int>> want, got;
    for (const auto& z : zs) want.insert({z.space, z.rank});
    for (const auto& z : back) got.insert({z.space, z.rank});
    if (want != got)
        throw ConsistencyError("the family is not the cyclic-flat family of the matroid it "
                               "generates (" +
                               std::to_string(want.size()) + " given, " +
                               std::to_string(got.size()) + " recovered)");
    return M;
}

// ---------------------------------------------------------------------------
// lifting a classical matroid given by its cyclic flats

struct MatroidCyclicData {
    int ground_size = 0;
    std::vector<std::pair<uint32_t, int>> cyclic_sets;  // element bitmask, rank
};

namespace detail {

inline std::string set_pretty(uint32_t mask) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; mask >> i; ++i)
        if (mask >> i & 1) {
            if (!first) s += ",";
            s += std::to_string(i + 1);
            first = false;
        }
    return s + "}";
}

}  // namespace detail

inline QMatroid lift_matroid(const MatroidCyclicData& data, int q = 2) {
    int n = data.ground_size;
    if (n < 0 || n > 16) throw RangeError("ground size out of range");
    std::vector<std::pair<uint32_t, int>> sets;
    for (auto [mask, r] : data.cyclic_sets) {
        if (n < 32 && mask >= (1u << n)) throw RangeError("set member outside the ground set");
        if (r < 0) throw RangeError("negative rank label");
        bool dup = false;
        for (auto& s : sets)
            if (s.first == mask) {
                if (s.second != r)
                    throw ShapeError("conflicting ranks for " + detail::set_pretty(mask));
                dup = true;
            }
        if (!dup) sets.emplace_back(mask, r);
    }
    if (sets.empty()) throw AxiomError("(Z1) the family is empty");
    std::sort(sets.begin(), sets.end());
    int m = (int)sets.size();

    auto L = detail::family_lattice(
        m, [&](int i, int j) { return (sets[i].first & sets[j].first) == sets[i].first; },
        [&](int i) { return detail::set_pretty(sets[i].first); });

    auto card = [](uint32_t mask) { return __builtin_popcount(mask); };
    if (sets[L.bottom].second != 0)
        throw AxiomError("(Z1) the minimal member " + detail::set_pretty(sets[L.bottom].first) +
                         " has rank " + std::to_string(sets[L.bottom].second));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j || !L.le[i][j]) continue;
            int dr = sets[j].second - sets[i].second;
            int dd = card(sets[j].first) - card(sets[i].first);
            if (dr <= 0 || dr >= dd)
                throw AxiomError("(Z2) fails for " + detail::set_pretty(sets[i].first) +
                                 " inside " + detail::set_pretty(sets[j].first));
        }
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            int lhs = sets[i].second + sets[j].second;
            int rhs = sets[L.join[i][j]].second + sets[L.meet[i][j]].second +
                      card(sets[i].first & sets[j].first) - card(sets[L.meet[i][j]].first);
            if (lhs < rhs)
                throw AxiomError("(Z3) fails for " + detail::set_pretty(sets[i].first) +
                                 " and " + detail::set_pretty(sets[j].first));
        }

    std::vector<CyclicFlat> lifted;
    for (auto [mask, r] : sets) {
        std::vector<int> coords;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) coords.push_back(i);
        lifted.push_back({unit_vector_space(q, n, coords), r});
    }
    return from_cyclic_flats(q, n, lifted);
}

}  // namespace qmat
