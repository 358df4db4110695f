#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <qmat/error.hpp>

namespace qmat {

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Arithmetic mod a prime q.
struct PrimeField {
    int q;

    explicit PrimeField(int q_) : q(q_) {
        if (!is_prime(q)) throw FieldError("base field size must be prime, got " + std::to_string(q));
    }

    int add(int a, int b) const { int s = a + b; return s >= q ? s - q : s; }
    int sub(int a, int b) const { int s = a - b; return s < 0 ? s + q : s; }
    int neg(int a) const { return a == 0 ? 0 : q - a; }
    int mul(int a, int b) const { return int((int64_t)a * b % q); }

    int inv(int a) const {
        if (a % q == 0) throw DivisionByZero("inverse of 0 in F_" + std::to_string(q));
        int r = 1, base = a % q, e = q - 2;
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
};

namespace detail {

// Dense polynomials over F_q, coefficient lists with constant term first.
using FqPoly = std::vector<int>;

inline int poly_deg(const FqPoly& a) {
    for (int i = int(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

inline FqPoly poly_mod(FqPoly a, const FqPoly& f, const PrimeField& F) {
    int df = poly_deg(f);
    int inv_lead = F.inv(f[df]);
    for (int i = poly_deg(a); i >= df; --i) {
        if (a[i] == 0) continue;
        int c = F.mul(a[i], inv_lead);
        for (int j = 0; j <= df; ++j)
            a[i - df + j] = F.sub(a[i - df + j], F.mul(c, f[j]));
    }
    a.resize(df > 0 ? df : 1, 0);
    return a;
}

inline FqPoly poly_mulmod(const FqPoly& a, const FqPoly& b, const FqPoly& f, const PrimeField& F) {
    FqPoly c(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
    }
    return poly_mod(std::move(c), f, F);
}

inline FqPoly poly_gcd(FqPoly a, FqPoly b, const PrimeField& F) {
    while (poly_deg(b) >= 0) {
        FqPoly r = poly_mod(a, b, F);
        r.resize(std::max(poly_deg(r) + 1, 1), 0);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin test: f of degree m is irreducible iff x^(q^m) = x mod f and
// gcd(x^(q^(m/p)) - x, f) = 1 for every prime p dividing m.
inline bool poly_irreducible(const FqPoly& f, int m, const PrimeField& F) {
    if (m == 1) return true;
    std::vector<int> prime_divs;
    int mm = m;
    for (int p = 2; p * p <= mm; ++p)
        if (mm % p == 0) {
            prime_divs.push_back(p);
            while (mm % p == 0) mm /= p;
        }
    if (mm > 1) prime_divs.push_back(mm);

    FqPoly x(m, 0);
    x[1] = 1;
    FqPoly g = x;  // x^(q^j) mod f, starting at j = 0
    for (int j = 1; j <= m; ++j) {
        FqPoly next = g;
        for (int t = 1; t < F.q; ++t) next = poly_mulmod(next, g, f, F);
        g = std::move(next);
        for (int p : prime_divs) {
            if (j != m / p) continue;
            FqPoly d = g;
            d[1] = F.sub(d[1], 1);
            FqPoly gc = poly_gcd(f, d, F);
            if (poly_deg(gc) != 0) return false;
        }
    }
    return g == x;
}

}  // namespace detail

// F_{q^m} presented by a monic irreducible min_poly whose root w is primitive.
// Element values are base-q digit packings of the coefficient vector in w.
// Eager power tables give O(1) mul/inv; fields beyond 2^20 elements are refused.
class ExtensionField {
public:
    ExtensionField(int q_, int m_, std::vector<int> min_poly)
        : q(q_), m(m_), base(q_), f(std::move(min_poly)) {
        if (m < 1) throw RangeError("extension degree must be >= 1");
        if ((int)f.size() != m + 1)
            throw ShapeError("min_poly needs m+1 coefficients, got " + std::to_string(f.size()));
        for (int& c : f) {
            if (c < 0 || c >= q) throw RangeError("min_poly coefficient out of F_q range");
        }
        if (f[m] != 1) throw ShapeError("min_poly must be monic");

        uint64_t sz = 1;
        for (int i = 0; i < m; ++i) {
            sz *= (uint64_t)q;
            if (sz > (1u << 20))
                throw ScaleError("extension field larger than 2^20 elements");
        }
        size = (uint32_t)sz;
        order = size - 1;

        if (!detail::poly_irreducible(f, m, base))
            throw IrreducibilityError("min_poly is reducible over F_" + std::to_string(q));

        build_tables();
    }

    int q, m;
    uint32_t size;   // q^m
    uint32_t order;  // q^m - 1

    uint32_t zero() const { return 0; }
    uint32_t one() const { return antilog_[0]; }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (q == 2) return a ^ b;
        uint32_t r = 0, p = 1;
        for (int i = 0; i < m; ++i, p *= q, a /= q, b /= q)
            r += p * (uint32_t)base.add(int(a % q), int(b % q));
        return r;
    }

    uint32_t neg(uint32_t a) const {
        if (q == 2) return a;
        uint32_t r = 0, p = 1;
        for (int i = 0; i < m; ++i, p *= q, a /= q)
            r += p * (uint32_t)base.neg(int(a % q));
        return r;
    }

    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return antilog_[(log_[a] + log_[b]) % order];
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) throw DivisionByZero("inverse of 0 in extension field");
        return antilog_[(order - log_[a]) % order];
    }

    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

    // w^k for k >= 0 (reduced mod the group order).
    uint32_t omega_pow(uint64_t k) const { return antilog_[k % order]; }

    uint32_t dlog(uint32_t a) const {
        if (a == 0) throw DivisionByZero("discrete log of 0");
        return log_[a];
    }

    std::vector<int> coeffs(uint32_t a) const {
        std::vector<int> c(m);
        for (int i = 0; i < m; ++i, a /= q) c[i] = int(a % q);
        return c;
    }

    uint32_t from_coeffs(const std::vector<int>& c) const {
        if ((int)c.size() != m) throw ShapeError("coefficient vector length mismatch");
        uint32_t r = 0;
        for (int i = m - 1; i >= 0; --i) {
            if (c[i] < 0 || c[i] >= q) throw RangeError("coefficient out of F_q range");
            r = r * q + (uint32_t)c[i];
        }
        return r;
    }

    // Accepted element spellings: "0", "1", "w^k" with 0 <= k < q^m - 1.
    uint32_t parse(const std::string& s) const {
        if (s == "0") return 0;
        if (s == "1") return one();
        if (s.rfind("w^", 0) == 0) {
            size_t pos = 0;
            long k = std::stol(s.substr(2), &pos);
            if (pos != s.size() - 2 || k < 0 || (uint64_t)k >= order)
                throw RangeError("exponent out of range in element '" + s + "'");
            return antilog_[k];
        }
        throw RangeError("cannot parse field element '" + s + "'");
    }

    std::string to_string(uint32_t a) const {
        if (a == 0) return "0";
        return "w^" + std::to_string(log_[a]);
    }

    const std::vector<int>& min_poly() const { return f; }

    bool operator==(const ExtensionField& o) const { return q == o.q && m == o.m && f == o.f; }

private:
    PrimeField base;
    std::vector<int> f;
    std::vector<uint32_t> antilog_, log_;

    // Multiply a packed value by w and reduce mod the min poly.
    uint32_t mul_omega(uint32_t a) const {
        std::vector<int> c = coeffs(a);
        int top = c[m - 1];
        for (int i = m - 1; i > 0; --i) c[i] = c[i - 1];
        c[0] = 0;
        if (top != 0)
            for (int i = 0; i < m; ++i) c[i] = base.sub(c[i], base.mul(top, f[i]));
        uint32_t r = 0;
        for (int i = m - 1; i >= 0; --i) r = r * q + (uint32_t)c[i];
        return r;
    }

    void build_tables() {
        antilog_.assign(order, 0);
        log_.assign(size, 0);
        uint32_t v = 1;
        for (uint32_t i = 0; i < order; ++i) {
            if (i > 0 && v == 1)
                throw PrimitivityError("w has multiplicative order " + std::to_string(i) +
                                       " < " + std::to_string(order));
            antilog_[i] = v;
            log_[v] = i;
            v = mul_omega(v);
        }
        if (v != 1) throw ConsistencyError("w^(q^m-1) != 1 after table construction");
    }
};

using ExtFieldPtr = std::shared_ptr<const ExtensionField>;

// Element paired with its field, for call sites where implicit context is clumsy.
struct ExtElement {
    ExtFieldPtr field;
    uint32_t v = 0;

    ExtElement() = default;
    ExtElement(ExtFieldPtr f, uint32_t v_) : field(std::move(f)), v(v_) {}

    ExtElement operator+(const ExtElement& o) const { return {field, field->add(v, o.v)}; }
    ExtElement operator-(const ExtElement& o) const { return {field, field->sub(v, o.v)}; }
    ExtElement operator*(const ExtElement& o) const { return {field, field->mul(v, o.v)}; }
    ExtElement operator/(const ExtElement& o) const { return {field, field->div(v, o.v)}; }
    bool operator==(const ExtElement& o) const { return v == o.v; }
    bool is_zero() const { return v == 0; }
    std::string str() const { return field->to_string(v); }
};

}  // namespace qmat
