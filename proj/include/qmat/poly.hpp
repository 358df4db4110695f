#pragma once

#include <string>
#include <utility>
#include <vector>

#include <qmat/error.hpp>
#include <qmat/gaussian.hpp>

namespace qmat {

// Polynomial in Z[x, y], dense coefficient grid c[i][j] for x^i y^j.
// Always normalized: no all-zero trailing row or column; the zero polynomial
// keeps a single zero entry.
class BivariatePoly {
   public:
    BivariatePoly() : c_(1, std::vector<Int>(1, 0)) {}

    static BivariatePoly monomial(int dx, int dy, Int coeff = 1) {
        if (dx < 0 || dy < 0) throw RangeError("negative exponent");
        BivariatePoly p;
        p.set(dx, dy, std::move(coeff));
        return p;
    }

    static BivariatePoly constant(Int v) { return monomial(0, 0, std::move(v)); }

    const Int& coeff(int i, int j) const {
        static const Int kZero = 0;
        if (i < 0 || j < 0 || i >= (int)c_.size() || j >= (int)c_[i].size()) return kZero;
        return c_[i][j];
    }

    void set(int i, int j, Int v) {
        if (i < 0 || j < 0) throw RangeError("negative exponent");
        if (i >= (int)c_.size()) c_.resize(i + 1);
        int width = std::max((int)c_[0].size(), j + 1);
        for (auto& row : c_) row.resize(width, 0);
        c_[i][j] = std::move(v);
        normalize();
    }

    void add_to(int i, int j, const Int& v) { set(i, j, coeff(i, j) + v); }

    int deg_x() const { return (int)c_.size() - 1; }
    int deg_y() const { return (int)c_[0].size() - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0].size() == 1 && c_[0][0] == 0; }

    bool operator==(const BivariatePoly& o) const { return c_ == o.c_; }
    bool operator!=(const BivariatePoly& o) const { return c_ != o.c_; }

    BivariatePoly& operator+=(const BivariatePoly& o) {
        grow_to(o.deg_x(), o.deg_y());
        for (int i = 0; i <= o.deg_x(); ++i)
            for (int j = 0; j <= o.deg_y(); ++j) c_[i][j] += o.c_[i][j];
        normalize();
        return *this;
    }
    BivariatePoly& operator-=(const BivariatePoly& o) {
        grow_to(o.deg_x(), o.deg_y());
        for (int i = 0; i <= o.deg_x(); ++i)
            for (int j = 0; j <= o.deg_y(); ++j) c_[i][j] -= o.c_[i][j];
        normalize();
        return *this;
    }
    friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
    friend BivariatePoly operator-(BivariatePoly a, const BivariatePoly& b) { return a -= b; }

    friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
        BivariatePoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.deg_x() + b.deg_x() + 1,
                    std::vector<Int>(a.deg_y() + b.deg_y() + 1, 0));
        for (int i = 0; i <= a.deg_x(); ++i)
            for (int j = 0; j <= a.deg_y(); ++j) {
                if (a.c_[i][j] == 0) continue;
                for (int k = 0; k <= b.deg_x(); ++k)
                    for (int l = 0; l <= b.deg_y(); ++l)
                        r.c_[i + k][j + l] += a.c_[i][j] * b.c_[k][l];
            }
        r.normalize();
        return r;
    }

    BivariatePoly scaled(const Int& s) const {
        BivariatePoly r = *this;
        for (auto& row : r.c_)
            for (auto& v : row) v *= s;
        r.normalize();
        return r;
    }

    Int eval(const Int& xv, const Int& yv) const {
        Int total = 0;
        for (int i = deg_x(); i >= 0; --i) {
            Int row = 0;
            for (int j = deg_y(); j >= 0; --j) row = row * yv + c_[i][j];
            total = total * xv + row;
        }
        return total;
    }

    // (x, y) -> (y, x)
    BivariatePoly swapped() const {
        BivariatePoly r;
        r.c_.assign(deg_y() + 1, std::vector<Int>(deg_x() + 1, 0));
        for (int i = 0; i <= deg_x(); ++i)
            for (int j = 0; j <= deg_y(); ++j) r.c_[j][i] = c_[i][j];
        r.normalize();
        return r;
    }

    // Canonical text form: x-powers descending; each coefficient is a
    // y-polynomial with descending powers, parenthesized unless constant.
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = deg_x(); i >= 1; --i) {
            int nz = 0, top = -1;
            for (int j = 0; j <= deg_y(); ++j)
                if (c_[i][j] != 0) {
                    ++nz;
                    top = j;
                }
            if (nz == 0) continue;
            std::string xs = i == 1 ? "x" : "x^" + std::to_string(i);
            if (nz == 1 && top == 0) {
                append_term(out, c_[i][0], xs);
            } else if (nz == 1) {
                append_term(out, c_[i][top], xs + y_power(top));
            } else {
                std::string inner;
                for (int j = deg_y(); j >= 0; --j)
                    if (c_[i][j] != 0) append_term(inner, c_[i][j], y_power(j));
                if (!out.empty()) out += "+";
                out += "(" + inner + ")" + xs;
            }
        }
        for (int j = deg_y(); j >= 0; --j)
            if (c_[0][j] != 0) append_term(out, c_[0][j], y_power(j));
        return out;
    }

    const std::vector<std::vector<Int>>& grid() const { return c_; }

   private:
    std::vector<std::vector<Int>> c_;

    static std::string y_power(int j) {
        if (j == 0) return "";
        return j == 1 ? "y" : "y^" + std::to_string(j);
    }

    static void append_term(std::string& out, const Int& coeff, const std::string& vars) {
        bool neg = coeff < 0;
        Int a = neg ? Int(-coeff) : coeff;
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? "-" : "+";
        }
        if (a != 1 || vars.empty()) out += a.str();
        out += vars;
    }

    void grow_to(int dx, int dy) {
        if (dx >= (int)c_.size()) c_.resize(dx + 1);
        int width = std::max((int)c_[0].size(), dy + 1);
        for (auto& row : c_) row.resize(width, 0);
    }

    void normalize() {
        int width = 0;
        for (auto& row : c_) row.resize(std::max((size_t)1, c_[0].size()), 0);
        size_t rows = c_.size();
        while (rows > 1) {
            bool zero = true;
            for (const auto& v : c_[rows - 1])
                if (v != 0) zero = false;
            if (!zero) break;
            --rows;
        }
        c_.resize(rows);
        for (const auto& row : c_)
            for (int j = 0; j < (int)row.size(); ++j)
                if (row[j] != 0) width = std::max(width, j + 1);
        width = std::max(width, 1);
        for (auto& row : c_) row.resize(width);
    }
};

// Star product of a polynomial in x alone and one in y alone:
// coefficient of x^i y^j is q^((deg f - i)(deg g - j)) f_i g_j.
inline BivariatePoly star_product(const BivariatePoly& f, const BivariatePoly& g, int q) {
    if (f.deg_y() != 0) throw ShapeError("left star factor must be a polynomial in x only");
    if (g.deg_x() != 0) throw ShapeError("right star factor must be a polynomial in y only");
    BivariatePoly r;
    if (f.is_zero() || g.is_zero()) return r;
    int df = f.deg_x(), dg = g.deg_y();
    for (int i = 0; i <= df; ++i) {
        if (f.coeff(i, 0) == 0) continue;
        for (int j = 0; j <= dg; ++j) {
            if (g.coeff(0, j) == 0) continue;
            r.add_to(i, j, int_pow(q, (df - i) * (dg - j)) * f.coeff(i, 0) * g.coeff(0, j));
        }
    }
    return r;
}

// x-truncation: keeps the part strictly below the diagonal, substituting
// x^i y^j -> x^(i-j).
inline BivariatePoly trunc_x(const BivariatePoly& p) {
    BivariatePoly r;
    for (int i = 0; i <= p.deg_x(); ++i)
        for (int j = 0; j < i && j <= p.deg_y(); ++j)
            if (p.coeff(i, j) != 0) r.add_to(i - j, 0, p.coeff(i, j));
    return r;
}

// y-truncation: keeps the diagonal and above, substituting x^i y^j -> y^(j-i).
inline BivariatePoly trunc_y(const BivariatePoly& p) {
    BivariatePoly r;
    for (int i = 0; i <= p.deg_x(); ++i)
        for (int j = i; j <= p.deg_y(); ++j)
            if (p.coeff(i, j) != 0) r.add_to(0, j - i, p.coeff(i, j));
    return r;
}

}  // namespace qmat
