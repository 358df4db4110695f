#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace qmat {

using Int = boost::multiprecision::cpp_int;

inline Int int_pow(int base, int exp) {
    Int r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Gaussian binomial [n k]_q: the number of k-dimensional subspaces of F_q^n.
// Every partial product of the factor chain is itself a Gaussian binomial,
// so each intermediate division is exact.
inline Int gaussian_binomial(int n, int k, int q) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= int_pow(q, n - k + i) - 1;
        r /= int_pow(q, i) - 1;
    }
    return r;
}

// Total number of subspaces of F_q^n.
inline Int subspace_count(int n, int q) {
    Int r = 0;
    for (int k = 0; k <= n; ++k) r += gaussian_binomial(n, k, q);
    return r;
}

}  // namespace qmat
