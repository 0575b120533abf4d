#pragma once

// Test-only reference computations, kept independent of the library code paths they check.

#include <cmath>
#include <random>
#include <vector>

#include "smoothsmc/matrix.hpp"

namespace oracle {

/// Determinant by Gaussian elimination with partial pivoting.
inline double determinant(const smoothsmc::SymMatrix& m) {
    const std::size_t n = m.order();
    std::vector<double> a = m.entries();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            det = -det;
        }
        det *= a[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return det;
}

/// Sylvester's criterion: all leading principal minors positive.
inline bool sylvester_pd(const smoothsmc::SymMatrix& m) {
    for (std::size_t k = 1; k <= m.order(); ++k) {
        std::vector<double> sub(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub[i * k + j] = m(i, j);
        if (!(determinant(smoothsmc::SymMatrix(k, sub)) > 0.0)) return false;
    }
    return true;
}

inline smoothsmc::SymMatrix random_symmetric(std::mt19937_64& rng, std::size_t order, double scale = 10.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> e(order * order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = i; j < order; ++j) e[i * order + j] = e[j * order + i] = u(rng);
    return smoothsmc::SymMatrix(order, e);
}

}  // namespace oracle
