#include "smoothsmc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace smoothsmc {

namespace {

void check_square(std::size_t order, std::size_t count) {
    if (order == 0) throw std::invalid_argument("SymMatrix: order must be >= 1");
    if (count != order * order)
        throw std::invalid_argument("SymMatrix: expected " + std::to_string(order * order) + " entries, got " +
                                    std::to_string(count));
}

}  // namespace

SymMatrix::SymMatrix(std::size_t order, std::vector<double> entries) : order_(order), entries_(std::move(entries)) {
    check_square(order_, entries_.size());
    for (std::size_t i = 0; i < order_; ++i)
        for (std::size_t j = i + 1; j < order_; ++j)
            if (entries_[i * order_ + j] != entries_[j * order_ + i])
                throw std::invalid_argument("SymMatrix: entries not symmetric at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(rows.size(), [&] {
          std::vector<double> flat;
          for (const auto& r : rows) {
              if (r.size() != rows.size()) throw std::invalid_argument("SymMatrix: rows must be square");
              flat.insert(flat.end(), r.begin(), r.end());
          }
          return flat;
      }()) {}

SymMatrix SymMatrix::identity(std::size_t order) {
    return diagonal(std::vector<double>(order, 1.0));
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
    const std::size_t n = diag.size();
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
    return SymMatrix(n, std::move(e));
}

SymMatrix SymMatrix::symmetrized(std::size_t order, std::vector<double> entries) {
    check_square(order, entries.size());
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = i + 1; j < order; ++j) {
            const double avg = 0.5 * (entries[i * order + j] + entries[j * order + i]);
            entries[i * order + j] = avg;
            entries[j * order + i] = avg;
        }
    return SymMatrix(order, std::move(entries));
}

SymMatrix SymMatrix::scaled(double factor) const {
    std::vector<double> e = entries_;
    for (double& v : e) v *= factor;
    return SymMatrix(order_, std::move(e));
}

std::vector<std::vector<double>> SymMatrix::rows() const {
    std::vector<std::vector<double>> out(order_);
    for (std::size_t i = 0; i < order_; ++i)
        out[i].assign(entries_.begin() + static_cast<std::ptrdiff_t>(i * order_),
                      entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * order_));
    return out;
}

SymMatrix kron_with_identity(const SymMatrix& base, std::size_t n) {
    if (n == 0) throw std::invalid_argument("kron_with_identity: n must be >= 1");
    const std::size_t b = base.order();
    const std::size_t order = b * n;
    std::vector<double> e(order * order, 0.0);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < n; ++k) e[(i * n + k) * order + (j * n + k)] = base(i, j);
    return SymMatrix(order, std::move(e));
}

EigenDecomposition eig_sym_vectors(const SymMatrix& mat, int max_sweeps) {
    const std::size_t n = mat.order();
    std::vector<double> a = mat.entries();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    auto converged = [&] {
        double max_diag = 0.0;
        double max_off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            max_diag = std::max(max_diag, std::abs(at(i, i)));
            for (std::size_t j = i + 1; j < n; ++j) max_off = std::max(max_off, std::abs(at(i, j)));
        }
        return max_off == 0.0 || max_off < 1e-14 * max_diag;
    };

    int sweep = 0;
    while (!converged()) {
        if (sweep++ >= max_sweeps)
            throw EigenSolverError("eig_sym: Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return at(x, x) < at(y, y); });

    EigenDecomposition out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t col : idx) {
        out.values.push_back(at(col, col));
        std::vector<double> vec(n);
        for (std::size_t k = 0; k < n; ++k) vec[k] = v[k * n + col];
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

EigenSummary eig_sym(const SymMatrix& mat, int max_sweeps) {
    auto dec = eig_sym_vectors(mat, max_sweeps);
    return EigenSummary{dec.values.front(), dec.values.back(), std::move(dec.values)};
}

bool is_positive_definite(const SymMatrix& mat, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_positive_definite: tol must be >= 0");
    return eig_sym(mat).lambda_min > tol;
}

bool is_positive_definite(const SymMatrix& mat) {
    const auto eig = eig_sym(mat);
    return eig.lambda_min > 1e-12 * std::abs(eig.lambda_max);
}

}  // namespace smoothsmc
