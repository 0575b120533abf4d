#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace smoothsmc {

/**
 * @brief Small dense symmetric matrix, row-major.
 *
 * Symmetry is exact: the checked constructor rejects asymmetric input and
 * symmetrized() averages the two triangles.
 */
class SymMatrix {
public:
    SymMatrix(std::size_t order, std::vector<double> entries);
    SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SymMatrix identity(std::size_t order);
    static SymMatrix diagonal(const std::vector<double>& diag);
    static SymMatrix symmetrized(std::size_t order, std::vector<double> entries);

    std::size_t order() const { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

    SymMatrix scaled(double factor) const;
    std::vector<std::vector<double>> rows() const;

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    std::size_t order_;
    std::vector<double> entries_;
};

struct EigenSummary {
    double lambda_min;
    double lambda_max;
    std::vector<double> spectrum;  // ascending
};

/// Eigenvalues plus orthonormal eigenvectors; vectors[k] pairs with values[k].
struct EigenDecomposition {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// base ⊗ I_n. Certificate code never needs this; it exists to check the
/// spectrum identity that lets all eigenvalue work stay on the base factor.
SymMatrix kron_with_identity(const SymMatrix& base, std::size_t n);

constexpr int kDefaultJacobiSweeps = 100;

/// Cyclic Jacobi rotations. Converged when every off-diagonal magnitude is
/// below 1e-14 times the largest diagonal magnitude; throws EigenSolverError
/// if that does not happen within max_sweeps.
EigenDecomposition eig_sym_vectors(const SymMatrix& mat, int max_sweeps = kDefaultJacobiSweeps);

EigenSummary eig_sym(const SymMatrix& mat, int max_sweeps = kDefaultJacobiSweeps);

/// True iff lambda_min > tol.
bool is_positive_definite(const SymMatrix& mat, double tol);

/// Uses tol = 1e-12 * |lambda_max|.
bool is_positive_definite(const SymMatrix& mat);

}  // namespace smoothsmc
