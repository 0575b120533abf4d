#pragma once

#include <array>
#include <optional>
#include <span>

#include "smoothsmc/laws.hpp"
#include "smoothsmc/matrix.hpp"
#include "smoothsmc/vec.hpp"

namespace smoothsmc {

/// Coordinates in which the closed loop admits the quadratic Lyapunov function.
struct TransformedState {
    Vec xi1;  // L0^((m-1)/m) x1 / |x1|^(1/m)
    Vec xi2;  // L0 x1
    Vec xi3;  // x2

    const Vec& operator[](std::size_t i) const { return i == 0 ? xi1 : (i == 1 ? xi2 : xi3); }
};

TransformedState transform_state(std::span<const double> x1, std::span<const double> x2, double L0, double m,
                                 double singular_tol = kDefaultSingularTol);

// 3x3 factors; every certificate matrix is factor ⊗ I_n.
SymMatrix build_P(const GainConfig& cfg);
SymMatrix build_Q(const GainConfig& cfg);
std::pair<SymMatrix, SymMatrix> build_omega_tildes(const GainConfig& cfg);

/// V = xi^T (P ⊗ I_n) xi evaluated blockwise.
double lyapunov_value(const TransformedState& xi, const SymMatrix& P_block);

struct LyapunovCertificate {
    GainConfig config;
    GainCheck gain_check;

    SymMatrix P_block;
    SymMatrix Q_block;
    SymMatrix Omega1_block;
    SymMatrix Omega2_block;
    EigenSummary P_eig;
    EigenSummary Q_eig;
    EigenSummary Omega1_eig;
    EigenSummary Omega2_eig;
    bool P_pd;
    bool Q_pd;
    bool Omega1_pd;
    bool Omega2_pd;

    double p1;
    // n1..n4 are meaningful only when constants_valid; n2 = delta * n2_coeff.
    bool constants_valid;
    double n1;
    double n2_coeff;
    double n3;
    double n4;

    bool gain_condition_ok() const { return gain_check.ok(); }
    bool all_pd() const { return P_pd && Q_pd && Omega1_pd && Omega2_pd; }
    double n2(double delta) const { return delta * n2_coeff; }
};

/// Requires m > 2 (throws std::invalid_argument otherwise). Never emits NaN
/// constants silently: a PD failure clears constants_valid.
LyapunovCertificate build_certificate(const GainConfig& cfg);

/// ln(1 + c2 V0^(1-p)/c1) / (c2 (1-p))
double settling_time_lemma1(double c1, double c2, double p, double V0);

/// Settling-time bound for the perturbed decay inequality with margins theta1, theta2.
double settling_time_lemma2(double c1, double c2, double c3, double p1, double p2, double V0, double theta1,
                            double theta2);

/**
 * Root in (0,1) of
 *   g(t) = t^(1-p2) theta2^(p1-p2) c3^(1-p2) - theta1^(1-p2) (1-t)^(p1-p2) c3^(p1-p2),
 * the condition under which both residual-set characterizations give the same V level.
 * Regula falsi with a bisection safeguard; |g| < 1e-12 at return unless the root sits
 * closer to 1 than double precision can resolve.
 */
double solve_theta3(double theta1, double theta2, double c3, double p1, double p2);

/// g(theta3) as defined for solve_theta3.
double theta3_residual(double theta3, double theta1, double theta2, double c3, double p1, double p2);

struct ResidualLevels {
    double V_level_D1;
    double V_level_D2;
};

ResidualLevels residual_sets(double c3, double theta1, double theta2, double theta3, double p1, double p2);

struct ConvergenceEstimate {
    double c1;
    double c2;
    double c3;  // 0 when unperturbed
    double p;
    double p2;  // used only when c3 > 0
    double V0;
    std::optional<double> settling_time_bound;  // nullopt means "infinite"
    std::optional<double> residual_V_level;     // nullopt means "none"
    double theta1;
    double theta2;
    double theta3;
};

struct ConvergenceInputs {
    double V0 = 0.0;
    double delta = 0.0;            // disturbance norm bound
    double L0 = 1.0;               // adaptive gain at which c1, c2 are frozen
    std::optional<double> L0_rate; // defaults to kappa
    std::optional<double> theta1;  // defaults to c1/2
    std::optional<double> theta2;  // defaults to c2/2
};

/**
 * Freezes the decay coefficients at a given L0:
 *   c1 = L0 n1,  c2 = L0 n3 - (2m-2)/m n4 L0_rate/L0,  c3 = delta n2_coeff,
 * then applies the unperturbed bound (delta == 0) or the perturbed bound with
 * p2 = 1/2. When c2 <= 0 the bound is reported as infinite.
 */
ConvergenceEstimate estimate_convergence(const LyapunovCertificate& cert, const ConvergenceInputs& in);

}  // namespace smoothsmc
