#pragma once

#include <span>
#include <string>
#include <string_view>

#include "smoothsmc/vec.hpp"

namespace smoothsmc {

constexpr double kDefaultSingularTol = 1e-12;

/**
 * @brief Parameters of the adaptive smooth second-order sliding-mode laws.
 *
 * m > 2 gives the smooth family; m == 2 reproduces the adaptive
 * multivariable super-twisting baseline with identical k1..k4 and kappa.
 */
struct GainConfig {
    double k1 = 2.0;
    double k2 = 2.5;
    double k3 = 4.0;
    double k4 = 30.0;
    double m = 3.0;
    double kappa = 10.0;   // adaptation rate, 1/s
    double epsilon = 1e-3; // dead zone on the adapted signal norm
    double L0_init = 1.0;

    /// Throws std::invalid_argument unless k1..k4, kappa, epsilon, L0_init > 0 and m >= 2.
    void validate() const;

    friend bool operator==(const GainConfig&, const GainConfig&) = default;
};

enum class GainStatus { certified, violated, baseline_exempt };

std::string_view to_string(GainStatus status);

/// Outcome of the gain feasibility inequality m^2 k3 k4 > (m^3 k3/(m-1) + (2m-1)^2 k1^2) k2^2.
struct GainCheck {
    GainStatus status;
    double lhs;  // NaN when baseline_exempt
    double rhs;
    bool ok() const { return status == GainStatus::certified; }
};

GainCheck check_gain_condition(const GainConfig& cfg);

/// Smallest k4 that satisfies the feasibility inequality for the other gains (equality point).
double critical_k4(const GainConfig& cfg);

struct AdaptiveGains {
    double L1;
    double L2;
    double L3;
    double L4;
    double L0;

    friend bool operator==(const AdaptiveGains&, const AdaptiveGains&) = default;
};

AdaptiveGains gains_from_L0(const GainConfig& cfg, double L0);

/// x / |x|^exponent, regularized to zero below singular_tol.
Vec unit_power_direction(std::span<const double> x, double exponent, double singular_tol = kDefaultSingularTol);

/// One explicit Euler step of the dead-zone adaptation law.
double update_L0(double L0, double signal_norm, const GainConfig& cfg, double dt);

struct ControllerState {
    Vec integral_term;
    double L0;

    static ControllerState initial(std::size_t n, const GainConfig& cfg);
    std::size_t dim() const { return integral_term.size(); }
};

struct ControllerOutput {
    Vec u;
    AdaptiveGains gains;  // gains used to produce u
    ControllerState next;
};

/**
 * u = -L1 x1/|x1|^(1/m) - L2 x1 - integral, with gains from the current L0.
 * The integral then advances by dt*(L3 x1/|x1|^(2/m) + L4 x1) and L0 adapts on |x1|.
 */
ControllerOutput controller_step(std::span<const double> x1, const ControllerState& state, const GainConfig& cfg,
                                 double dt, double singular_tol = kDefaultSingularTol);

struct ObserverState {
    Vec z1;
    Vec d_hat;
    Vec integral_term;
    double L0;

    static ObserverState initial(std::span<const double> x1_init, const GainConfig& cfg);
    std::size_t dim() const { return z1.size(); }
};

struct ObserverOutput {
    Vec d_hat;
    Vec innovation;  // e1 = x1 - z1
    AdaptiveGains gains;
    ObserverState next;
};

/// Feedback part of the estimate: L1 e/|e|^(1/m) + L2 e + integral.
Vec observer_estimate(std::span<const double> innovation, std::span<const double> integral_term,
                      const AdaptiveGains& gains, double m, double singular_tol = kDefaultSingularTol);

/**
 * Disturbance observer step. The innovation is e1 = x1 - z1; the estimate is
 * d_hat = L1 e1/|e1|^(1/m) + L2 e1 + integral, and z1 advances with u + d_hat.
 */
ObserverOutput observer_step(std::span<const double> x1_measured, std::span<const double> u,
                             const ObserverState& state, const GainConfig& cfg, double dt,
                             double singular_tol = kDefaultSingularTol);

}  // namespace smoothsmc
