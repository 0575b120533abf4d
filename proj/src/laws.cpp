#include "smoothsmc/laws.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smoothsmc {

void GainConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("GainConfig: ") + name + " must be > 0");
    };
    positive(k1, "k1");
    positive(k2, "k2");
    positive(k3, "k3");
    positive(k4, "k4");
    positive(kappa, "kappa");
    positive(epsilon, "epsilon");
    positive(L0_init, "L0_init");
    if (!(m >= 2.0) || !std::isfinite(m)) throw std::invalid_argument("GainConfig: m must be >= 2");
}

std::string_view to_string(GainStatus status) {
    switch (status) {
        case GainStatus::certified: return "certified";
        case GainStatus::violated: return "uncertified";
        case GainStatus::baseline_exempt: return "baseline-exempt";
    }
    return "unknown";
}

namespace {

double gain_rhs(const GainConfig& c) {
    const double m = c.m;
    return (m * m * m * c.k3 / (m - 1.0) + (4.0 * m * m - 4.0 * m + 1.0) * c.k1 * c.k1) * c.k2 * c.k2;
}

}  // namespace

GainCheck check_gain_condition(const GainConfig& cfg) {
    cfg.validate();
    if (cfg.m == 2.0)
        return {GainStatus::baseline_exempt, std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN()};
    const double lhs = cfg.m * cfg.m * cfg.k3 * cfg.k4;
    const double rhs = gain_rhs(cfg);
    return {lhs > rhs ? GainStatus::certified : GainStatus::violated, lhs, rhs};
}

double critical_k4(const GainConfig& cfg) {
    return gain_rhs(cfg) / (cfg.m * cfg.m * cfg.k3);
}

AdaptiveGains gains_from_L0(const GainConfig& cfg, double L0) {
    if (!(L0 > 0.0)) throw std::invalid_argument("gains_from_L0: L0 must be > 0");
    const double m = cfg.m;
    return AdaptiveGains{
        cfg.k1 * std::pow(L0, (m - 1.0) / m),
        cfg.k2 * L0,
        cfg.k3 * std::pow(L0, (2.0 * m - 2.0) / m),
        cfg.k4 * L0 * L0,
        L0,
    };
}

Vec unit_power_direction(std::span<const double> x, double exponent, double singular_tol) {
    // exponent 1 occurs for the m == 2 baseline (x/|x|)
    if (!(exponent > 0.0 && exponent <= 1.0))
        throw std::invalid_argument("unit_power_direction: exponent must lie in (0, 1]");
    if (!(singular_tol > 0.0)) throw std::invalid_argument("unit_power_direction: singular_tol must be > 0");
    const double n = norm(x);
    if (n < singular_tol) return Vec(x.size(), 0.0);
    return scaled(1.0 / std::pow(n, exponent), x);
}

double update_L0(double L0, double signal_norm, const GainConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("update_L0: dt must be > 0");
    return signal_norm >= cfg.epsilon ? L0 + cfg.kappa * dt : L0;
}

ControllerState ControllerState::initial(std::size_t n, const GainConfig& cfg) {
    return {Vec(n, 0.0), cfg.L0_init};
}

ControllerOutput controller_step(std::span<const double> x1, const ControllerState& state, const GainConfig& cfg,
                                 double dt, double singular_tol) {
    require_same_dim(x1.size(), state.dim(), "controller_step");
    if (!(dt > 0.0)) throw std::invalid_argument("controller_step: dt must be > 0");

    const AdaptiveGains g = gains_from_L0(cfg, state.L0);
    const double m = cfg.m;

    Vec u = unit_power_direction(x1, 1.0 / m, singular_tol);
    for (double& v : u) v *= -g.L1;
    axpy(-g.L2, x1, u);
    axpy(-1.0, state.integral_term, u);

    ControllerState next = state;
    const Vec dir2 = unit_power_direction(x1, 2.0 / m, singular_tol);
    for (std::size_t i = 0; i < x1.size(); ++i) next.integral_term[i] += dt * (g.L3 * dir2[i] + g.L4 * x1[i]);
    next.L0 = update_L0(state.L0, norm(x1), cfg, dt);

    return {std::move(u), g, std::move(next)};
}

ObserverState ObserverState::initial(std::span<const double> x1_init, const GainConfig& cfg) {
    const std::size_t n = x1_init.size();
    return {Vec(x1_init.begin(), x1_init.end()), Vec(n, 0.0), Vec(n, 0.0), cfg.L0_init};
}

Vec observer_estimate(std::span<const double> innovation, std::span<const double> integral_term,
                      const AdaptiveGains& gains, double m, double singular_tol) {
    Vec d_hat = unit_power_direction(innovation, 1.0 / m, singular_tol);
    for (double& v : d_hat) v *= gains.L1;
    axpy(gains.L2, innovation, d_hat);
    axpy(1.0, integral_term, d_hat);
    return d_hat;
}

ObserverOutput observer_step(std::span<const double> x1_measured, std::span<const double> u,
                             const ObserverState& state, const GainConfig& cfg, double dt, double singular_tol) {
    require_same_dim(x1_measured.size(), state.dim(), "observer_step");
    require_same_dim(u.size(), state.dim(), "observer_step");
    require_same_dim(state.integral_term.size(), state.dim(), "observer_step");
    if (!(dt > 0.0)) throw std::invalid_argument("observer_step: dt must be > 0");

    const AdaptiveGains g = gains_from_L0(cfg, state.L0);
    Vec e = difference(x1_measured, state.z1);
    Vec d_hat = observer_estimate(e, state.integral_term, g, cfg.m, singular_tol);

    ObserverState next = state;
    const Vec dir2 = unit_power_direction(e, 2.0 / cfg.m, singular_tol);
    for (std::size_t i = 0; i < e.size(); ++i) {
        next.integral_term[i] += dt * (g.L3 * dir2[i] + g.L4 * e[i]);
        next.z1[i] += dt * (u[i] + d_hat[i]);
    }
    next.d_hat = d_hat;
    next.L0 = update_L0(state.L0, norm(e), cfg, dt);

    return {std::move(d_hat), std::move(e), g, std::move(next)};
}

}  // namespace smoothsmc
