#include "smoothsmc/certificate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smoothsmc {

TransformedState transform_state(std::span<const double> x1, std::span<const double> x2, double L0, double m,
                                 double singular_tol) {
    require_same_dim(x1.size(), x2.size(), "transform_state");
    Vec xi1 = unit_power_direction(x1, 1.0 / m, singular_tol);
    const double scale = std::pow(L0, (m - 1.0) / m);
    for (double& v : xi1) v *= scale;
    return {std::move(xi1), scaled(L0, x1), Vec(x2.begin(), x2.end())};
}

SymMatrix build_P(const GainConfig& cfg) {
    cfg.validate();
    const double m = cfg.m, k1 = cfg.k1, k2 = cfg.k2, k3 = cfg.k3, k4 = cfg.k4;
    return SymMatrix{
        {2.0 * m / (m - 1.0) * k3 + k1 * k1, k1 * k2, -k1},
        {k1 * k2, 2.0 * k4 + k2 * k2, -k2},
        {-k1, -k2, 2.0},
    }.scaled(0.5);
}

SymMatrix build_Q(const GainConfig& cfg) {
    cfg.validate();
    const double m = cfg.m, k1 = cfg.k1, k2 = cfg.k2, k3 = cfg.k3, k4 = cfg.k4;
    const double cross = (2.0 * m - 1.0) * k1 * k2 / (2.0 * (m - 1.0));
    const double q1 = 2.0 * m / (m - 1.0) * k3 + k1 * k1 + cross + k1 / 2.0;
    const double q2 = m / (2.0 * (m - 1.0)) * (4.0 * k4 + 2.0 * k2 * k2 + k2) + cross;
    const double q3 = k1 / 2.0 + m * k2 / (2.0 * (m - 1.0));
    return SymMatrix::diagonal({q1, q2, q3});
}

std::pair<SymMatrix, SymMatrix> build_omega_tildes(const GainConfig& cfg) {
    cfg.validate();
    const double m = cfg.m, k1 = cfg.k1, k2 = cfg.k2, k3 = cfg.k3, k4 = cfg.k4;
    SymMatrix omega1 = SymMatrix{
        {k3 * m + k1 * k1 * (m - 1.0), 0.0, -k1 * (m - 1.0)},
        {0.0, k4 * m + k2 * k2 * (3.0 * m - 1.0), -k2 * (2.0 * m - 1.0)},
        {-k1 * (m - 1.0), -k2 * (2.0 * m - 1.0), m - 1.0},
    }.scaled(k1 / m);
    SymMatrix omega2 = SymMatrix{
        {k3 + k1 * k1 * (3.0 * m - 2.0) / m, 0.0, 0.0},
        {0.0, k4 + k2 * k2, -k2},
        {0.0, -k2, 1.0},
    }.scaled(k2);
    return {std::move(omega1), std::move(omega2)};
}

double lyapunov_value(const TransformedState& xi, const SymMatrix& P_block) {
    if (P_block.order() != 3) throw std::invalid_argument("lyapunov_value: P_block must be 3x3");
    require_same_dim(xi.xi1.size(), xi.xi2.size(), "lyapunov_value");
    require_same_dim(xi.xi1.size(), xi.xi3.size(), "lyapunov_value");
    double v = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) v += P_block(i, j) * dot(xi[i], xi[j]);
    return v;
}

LyapunovCertificate build_certificate(const GainConfig& cfg) {
    cfg.validate();
    if (!(cfg.m > 2.0)) throw std::invalid_argument("build_certificate: requires m > 2 (m == 2 is baseline-exempt)");

    auto P = build_P(cfg);
    auto Q = build_Q(cfg);
    auto [O1, O2] = build_omega_tildes(cfg);
    auto Pe = eig_sym(P);
    auto Qe = eig_sym(Q);
    auto O1e = eig_sym(O1);
    auto O2e = eig_sym(O2);

    auto pd = [](const EigenSummary& e) { return e.lambda_min > 1e-12 * std::abs(e.lambda_max); };

    LyapunovCertificate c{
        .config = cfg,
        .gain_check = check_gain_condition(cfg),
        .P_block = P,
        .Q_block = Q,
        .Omega1_block = O1,
        .Omega2_block = O2,
        .P_eig = Pe,
        .Q_eig = Qe,
        .Omega1_eig = O1e,
        .Omega2_eig = O2e,
        .P_pd = pd(Pe),
        .Q_pd = pd(Qe),
        .Omega1_pd = pd(O1e),
        .Omega2_pd = pd(O2e),
        .p1 = (2.0 * cfg.m - 3.0) / (2.0 * cfg.m - 2.0),
        .constants_valid = false,
        .n1 = std::numeric_limits<double>::quiet_NaN(),
        .n2_coeff = std::numeric_limits<double>::quiet_NaN(),
        .n3 = std::numeric_limits<double>::quiet_NaN(),
        .n4 = std::numeric_limits<double>::quiet_NaN(),
    };
    if (c.all_pd()) {
        c.constants_valid = true;
        c.n1 = O1e.lambda_min / std::pow(Pe.lambda_max, c.p1);
        c.n2_coeff = std::sqrt(cfg.k1 * cfg.k1 + cfg.k2 * cfg.k2 + 4.0) / std::sqrt(Pe.lambda_min);
        c.n3 = O2e.lambda_min / Pe.lambda_max;
        c.n4 = Qe.lambda_max / (2.0 * Pe.lambda_min);
    }
    return c;
}

double settling_time_lemma1(double c1, double c2, double p, double V0) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("settling_time_lemma1: c1, c2 must be > 0");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("settling_time_lemma1: p must lie in (0, 1)");
    if (!(V0 >= 0.0)) throw std::invalid_argument("settling_time_lemma1: V0 must be >= 0");
    if (V0 == 0.0) return 0.0;
    return std::log1p(c2 * std::pow(V0, 1.0 - p) / c1) / (c2 * (1.0 - p));
}

double settling_time_lemma2(double c1, double c2, double c3, double p1, double p2, double V0, double theta1,
                            double theta2) {
    if (!(c3 > 0.0)) throw std::invalid_argument("settling_time_lemma2: c3 must be > 0");
    if (!(p2 > 0.0 && p2 < p1)) throw std::invalid_argument("settling_time_lemma2: p2 must lie in (0, p1)");
    if (!(theta1 > 0.0 && theta1 < c1)) throw std::invalid_argument("settling_time_lemma2: theta1 must lie in (0, c1)");
    if (!(theta2 > 0.0 && theta2 < c2)) throw std::invalid_argument("settling_time_lemma2: theta2 must lie in (0, c2)");
    return settling_time_lemma1(c1 - theta1, c2 - theta2, p1, V0);
}

double theta3_residual(double theta3, double theta1, double theta2, double c3, double p1, double p2) {
    return std::pow(theta3, 1.0 - p2) * std::pow(theta2, p1 - p2) * std::pow(c3, 1.0 - p2) -
           std::pow(theta1, 1.0 - p2) * std::pow(1.0 - theta3, p1 - p2) * std::pow(c3, p1 - p2);
}

double solve_theta3(double theta1, double theta2, double c3, double p1, double p2) {
    if (!(theta1 > 0.0 && theta2 > 0.0 && c3 > 0.0))
        throw std::invalid_argument("solve_theta3: theta1, theta2, c3 must be > 0");
    if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < p1))
        throw std::invalid_argument("solve_theta3: need 0 < p2 < p1 < 1");

    auto g = [&](double t) { return theta3_residual(t, theta1, theta2, c3, p1, p2); };
    double lo = 0.0, hi = 1.0;
    double glo = g(lo), ghi = g(hi);
    if (!(glo < 0.0 && ghi > 0.0)) throw std::runtime_error("solve_theta3: root not bracketed in (0, 1)");

    constexpr double tol = 1e-12;
    double best = 0.5, gbest = g(best);
    for (int it = 0; it < 200 && std::abs(gbest) >= tol; ++it) {
        if (gbest < 0.0) {
            lo = best;
            glo = gbest;
        } else {
            hi = best;
            ghi = gbest;
        }
        // regula falsi point if it stays well inside the bracket, midpoint otherwise
        double next = lo - glo * (hi - lo) / (ghi - glo);
        const double width = hi - lo;
        if (!(next > lo + 0.05 * width && next < hi - 0.05 * width) || it % 4 == 3) next = 0.5 * (lo + hi);
        if (next <= lo || next >= hi) break;
        best = next;
        gbest = g(best);
    }
    return best;
}

ResidualLevels residual_sets(double c3, double theta1, double theta2, double theta3, double p1, double p2) {
    if (!(c3 >= 0.0)) throw std::invalid_argument("residual_sets: c3 must be >= 0");
    return {std::pow(theta3 * c3 / theta1, 1.0 / (p1 - p2)), std::pow((1.0 - theta3) * c3 / theta2, 1.0 / (1.0 - p2))};
}

ConvergenceEstimate estimate_convergence(const LyapunovCertificate& cert, const ConvergenceInputs& in) {
    if (!cert.constants_valid)
        throw std::domain_error("estimate_convergence: certificate constants invalid (a matrix is not PD)");
    if (!(in.L0 > 0.0)) throw std::invalid_argument("estimate_convergence: L0 must be > 0");
    if (!(in.V0 >= 0.0) || !(in.delta >= 0.0))
        throw std::invalid_argument("estimate_convergence: V0 and delta must be >= 0");

    const double m = cert.config.m;
    const double rate = in.L0_rate.value_or(cert.config.kappa);

    ConvergenceEstimate est{};
    est.c1 = in.L0 * cert.n1;
    est.c2 = in.L0 * cert.n3 - (2.0 * m - 2.0) / m * cert.n4 * rate / in.L0;
    est.c3 = cert.n2(in.delta);
    est.p = cert.p1;
    est.p2 = 0.5;
    est.V0 = in.V0;

    if (!(est.c2 > 0.0)) return est;  // adaptation term dominates: no bound at this L0

    if (est.c3 == 0.0) {
        est.settling_time_bound = settling_time_lemma1(est.c1, est.c2, est.p, est.V0);
        return est;
    }
    est.theta1 = in.theta1.value_or(est.c1 / 2.0);
    est.theta2 = in.theta2.value_or(est.c2 / 2.0);
    est.settling_time_bound = settling_time_lemma2(est.c1, est.c2, est.c3, est.p, est.p2, est.V0, est.theta1, est.theta2);
    est.theta3 = solve_theta3(est.theta1, est.theta2, est.c3, est.p, est.p2);
    est.residual_V_level = residual_sets(est.c3, est.theta1, est.theta2, est.theta3, est.p, est.p2).V_level_D1;
    return est;
}

}  // namespace smoothsmc
