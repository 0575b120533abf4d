#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "smoothsmc/certificate.hpp"

using namespace smoothsmc;

namespace {

GainConfig reference_gains() {
    GainConfig g;
    g.m = 3;
    g.k1 = 2;
    g.k2 = 2.5;
    g.k3 = 4;
    g.k4 = 30;
    g.kappa = 10;
    return g;
}

/// Independent root finder for the residual-set consistency condition: bisection
/// on the log form (1-p2) ln t + (p1-p2) ln θ2 + (1-p1) ln c3 - (1-p2) ln θ1 - (p1-p2) ln(1-t).
double log_bisection_theta3(double th1, double th2, double c3, double p1, double p2) {
    auto h = [&](double t) {
        return (1 - p2) * std::log(t) + (p1 - p2) * std::log(th2) + (1 - p1) * std::log(c3) - (1 - p2) * std::log(th1) -
               (p1 - p2) * std::log(1 - t);
    };
    double lo = 1e-300, hi = 1 - 1e-16;
    for (int i = 0; i < 2000 && hi - lo > 0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (h(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("certificate") {

TEST_CASE("P block for the reference gains") {
    const auto P = build_P(reference_gains());
    const SymMatrix expected = SymMatrix{{16, 5, -2}, {5, 66.25, -2.5}, {-2, -2.5, 2}}.scaled(0.5);
    CHECK(P == expected);
    CHECK(oracle::sylvester_pd(P));
    CHECK(is_positive_definite(P));
}

TEST_CASE("Q block diagonal entries") {
    const auto Q = build_Q(reference_gains());
    CHECK(Q(0, 0) == doctest::Approx(23.25));
    CHECK(Q(1, 1) == doctest::Approx(107.5));
    CHECK(Q(2, 2) == doctest::Approx(2.875));
    CHECK(Q(0, 1) == 0.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 10), mm(2.0, 8.0);
    for (int i = 0; i < 100; ++i) {
        GainConfig g{u(rng), u(rng), u(rng), u(rng), mm(rng), 1.0, 1e-3, 1.0};
        const auto q = build_Q(g);
        CHECK(q(0, 0) > 0);
        CHECK(q(1, 1) > 0);
        CHECK(q(2, 2) > 0);
    }
}

TEST_CASE("Omega tilde blocks") {
    auto [O1, O2] = build_omega_tildes(reference_gains());
    CHECK(O2(2, 2) == doctest::Approx(2.5));
    CHECK(O1(0, 0) == doctest::Approx(2.0 / 3.0 * 20.0));
    CHECK(oracle::sylvester_pd(O1));
    CHECK(oracle::sylvester_pd(O2));
    CHECK(is_positive_definite(O1));
    CHECK(is_positive_definite(O2));
}

TEST_CASE("property: certified gains give positive definite certificate matrices") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.1, 5), mm(2.05, 8.0);
    int certified = 0;
    for (int i = 0; i < 2000 && certified < 200; ++i) {
        GainConfig g{u(rng), u(rng), u(rng), 0.0, mm(rng), 1.0, 1e-3, 1.0};
        g.k4 = critical_k4(g) * (1.0 + u(rng));
        if (!check_gain_condition(g).ok()) continue;
        ++certified;
        const auto c = build_certificate(g);
        CHECK(c.all_pd());
        CHECK(c.constants_valid);
        CHECK(c.n1 > 0);
        CHECK(c.n3 > 0);
        CHECK(c.n4 > 0);
    }
    CHECK(certified == 200);
}

TEST_CASE("certificate for the reference gains") {
    const auto c = build_certificate(reference_gains());
    CHECK(c.gain_condition_ok());
    CHECK(c.all_pd());
    CHECK(c.p1 == 0.75);
    CHECK(c.Q_eig.lambda_max == doctest::Approx(107.5));
    CHECK(c.n4 == doctest::Approx(107.5 / (2 * c.P_eig.lambda_min)));
    CHECK(c.n2_coeff == doctest::Approx(std::sqrt(4 + 6.25 + 4) / std::sqrt(c.P_eig.lambda_min)));
    CHECK(c.n2(0.3) == doctest::Approx(0.3 * c.n2_coeff));

    auto g = reference_gains();
    g.m = 2;
    CHECK_THROWS_AS(build_certificate(g), std::invalid_argument);
}

TEST_CASE("uncertified gains: only the certified direction is asserted") {
    auto g = reference_gains();
    g.k4 = 20;
    const auto c = build_certificate(g);
    CHECK_FALSE(c.gain_condition_ok());
    if (!c.all_pd()) CHECK_FALSE(c.constants_valid);
}

TEST_CASE("lyapunov_value") {
    const auto P = build_P(reference_gains());
    TransformedState zero{Vec(3, 0.0), Vec(3, 0.0), Vec(3, 0.0)};
    CHECK(lyapunov_value(zero, P) == 0.0);

    TransformedState a{{1, 2, 3}, {-1, 0, 4}, {0.5, 0.5, 0.5}};
    CHECK(lyapunov_value(a, SymMatrix::identity(3)) == doctest::Approx(14 + 17 + 0.75));

    TransformedState e1{{1, 0, 0}, Vec(3, 0.0), Vec(3, 0.0)};
    CHECK(lyapunov_value(e1, P) == doctest::Approx(8.0));
}

TEST_CASE("property: blockwise V equals the full Kronecker quadratic form and respects the eigen sandwich") {
    const auto P = build_P(reference_gains());
    const auto full = kron_with_identity(P, 3);
    const auto eig = eig_sym(P);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        TransformedState xi{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
        // stacked ordering (block i, component k) -> index i*n + k
        Vec stacked;
        for (int i = 0; i < 3; ++i) stacked.insert(stacked.end(), xi[i].begin(), xi[i].end());
        double q = 0.0;
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) q += stacked[i] * full(i, j) * stacked[j];
        const double v = lyapunov_value(xi, P);
        CHECK(std::abs(v - q) <= 1e-10 * std::max(1.0, std::abs(q)));
        const double n2 = dot(stacked, stacked);
        CHECK(eig.lambda_min * n2 <= v * (1 + 1e-12));
        CHECK(v <= eig.lambda_max * n2 * (1 + 1e-12));
    }
}

TEST_CASE("property: transformed state geometry") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3, 3), l(0.5, 30), mm(2.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x1{u(rng), u(rng), u(rng)};
        const Vec x2{u(rng), u(rng), u(rng)};
        const double L0 = l(rng), m = mm(rng);
        const auto xi = transform_state(x1, x2, L0, m);
        CHECK(norm(xi.xi1) == doctest::Approx(std::pow(L0 * norm(x1), (m - 1) / m)).epsilon(1e-12));
        const double nx = norm(x1), n1 = norm(xi.xi1), n2 = norm(xi.xi2);
        for (int i = 0; i < 3; ++i) {
            CHECK(xi.xi1[i] / n1 == doctest::Approx(x1[i] / nx).epsilon(1e-12));
            CHECK(xi.xi2[i] / n2 == doctest::Approx(x1[i] / nx).epsilon(1e-12));
        }
        CHECK(xi.xi3 == x2);
    }
}

TEST_CASE("settling_time_lemma1") {
    CHECK(settling_time_lemma1(1, 1, 0.5, 0) == 0.0);
    CHECK(settling_time_lemma1(1, 1, 0.5, 1) == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-12));
    // c2 -> 0 limit: V0^(1-p) / (c1 (1-p))
    const double limit = std::pow(3.0, 0.5) / 0.5;
    CHECK(std::abs(settling_time_lemma1(1, 1e-8, 0.5, 3.0) - limit) < 1e-4);
    CHECK_THROWS(settling_time_lemma1(0, 1, 0.5, 1));
    CHECK_THROWS(settling_time_lemma1(1, 1, 1.0, 1));
}

TEST_CASE("settling_time_lemma2") {
    CHECK(settling_time_lemma2(2, 1, 1, 0.75, 0.5, 0, 1, 0.5) == 0.0);
    CHECK(settling_time_lemma2(2, 1, 1, 0.75, 0.5, 16, 1, 0.5) == doctest::Approx(8 * std::numbers::ln2).epsilon(1e-12));
    const double a = settling_time_lemma2(2, 1.5, 1, 0.75, 0.5, 7, 1e-9, 1e-9);
    CHECK(std::abs(a - settling_time_lemma1(2, 1.5, 0.75, 7)) < 1e-6);
    CHECK_THROWS(settling_time_lemma2(2, 1, 1, 0.75, 0.5, 1, 2, 0.5));
    CHECK_THROWS(settling_time_lemma2(2, 1, 1, 0.75, 0.5, 1, 1, 0));
    CHECK_THROWS(settling_time_lemma2(2, 1, 1, 0.75, 0.8, 1, 1, 0.5));
}

TEST_CASE("solve_theta3") {
    // θ^(3/4) = (1-θ)^(1/2)
    const double t = solve_theta3(1, 1, 1, 0.75, 0.25);
    CHECK(std::abs(theta3_residual(t, 1, 1, 1, 0.75, 0.25)) < 1e-12);
    CHECK(t == doctest::Approx(log_bisection_theta3(1, 1, 1, 0.75, 0.25)).epsilon(1e-10));

    // p1 -> 1 with unit constants makes the two sides symmetric about 1/2
    CHECK(solve_theta3(1, 1, 1, 1 - 1e-9, 0.25) == doctest::Approx(0.5).epsilon(1e-6));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 5);
    for (int i = 0; i < 100; ++i) {
        const double th1 = u(rng), th2 = u(rng), c3 = u(rng);
        const double got = solve_theta3(th1, th2, c3, 0.75, 0.5);
        CHECK(got == doctest::Approx(log_bisection_theta3(th1, th2, c3, 0.75, 0.5)).epsilon(1e-9));
    }
    CHECK_THROWS(solve_theta3(1, 1, 1, 0.5, 0.6));
}

TEST_CASE("residual_sets") {
    const double p1 = 0.75, p2 = 0.5;
    const double t3 = solve_theta3(0.7, 1.3, 2.2, p1, p2);
    const auto lv = residual_sets(2.2, 0.7, 1.3, t3, p1, p2);
    CHECK(std::abs(lv.V_level_D1 - lv.V_level_D2) <= 1e-9 * lv.V_level_D1);

    const auto small = residual_sets(1e-12, 0.7, 1.3, 0.4, p1, p2);
    CHECK(small.V_level_D1 < 1e-40);
    CHECK(small.V_level_D2 < 1e-20);

    const auto base = residual_sets(1.0, 0.7, 1.3, 0.4, p1, p2);
    const auto doubled = residual_sets(2.0, 0.7, 1.3, 0.4, p1, p2);
    CHECK(doubled.V_level_D1 / base.V_level_D1 == doctest::Approx(std::pow(2.0, 1 / (p1 - p2))).epsilon(1e-12));
}

TEST_CASE("dropping the c3^(p1-p2) factor equalizes the residual levels only when c3 == 1") {
    // root of θ^(1-p2) θ2^(p1-p2) c3^(1-p2) = θ1^(1-p2) (1-θ)^(p1-p2), without the c3^(p1-p2) factor
    const double p1 = 0.75, p2 = 0.5, th1 = 0.7, th2 = 1.3;
    for (double c3 : {1.0, 2.0}) {
        double lo = 0, hi = 1;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double g = std::pow(mid, 1 - p2) * std::pow(th2, p1 - p2) * std::pow(c3, 1 - p2) -
                             std::pow(th1, 1 - p2) * std::pow(1 - mid, p1 - p2);
            (g < 0 ? lo : hi) = mid;
        }
        const auto lv = residual_sets(c3, th1, th2, 0.5 * (lo + hi), p1, p2);
        const double rel = std::abs(lv.V_level_D1 - lv.V_level_D2) / lv.V_level_D1;
        if (c3 == 1.0)
            CHECK(rel < 1e-9);
        else
            CHECK(rel > 1e-3);
    }
}

TEST_CASE("estimate_convergence") {
    const auto cert = build_certificate(reference_gains());

    // large L0: the adaptation term no longer dominates
    ConvergenceInputs in;
    in.V0 = 500;
    in.L0 = 500;
    auto unperturbed = estimate_convergence(cert, in);
    REQUIRE(unperturbed.c2 > 0);
    REQUIRE(unperturbed.settling_time_bound.has_value());
    CHECK(*unperturbed.settling_time_bound == doctest::Approx(settling_time_lemma1(unperturbed.c1, unperturbed.c2, 0.75, 500)));
    CHECK_FALSE(unperturbed.residual_V_level.has_value());

    in.delta = std::sqrt(0.01 + 0.04 + 0.04);
    auto perturbed = estimate_convergence(cert, in);
    REQUIRE(perturbed.residual_V_level.has_value());
    CHECK(perturbed.c3 == doctest::Approx(in.delta * cert.n2_coeff));
    CHECK(perturbed.theta1 == doctest::Approx(perturbed.c1 / 2));
    CHECK(perturbed.theta2 == doctest::Approx(perturbed.c2 / 2));
    CHECK(perturbed.theta3 > 0);
    CHECK(perturbed.theta3 < 1);
    CHECK(*perturbed.settling_time_bound >= *unperturbed.settling_time_bound);

    // at L0 = 1 with L0' = kappa = 10 the growth term wins and no bound exists
    in.L0 = 1;
    in.delta = 0;
    auto early = estimate_convergence(cert, in);
    CHECK(early.c2 < 0);
    CHECK_FALSE(early.settling_time_bound.has_value());
}

}
