#include <doctest.h>

#include <cmath>
#include <random>

#include "smoothsmc/metrics.hpp"

using namespace smoothsmc;

namespace {

std::vector<double> grid(std::size_t n, double dt) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * dt;
    return t;
}

Trajectory scalar_traj(const std::vector<double>& times, const std::vector<double>& values) {
    Trajectory tr;
    tr.times = times;
    tr.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    for (double v : values) {
        tr.x1.push_back({v});
        tr.u.push_back({v});
        tr.d_true.push_back({0.0});
    }
    return tr;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("settling_time examples") {
    const auto t = grid(101, 0.01);
    std::vector<double> zero(t.size(), 0.0);
    CHECK(settling_time(t, zero, 0.1) == 0.0);

    std::vector<double> ramp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ramp[i] = 1.0 - t[i];
    CHECK(settling_time(t, ramp, 0.015) == doctest::Approx(0.99));

    // dips below, comes back, settles for good later
    std::vector<double> bump(t.size(), 0.0);
    bump[0] = 1.0;
    bump[40] = 0.5;
    CHECK(settling_time(t, bump, 0.1) == doctest::Approx(0.41));

    std::vector<double> never(t.size(), 1.0);
    CHECK_FALSE(settling_time(t, never, 0.1).has_value());
    never.back() = 0.0;
    CHECK(settling_time(t, never, 0.1) == doctest::Approx(1.0));

    CHECK_THROWS(settling_time(t, zero, 0.0));
}

TEST_CASE("ultimate_bound examples") {
    const auto t = grid(11, 1.0);
    std::vector<double> v{5, 4, 3, 2, 1, 0, 0, 0, 0.5, 0.25, 0.125};
    // tail covers t >= 8
    CHECK(ultimate_bound(scalar_traj(t, v), Signal::state) == 0.5);
    CHECK(ultimate_bound(scalar_traj(t, v), Signal::state, 0.5) == 0.5);
    CHECK(ultimate_bound(scalar_traj(t, v), Signal::state, 0.6) == 1.0);
    CHECK_THROWS(ultimate_bound(scalar_traj(t, v), Signal::state, 1.0));
    CHECK_THROWS(ultimate_bound(scalar_traj(t, v), Signal::estimate));
}

TEST_CASE("chattering_index examples") {
    const double dt = 1e-3, a = 0.3;
    const auto t = grid(10001, dt);
    std::vector<Vec> square(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) square[i] = {i % 2 ? a : -a};
    CHECK(chattering_index(t, square, 0.2) == doctest::Approx(2 * a / dt).epsilon(1e-9));

    std::vector<Vec> flat(t.size(), Vec{1.0, 2.0});
    CHECK(chattering_index(t, flat) == 0.0);

    // linear ramp with slope s: variation per second is |s|
    std::vector<Vec> ramp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ramp[i] = {-3.0 * t[i], 4.0 * t[i]};
    CHECK(chattering_index(t, ramp) == doctest::Approx(5.0).epsilon(1e-9));

    const std::vector<double> two{0.0, 1.0};
    CHECK_THROWS_AS(chattering_index(two, std::vector<Vec>{{0.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("estimation error signal") {
    Trajectory tr = scalar_traj(grid(3, 1.0), {0, 0, 0});
    tr.d_true = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
    tr.d_hat = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}};
    const auto n = signal_norms(tr, Signal::estimation_error);
    CHECK(n == std::vector<double>{1.0, 1.0, 0.0});
    CHECK(settling_time(tr, Signal::estimation_error, 0.5) == 2.0);
}

TEST_CASE("property: metric scaling, threshold monotonicity, tail containment") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1, 1), s(0.1, 10);
    const auto t = grid(501, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(t.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-3 * t[i]) * u(rng);
        const auto tr = scalar_traj(t, v);
        const double c = s(rng);
        std::vector<double> cv(v);
        for (auto& x : cv) x *= c;
        const auto trc = scalar_traj(t, cv);

        CHECK(chattering_index(trc, Signal::control) == doctest::Approx(c * chattering_index(tr, Signal::control)));
        CHECK(ultimate_bound(trc, Signal::state) == doctest::Approx(c * ultimate_bound(tr, Signal::state)));

        const auto norms = signal_norms(tr, Signal::state);
        std::optional<double> prev;
        for (double thr : {0.01, 0.05, 0.1, 0.5, 1.1}) {
            const auto ts = settling_time(t, norms, thr);
            if (prev && ts) CHECK(*ts <= *prev);
            if (prev) CHECK(ts.has_value());
            if (ts) {
                for (std::size_t i = 0; i < t.size(); ++i)
                    if (t[i] >= *ts) CHECK(norms[i] < thr);
                prev = ts;
            }
        }

        const double ub = ultimate_bound(tr, Signal::state);
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] >= t.back() - 0.2 * (t.back() - t.front())) CHECK(norms[i] <= ub);
    }
}

}
