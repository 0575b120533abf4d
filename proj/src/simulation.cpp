#include "smoothsmc/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smoothsmc/certificate.hpp"

namespace smoothsmc {

DisturbanceSpec DisturbanceSpec::none(std::size_t dim) {
    DisturbanceSpec s;
    s.kind = Kind::none;
    s.dim = dim;
    return s;
}

DisturbanceSpec DisturbanceSpec::constant(Vec value) {
    DisturbanceSpec s;
    s.kind = Kind::constant;
    s.dim = value.size();
    s.constant_value = std::move(value);
    return s;
}

DisturbanceSpec DisturbanceSpec::sinusoids(std::vector<SinusoidChannel> channels) {
    DisturbanceSpec s;
    s.kind = Kind::sinusoid_mix;
    s.dim = channels.size();
    s.channels = std::move(channels);
    return s;
}

double DisturbanceSpec::norm_bound() const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::constant: return norm(constant_value);
        case Kind::sinusoid_mix: {
            double s = 0.0;
            for (const auto& c : channels) s += c.amplitude * c.amplitude;
            return std::sqrt(s);
        }
    }
    return 0.0;
}

double DisturbanceSpec::derivative_bound() const {
    if (kind != Kind::sinusoid_mix) return 0.0;
    double s = 0.0;
    for (const auto& c : channels) s += (c.amplitude * c.frequency) * (c.amplitude * c.frequency);
    return std::sqrt(s);
}

std::string_view to_string(DisturbanceSpec::Kind kind) {
    switch (kind) {
        case DisturbanceSpec::Kind::none: return "none";
        case DisturbanceSpec::Kind::constant: return "constant";
        case DisturbanceSpec::Kind::sinusoid_mix: return "sinusoid-mix";
    }
    return "unknown";
}

Vec disturbance_at(const DisturbanceSpec& spec, double t) {
    switch (spec.kind) {
        case DisturbanceSpec::Kind::none: return Vec(spec.dim, 0.0);
        case DisturbanceSpec::Kind::constant: return spec.constant_value;
        case DisturbanceSpec::Kind::sinusoid_mix: {
            Vec d(spec.channels.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                const auto& c = spec.channels[i];
                const double arg = c.frequency * t;
                d[i] = c.amplitude * (c.cosine ? std::cos(arg) : std::sin(arg));
            }
            return d;
        }
    }
    return Vec(spec.dim, 0.0);
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
    if (!(horizon > dt)) throw std::invalid_argument("SimConfig: horizon must exceed dt");
    if (log_stride < 1) throw std::invalid_argument("SimConfig: log_stride must be >= 1");
    if (x1_init.empty()) throw std::invalid_argument("SimConfig: x1_init must be non-empty");
    if (!(singular_tol > 0.0)) throw std::invalid_argument("SimConfig: singular_tol must be > 0");
}

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

namespace {

std::string snapshot(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ']';
    return os.str();
}

void require_dist_dim(const DisturbanceSpec& dist, std::size_t n) {
    const std::size_t dim = dist.kind == DisturbanceSpec::Kind::constant ? dist.constant_value.size()
                            : dist.kind == DisturbanceSpec::Kind::sinusoid_mix ? dist.channels.size()
                                                                                 : dist.dim;
    require_same_dim(dim, n, "disturbance");
}

}  // namespace

NumericalAbort::NumericalAbort(std::size_t step_index, double t, Vec x)
    : std::runtime_error("numerical abort at step " + std::to_string(step_index) + " (t=" + std::to_string(t) +
                         "): state " + snapshot(x)),
      step(step_index),
      time(t),
      state(std::move(x)) {}

AdaptiveSmoothController::AdaptiveSmoothController(GainConfig cfg, double singular_tol)
    : cfg_(cfg), singular_tol_(singular_tol), state_(ControllerState::initial(0, cfg)) {
    cfg_.validate();
}

void AdaptiveSmoothController::reset(std::size_t dim) {
    state_ = ControllerState::initial(dim, cfg_);
}

Vec AdaptiveSmoothController::control(double, std::span<const double> x1, double dt) {
    auto out = controller_step(x1, state_, cfg_, dt, singular_tol_);
    state_ = std::move(out.next);
    return std::move(out.u);
}

Vec rk4_step(const std::function<Vec(double, std::span<const double>)>& f, double t, std::span<const double> x,
             double dt) {
    const std::size_t n = x.size();
    Vec tmp(n);
    const Vec k1 = f(t, x);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const Vec k2 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const Vec k3 = f(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    const Vec k4 = f(t + dt, tmp);
    Vec out(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Trajectory simulate_closed_loop(const FeedbackLaw& law, const SimConfig& sim, const DisturbanceSpec& dist,
                                const std::optional<SymMatrix>& P_block) {
    sim.validate();
    const std::size_t n = sim.x1_init.size();
    require_dist_dim(dist, n);

    auto active = law.clone();
    active->reset(n);
    const auto gains = active->gain_config();
    const bool log_V = P_block.has_value() && gains.has_value() && active->integral_term().has_value();

    Trajectory traj;
    traj.dt = sim.dt;
    traj.log_stride = sim.log_stride;
    const std::size_t N = sim.steps();
    const std::size_t samples = N / static_cast<std::size_t>(sim.log_stride) + 1;
    traj.times.reserve(samples);
    traj.x1.reserve(samples);
    traj.u.reserve(samples);
    traj.d_true.reserve(samples);

    Vec x = sim.x1_init;
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * sim.dt;
        const Vec d = disturbance_at(dist, t);
        const bool log = i % static_cast<std::size_t>(sim.log_stride) == 0;

        const auto L0 = active->adaptive_gain();
        std::optional<double> V;
        if (log && log_V) {
            Vec x2 = d;
            axpy(-1.0, *active->integral_term(), x2);
            V = lyapunov_value(transform_state(x, x2, *L0, gains->m, sim.singular_tol), *P_block);
        }

        Vec u = active->control(t, x, sim.dt);
        if (!all_finite(u)) throw NumericalAbort(i, t, x);

        if (log) {
            traj.times.push_back(t);
            traj.x1.push_back(x);
            traj.u.push_back(u);
            traj.d_true.push_back(d);
            if (L0) traj.L0.push_back(*L0);
            if (V) traj.V.push_back(*V);
        }
        if (i == N) break;

        x = rk4_step([&](double s, std::span<const double>) {
                Vec rhs = disturbance_at(dist, s);
                axpy(1.0, u, rhs);
                return rhs;
            },
            t, x, sim.dt);
        if (!all_finite(x)) throw NumericalAbort(i + 1, t + sim.dt, x);
    }
    return traj;
}

Trajectory simulate_observer(const ObserverPlantSource& source, const GainConfig& cfg, const SimConfig& sim,
                             const DisturbanceSpec& dist) {
    sim.validate();
    cfg.validate();

    Trajectory traj;
    traj.log_stride = sim.log_stride;
    const auto stride = static_cast<std::size_t>(sim.log_stride);

    auto log_sample = [&](std::size_t i, double t, const Vec& x, const Vec& u, const Vec& d, const ObserverOutput& out,
                          double L0) {
        if (i % stride != 0) return;
        traj.times.push_back(t);
        traj.x1.push_back(x);
        traj.u.push_back(u);
        traj.d_true.push_back(d);
        traj.d_hat.push_back(out.d_hat);
        traj.L0.push_back(L0);
    };
    auto check = [](std::size_t i, double t, const ObserverState& s) {
        if (!all_finite(s.z1) || !all_finite(s.integral_term) || !all_finite(s.d_hat)) throw NumericalAbort(i, t, s.z1);
    };

    if (const auto* live = std::get_if<LivePlant>(&source)) {
        const std::size_t n = sim.x1_init.size();
        require_dist_dim(dist, n);
        traj.dt = sim.dt;
        const std::size_t N = sim.steps();
        Vec x = sim.x1_init;
        ObserverState state = ObserverState::initial(x, cfg);
        for (std::size_t i = 0;; ++i) {
            const double t = static_cast<double>(i) * sim.dt;
            const Vec d = disturbance_at(dist, t);
            const Vec u = live->control ? live->control(t, x) : Vec(n, 0.0);
            const double L0 = state.L0;
            ObserverOutput out = observer_step(x, u, state, cfg, sim.dt, sim.singular_tol);
            log_sample(i, t, x, u, d, out, L0);
            state = std::move(out.next);
            check(i + 1, t + sim.dt, state);
            if (i == N) break;
            x = rk4_step([&](double s, std::span<const double>) {
                    Vec rhs = disturbance_at(dist, s);
                    axpy(1.0, u, rhs);
                    return rhs;
                },
                t, x, sim.dt);
            if (!all_finite(x)) throw NumericalAbort(i + 1, t + sim.dt, x);
        }
        return traj;
    }

    const Trajectory& rec = *std::get<RecordedPlant>(source).trajectory;
    if (rec.size() < 2) throw std::invalid_argument("simulate_observer: recorded trajectory needs >= 2 samples");
    if (rec.log_stride != 1) throw std::invalid_argument("simulate_observer: recorded trajectory must log every step");
    const double dt = rec.dt > 0.0 ? rec.dt : rec.times[1] - rec.times[0];
    traj.dt = dt;
    const std::size_t n = rec.dim();
    ObserverState state = ObserverState::initial(rec.x1.front(), cfg);
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double t = rec.times[i];
        const Vec u = rec.u.empty() ? Vec(n, 0.0) : rec.u[i];
        const Vec d = rec.d_true.empty() ? disturbance_at(dist, t) : rec.d_true[i];
        const double L0 = state.L0;
        ObserverOutput out = observer_step(rec.x1[i], u, state, cfg, dt, sim.singular_tol);
        log_sample(i, t, rec.x1[i], u, d, out, L0);
        state = std::move(out.next);
        check(i + 1, t + dt, state);
    }
    return traj;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const std::size_t n = traj.dim();
    const bool has_dhat = !traj.d_hat.empty();
    const bool has_L0 = !traj.L0.empty();
    const bool has_V = !traj.V.empty();

    out << 't';
    for (std::size_t i = 1; i <= n; ++i) out << ",x1" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",u" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",d" << i;
    if (has_dhat)
        for (std::size_t i = 1; i <= n; ++i) out << ",dhat" << i;
    if (has_L0) out << ",L0";
    if (has_V) out << ",V";
    out << '\n';

    auto row_vec = [&](const Vec& v) {
        for (double x : v) {
            out << ',';
            put(out, x);
        }
    };
    for (std::size_t k = 0; k < traj.size(); ++k) {
        put(out, traj.times[k]);
        row_vec(traj.x1[k]);
        row_vec(traj.u[k]);
        row_vec(traj.d_true[k]);
        if (has_dhat) row_vec(traj.d_hat[k]);
        if (has_L0) {
            out << ',';
            put(out, traj.L0[k]);
        }
        if (has_V) {
            out << ',';
            put(out, traj.V[k]);
        }
        out << '\n';
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_trajectory_csv(traj, out);
    if (!out) throw std::runtime_error("failed writing " + path);
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_trajectory_csv: empty input");

    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    if (cols.empty() || cols[0] != "t") throw std::runtime_error("read_trajectory_csv: header must start with t");

    std::size_t n = 0;
    while (n + 1 < cols.size() && cols[n + 1] == "x1" + std::to_string(n + 1)) ++n;
    if (n == 0) throw std::runtime_error("read_trajectory_csv: no x1 columns");
    auto has = [&](const std::string& name) {
        for (const auto& c : cols)
            if (c == name) return true;
        return false;
    };
    const bool has_dhat = has("dhat1");
    const bool has_L0 = has("L0");
    const bool has_V = has("V");
    const std::size_t expected = 1 + 3 * n + (has_dhat ? n : 0) + (has_L0 ? 1 : 0) + (has_V ? 1 : 0);
    if (cols.size() != expected) throw std::runtime_error("read_trajectory_csv: unexpected header layout");

    Trajectory traj;
    std::vector<double> row(expected);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* p = line.c_str();
        for (std::size_t k = 0; k < expected; ++k) {
            char* end = nullptr;
            row[k] = std::strtod(p, &end);
            if (end == p) throw std::runtime_error("read_trajectory_csv: malformed number in: " + line);
            p = end;
            if (*p == ',') ++p;
        }
        std::size_t k = 0;
        traj.times.push_back(row[k++]);
        auto take = [&](std::vector<Vec>& dst) {
            dst.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(k), row.begin() + static_cast<std::ptrdiff_t>(k + n));
            k += n;
        };
        take(traj.x1);
        take(traj.u);
        take(traj.d_true);
        if (has_dhat) take(traj.d_hat);
        if (has_L0) traj.L0.push_back(row[k++]);
        if (has_V) traj.V.push_back(row[k++]);
    }
    if (traj.size() >= 2) traj.dt = traj.times[1] - traj.times[0];
    return traj;
}

}  // namespace smoothsmc
