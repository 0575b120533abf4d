#include "smoothsmc/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace smoothsmc {

namespace {

const std::vector<Vec>& signal_values(const Trajectory& traj, Signal signal) {
    switch (signal) {
        case Signal::state: return traj.x1;
        case Signal::control: return traj.u;
        case Signal::estimate:
        case Signal::estimation_error:
            if (traj.d_hat.size() != traj.size())
                throw std::invalid_argument("metrics: trajectory has no disturbance estimate");
            return traj.d_hat;
    }
    return traj.x1;
}

std::size_t tail_start(std::span<const double> times, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("metrics: tail_fraction must lie in (0, 1)");
    if (times.empty()) throw std::invalid_argument("metrics: empty trajectory");
    const double cut = times.back() - tail_fraction * (times.back() - times.front());
    return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), cut) - times.begin());
}

}  // namespace

std::vector<double> signal_norms(const Trajectory& traj, Signal signal) {
    std::vector<double> out(traj.size());
    if (signal == Signal::estimation_error) {
        const auto& dh = signal_values(traj, signal);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm(difference(dh[i], traj.d_true[i]));
        return out;
    }
    const auto& vals = signal_values(traj, signal);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm(vals[i]);
    return out;
}

std::optional<double> settling_time(std::span<const double> times, std::span<const double> norms, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("settling_time: threshold must be > 0");
    require_same_dim(times.size(), norms.size(), "settling_time");
    if (times.empty()) return std::nullopt;
    for (std::size_t i = norms.size(); i-- > 0;) {
        if (!(norms[i] < threshold)) {
            if (i + 1 == norms.size()) return std::nullopt;
            return times[i + 1];
        }
    }
    return times.front();
}

std::optional<double> settling_time(const Trajectory& traj, Signal signal, double threshold) {
    const auto norms = signal_norms(traj, signal);
    return settling_time(traj.times, norms, threshold);
}

double ultimate_bound(const Trajectory& traj, Signal signal, double tail_fraction) {
    const std::size_t start = tail_start(traj.times, tail_fraction);
    const auto norms = signal_norms(traj, signal);
    double bound = 0.0;
    for (std::size_t i = start; i < norms.size(); ++i) bound = std::max(bound, norms[i]);
    return bound;
}

double chattering_index(std::span<const double> times, const std::vector<Vec>& values, double tail_fraction) {
    require_same_dim(times.size(), values.size(), "chattering_index");
    const std::size_t start = tail_start(times, tail_fraction);
    if (times.size() - start < 2) throw std::invalid_argument("chattering_index: fewer than 2 tail samples");
    double total = 0.0;
    for (std::size_t i = start; i + 1 < values.size(); ++i) total += norm(difference(values[i + 1], values[i]));
    return total / (times.back() - times[start]);
}

double chattering_index(const Trajectory& traj, Signal signal, double tail_fraction) {
    if (signal == Signal::estimation_error) {
        const auto& dh = signal_values(traj, signal);
        std::vector<Vec> err(traj.size());
        for (std::size_t i = 0; i < err.size(); ++i) err[i] = difference(dh[i], traj.d_true[i]);
        return chattering_index(traj.times, err, tail_fraction);
    }
    return chattering_index(traj.times, signal_values(traj, signal), tail_fraction);
}

}  // namespace smoothsmc
