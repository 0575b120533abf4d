#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothsmc/simulation.hpp"

namespace smoothsmc {

/// Which logged quantity a metric reads.
enum class Signal {
    state,             // x1
    estimation_error,  // d_hat - d_true
    control,           // u
    estimate,          // d_hat
};

/// Per-sample Euclidean norm of the chosen signal.
std::vector<double> signal_norms(const Trajectory& traj, Signal signal);

/// Earliest logged time after which the signal norm stays below threshold; nullopt if never.
std::optional<double> settling_time(const Trajectory& traj, Signal signal, double threshold);
std::optional<double> settling_time(std::span<const double> times, std::span<const double> norms, double threshold);

constexpr double kDefaultTailFraction = 0.2;

/// Max signal norm over samples with t >= t_end - tail_fraction * (t_end - t_0).
double ultimate_bound(const Trajectory& traj, Signal signal, double tail_fraction = kDefaultTailFraction);

/**
 * Total variation per second over the tail window:
 *   sum_i |s(t_{i+1}) - s(t_i)| / (t_last - t_first), over tail samples.
 * Throws std::invalid_argument with fewer than two tail samples.
 */
double chattering_index(const Trajectory& traj, Signal signal, double tail_fraction = kDefaultTailFraction);
double chattering_index(std::span<const double> times, const std::vector<Vec>& values,
                        double tail_fraction = kDefaultTailFraction);

struct CertificateSummary {
    std::string gain_status;  // certified | uncertified | baseline-exempt
    std::optional<bool> all_pd;
    std::optional<double> p1;
    std::optional<double> n1, n2_coeff, n3, n4;
};

struct ExperimentReport {
    std::string method_id;
    std::string scenario_id;
    std::optional<double> settling_time;  // nullopt = not settled
    double settling_threshold;
    double ultimate_bound;
    double chattering_index;
    double final_L0;
    double dt_used;
    double horizon;
    double tail_fraction = kDefaultTailFraction;
    std::optional<CertificateSummary> certificate;
};

}  // namespace smoothsmc
