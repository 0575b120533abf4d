#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "smoothsmc/laws.hpp"
#include "smoothsmc/matrix.hpp"
#include "smoothsmc/vec.hpp"

namespace smoothsmc {

struct SinusoidChannel {
    double amplitude = 0.0;
    double frequency = 0.0;  // rad/s
    bool cosine = false;     // cos instead of sin
};

/// Matched disturbance d1(t) acting on the integrator plant.
struct DisturbanceSpec {
    enum class Kind { none, constant, sinusoid_mix };

    Kind kind = Kind::none;
    std::size_t dim = 3;
    Vec constant_value;
    std::vector<SinusoidChannel> channels;  // one per component

    static DisturbanceSpec none(std::size_t dim);
    static DisturbanceSpec constant(Vec value);
    static DisturbanceSpec sinusoids(std::vector<SinusoidChannel> channels);

    /// sup_t |d(t)|
    double norm_bound() const;
    /// sup_t |d'(t)|
    double derivative_bound() const;
};

std::string_view to_string(DisturbanceSpec::Kind kind);

Vec disturbance_at(const DisturbanceSpec& spec, double t);

struct SimConfig {
    double dt = 1e-3;
    double horizon = 10.0;
    Vec x1_init{1.0, 3.0, 2.0};
    double singular_tol = kDefaultSingularTol;
    int log_stride = 1;

    void validate() const;
    std::size_t steps() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> x1;
    std::vector<Vec> u;
    std::vector<Vec> d_true;
    std::vector<Vec> d_hat;   // observer runs only
    std::vector<double> L0;   // empty for laws without adaptation
    std::vector<double> V;    // only when a Lyapunov matrix is attached
    double dt = 0.0;      // integration step
    int log_stride = 1;

    std::size_t size() const { return times.size(); }
    std::size_t dim() const { return x1.empty() ? 0 : x1.front().size(); }
};

/// State blew up; carries the step index and a snapshot of x1.
class NumericalAbort : public std::runtime_error {
public:
    NumericalAbort(std::size_t step, double t, Vec state);
    std::size_t step;
    double time;
    Vec state;
};

/**
 * Sampled feedback law. control() is called once per major step, returns the
 * held control and advances the law's internal state by dt.
 */
class FeedbackLaw {
public:
    virtual ~FeedbackLaw() = default;
    virtual std::unique_ptr<FeedbackLaw> clone() const = 0;
    virtual void reset(std::size_t dim) = 0;
    virtual Vec control(double t, std::span<const double> x1, double dt) = 0;

    /// Current L0 for adaptive laws.
    virtual std::optional<double> adaptive_gain() const { return std::nullopt; }
    /// Integral term for laws of the smooth sliding-mode family.
    virtual std::optional<Vec> integral_term() const { return std::nullopt; }
    virtual std::optional<GainConfig> gain_config() const { return std::nullopt; }
};

class ZeroControl final : public FeedbackLaw {
public:
    std::unique_ptr<FeedbackLaw> clone() const override { return std::make_unique<ZeroControl>(*this); }
    void reset(std::size_t) override {}
    Vec control(double, std::span<const double> x1, double) override { return Vec(x1.size(), 0.0); }
};

/// The adaptive smooth second-order controller (m > 2) or its super-twisting baseline (m == 2).
class AdaptiveSmoothController final : public FeedbackLaw {
public:
    explicit AdaptiveSmoothController(GainConfig cfg, double singular_tol = kDefaultSingularTol);

    std::unique_ptr<FeedbackLaw> clone() const override { return std::make_unique<AdaptiveSmoothController>(*this); }
    void reset(std::size_t dim) override;
    Vec control(double t, std::span<const double> x1, double dt) override;
    std::optional<double> adaptive_gain() const override { return state_.L0; }
    std::optional<Vec> integral_term() const override { return state_.integral_term; }
    std::optional<GainConfig> gain_config() const override { return cfg_; }

    const ControllerState& state() const { return state_; }

private:
    GainConfig cfg_;
    double singular_tol_;
    ControllerState state_;
};

/// One RK4 step of x' = f(t, x).
Vec rk4_step(const std::function<Vec(double, std::span<const double>)>& f, double t, std::span<const double> x,
             double dt);

/**
 * Integrates x1' = u + d1(t) with u held over each major step and the plant
 * advanced by classical RK4 (d1 sampled at the stage times). When P_block is
 * given and the law exposes its integral term, V is logged using
 * x2 = d1(t) - integral.
 */
Trajectory simulate_closed_loop(const FeedbackLaw& law, const SimConfig& sim, const DisturbanceSpec& dist,
                                const std::optional<SymMatrix>& P_block = std::nullopt);

/// Plant input for observer runs: a live plant under a control function, or a recorded trajectory.
struct LivePlant {
    std::function<Vec(double t, std::span<const double> x1)> control;  // empty means u = 0
};
struct RecordedPlant {
    const Trajectory* trajectory;
};
using ObserverPlantSource = std::variant<LivePlant, RecordedPlant>;

/// Runs the disturbance observer against the measured x1 stream. z1 starts at x1(0).
Trajectory simulate_observer(const ObserverPlantSource& source, const GainConfig& cfg, const SimConfig& sim,
                             const DisturbanceSpec& dist);

/// CSV with header t,x11..,u1..,d1..,dhat1..,L0,V; absent columns omitted; 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Inverse of write_trajectory_csv; dt is taken from the first two time stamps.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace smoothsmc
