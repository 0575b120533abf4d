#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smoothsmc/laws.hpp"
#include "smoothsmc/metrics.hpp"
#include "smoothsmc/simulation.hpp"

namespace smoothsmc {

enum class Experiment { exp1, exp2, exp3, custom };
enum class Method { amssosmc, amstsmc_baseline, amsdo, amdo_baseline };

std::string_view to_string(Experiment e);
std::string_view to_string(Method m);
Experiment parse_experiment(std::string_view s);  // throws UsageError
Method parse_method(std::string_view s);          // throws UsageError

bool is_observer(Method m);
bool is_baseline(Method m);

/// Bad experiment/method pairing, unknown labels, empty grids.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Built-in scenario disturbances.
DisturbanceSpec preset_disturbance(Experiment e);

/// Every field optional; unset fields fall back to the preset or default.
struct RunOverrides {
    std::optional<double> dt, horizon;
    std::optional<double> m, k1, k2, k3, k4, kappa, epsilon, L0_init;
    std::optional<Vec> x1_init;
    std::optional<int> log_stride;
    std::optional<double> singular_tol;
    std::optional<DisturbanceSpec> disturbance;  // required for custom
};

/// Fully resolved run: all defaults materialized.
struct RunSpec {
    Experiment experiment;
    Method method;
    GainConfig gains;
    SimConfig sim;
    DisturbanceSpec disturbance;
};

RunSpec resolve_run_spec(Experiment experiment, Method method, const RunOverrides& overrides = {});

struct CellResult {
    RunSpec spec;
    Trajectory trajectory;
    ExperimentReport report;
};

/// Settling threshold: 1% of |x1(0)| for controllers, 0.05 absolute on the estimation error for observers.
double default_settling_threshold(const RunSpec& spec);

CertificateSummary summarize_certificate(const GainConfig& cfg);

ExperimentReport make_report(const RunSpec& spec, const Trajectory& traj);

/// Runs one (experiment, method) cell; throws NumericalAbort on blow-up.
CellResult run_cell(const RunSpec& spec);

/// Independent cells run concurrently; results keep input order.
std::vector<CellResult> run_cells(const std::vector<RunSpec>& specs, bool parallel = true);

/// For each (smooth, baseline) pair present, the smooth method must chatter strictly less.
bool smooth_orderings_hold(const std::vector<ExperimentReport>& reports);

enum class SweepParameter { m, k4, kappa, epsilon };
SweepParameter parse_sweep_parameter(std::string_view s);
std::string_view to_string(SweepParameter p);

struct SweepRow {
    SweepParameter parameter;
    double value;
    ExperimentReport report;
};

std::vector<SweepRow> run_sweep(const RunSpec& base, SweepParameter parameter, const std::vector<double>& values,
                                bool parallel = true);

void write_comparison_csv(const std::vector<ExperimentReport>& reports, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace smoothsmc
