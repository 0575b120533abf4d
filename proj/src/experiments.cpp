#include "smoothsmc/experiments.hpp"

#include <cstdio>
#include <future>
#include <ostream>

#include "smoothsmc/certificate.hpp"

namespace smoothsmc {

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::exp1: return "exp1";
        case Experiment::exp2: return "exp2";
        case Experiment::exp3: return "exp3";
        case Experiment::custom: return "custom";
    }
    return "unknown";
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::amssosmc: return "amssosmc";
        case Method::amstsmc_baseline: return "amstsmc-baseline";
        case Method::amsdo: return "amsdo";
        case Method::amdo_baseline: return "amdo-baseline";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view s) {
    for (auto e : {Experiment::exp1, Experiment::exp2, Experiment::exp3, Experiment::custom})
        if (to_string(e) == s) return e;
    throw UsageError("unknown experiment '" + std::string(s) + "' (expected exp1, exp2, exp3, custom)");
}

Method parse_method(std::string_view s) {
    for (auto m : {Method::amssosmc, Method::amstsmc_baseline, Method::amsdo, Method::amdo_baseline})
        if (to_string(m) == s) return m;
    throw UsageError("unknown method '" + std::string(s) +
                     "' (expected amssosmc, amstsmc-baseline, amsdo, amdo-baseline)");
}

bool is_observer(Method m) { return m == Method::amsdo || m == Method::amdo_baseline; }
bool is_baseline(Method m) { return m == Method::amstsmc_baseline || m == Method::amdo_baseline; }

DisturbanceSpec preset_disturbance(Experiment e) {
    switch (e) {
        case Experiment::exp1: return DisturbanceSpec::constant({0.1, 0.2, 0.2});
        case Experiment::exp2: return DisturbanceSpec::sinusoids({{0.1, 1.0, false}, {0.2, 4.0, true}, {0.2, 2.0, true}});
        case Experiment::exp3: return DisturbanceSpec::sinusoids({{1.0, 1.0, false}, {2.0, 4.0, true}, {2.0, 2.0, true}});
        case Experiment::custom: break;
    }
    throw UsageError("custom experiment has no preset disturbance");
}

RunSpec resolve_run_spec(Experiment experiment, Method method, const RunOverrides& o) {
    if (experiment == Experiment::exp3 && !is_observer(method))
        throw UsageError("exp3 is an observer experiment; use amsdo or amdo-baseline");
    if ((experiment == Experiment::exp1 || experiment == Experiment::exp2) && is_observer(method))
        throw UsageError(std::string(to_string(experiment)) + " is a controller experiment; use amssosmc or amstsmc-baseline");
    if (experiment == Experiment::custom && (!o.disturbance || !o.x1_init))
        throw UsageError("custom experiment requires an inline disturbance and x1_init");

    RunSpec spec{experiment, method, GainConfig{}, SimConfig{}, {}};
    GainConfig& g = spec.gains;
    g.m = is_baseline(method) ? 2.0 : 3.0;
    if (o.m) g.m = *o.m;
    if (o.k1) g.k1 = *o.k1;
    if (o.k2) g.k2 = *o.k2;
    if (o.k3) g.k3 = *o.k3;
    if (o.k4) g.k4 = *o.k4;
    if (o.kappa) g.kappa = *o.kappa;
    if (o.epsilon) g.epsilon = *o.epsilon;
    if (o.L0_init) g.L0_init = *o.L0_init;
    g.validate();

    SimConfig& s = spec.sim;
    if (o.dt) s.dt = *o.dt;
    if (o.horizon) s.horizon = *o.horizon;
    if (o.x1_init) s.x1_init = *o.x1_init;
    if (o.log_stride) s.log_stride = *o.log_stride;
    if (o.singular_tol) s.singular_tol = *o.singular_tol;
    s.validate();

    spec.disturbance = o.disturbance ? *o.disturbance : preset_disturbance(experiment);
    return spec;
}

double default_settling_threshold(const RunSpec& spec) {
    return is_observer(spec.method) ? 0.05 : 0.01 * norm(spec.sim.x1_init);
}

CertificateSummary summarize_certificate(const GainConfig& cfg) {
    CertificateSummary s;
    const GainCheck check = check_gain_condition(cfg);
    s.gain_status = std::string(to_string(check.status));
    if (check.status == GainStatus::baseline_exempt) return s;
    const auto cert = build_certificate(cfg);
    s.all_pd = cert.all_pd();
    s.p1 = cert.p1;
    if (cert.constants_valid) {
        s.n1 = cert.n1;
        s.n2_coeff = cert.n2_coeff;
        s.n3 = cert.n3;
        s.n4 = cert.n4;
    }
    return s;
}

ExperimentReport make_report(const RunSpec& spec, const Trajectory& traj) {
    const bool obs = is_observer(spec.method);
    const Signal tracked = obs ? Signal::estimation_error : Signal::state;
    const Signal smoothness = obs ? Signal::estimate : Signal::control;

    ExperimentReport r;
    r.method_id = std::string(to_string(spec.method));
    r.scenario_id = std::string(to_string(spec.experiment));
    r.settling_threshold = default_settling_threshold(spec);
    r.settling_time = settling_time(traj, tracked, r.settling_threshold);
    r.ultimate_bound = ultimate_bound(traj, tracked);
    r.chattering_index = chattering_index(traj, smoothness);
    r.final_L0 = traj.L0.empty() ? spec.gains.L0_init : traj.L0.back();
    r.dt_used = spec.sim.dt;
    r.horizon = spec.sim.horizon;
    r.certificate = summarize_certificate(spec.gains);
    return r;
}

CellResult run_cell(const RunSpec& spec) {
    Trajectory traj;
    if (is_observer(spec.method)) {
        traj = simulate_observer(LivePlant{}, spec.gains, spec.sim, spec.disturbance);
    } else {
        AdaptiveSmoothController law(spec.gains, spec.sim.singular_tol);
        traj = simulate_closed_loop(law, spec.sim, spec.disturbance, build_P(spec.gains));
    }
    ExperimentReport report = make_report(spec, traj);
    return {spec, std::move(traj), std::move(report)};
}

std::vector<CellResult> run_cells(const std::vector<RunSpec>& specs, bool parallel) {
    std::vector<CellResult> out;
    out.reserve(specs.size());
    if (!parallel) {
        for (const auto& s : specs) out.push_back(run_cell(s));
        return out;
    }
    std::vector<std::future<CellResult>> pending;
    pending.reserve(specs.size());
    for (const auto& s : specs) pending.push_back(std::async(std::launch::async, [s] { return run_cell(s); }));
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

bool smooth_orderings_hold(const std::vector<ExperimentReport>& reports) {
    auto find = [&](std::string_view method, const std::string& scenario) -> const ExperimentReport* {
        for (const auto& r : reports)
            if (r.method_id == method && r.scenario_id == scenario) return &r;
        return nullptr;
    };
    for (const auto& r : reports) {
        const ExperimentReport* baseline = nullptr;
        if (r.method_id == to_string(Method::amssosmc)) baseline = find(to_string(Method::amstsmc_baseline), r.scenario_id);
        if (r.method_id == to_string(Method::amsdo)) baseline = find(to_string(Method::amdo_baseline), r.scenario_id);
        if (baseline && !(r.chattering_index < baseline->chattering_index)) return false;
    }
    return true;
}

SweepParameter parse_sweep_parameter(std::string_view s) {
    for (auto p : {SweepParameter::m, SweepParameter::k4, SweepParameter::kappa, SweepParameter::epsilon})
        if (to_string(p) == s) return p;
    throw UsageError("unknown sweep parameter '" + std::string(s) + "' (expected m, k4, kappa, epsilon)");
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::m: return "m";
        case SweepParameter::k4: return "k4";
        case SweepParameter::kappa: return "kappa";
        case SweepParameter::epsilon: return "epsilon";
    }
    return "unknown";
}

std::vector<SweepRow> run_sweep(const RunSpec& base, SweepParameter parameter, const std::vector<double>& values,
                                bool parallel) {
    if (values.empty()) throw UsageError("sweep grid is empty");
    std::vector<RunSpec> specs;
    specs.reserve(values.size());
    for (double v : values) {
        RunSpec s = base;
        switch (parameter) {
            case SweepParameter::m: s.gains.m = v; break;
            case SweepParameter::k4: s.gains.k4 = v; break;
            case SweepParameter::kappa: s.gains.kappa = v; break;
            case SweepParameter::epsilon: s.gains.epsilon = v; break;
        }
        s.gains.validate();
        specs.push_back(std::move(s));
    }
    auto cells = run_cells(specs, parallel);
    std::vector<SweepRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) rows.push_back({parameter, values[i], std::move(cells[i].report)});
    return rows;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string settling_cell(const ExperimentReport& r) {
    return r.settling_time ? num(*r.settling_time) : "not_settled";
}

}  // namespace

void write_comparison_csv(const std::vector<ExperimentReport>& reports, std::ostream& out) {
    out << "method,scenario,settling_time,ultimate_bound,chattering_index,final_L0,dt\n";
    for (const auto& r : reports)
        out << r.method_id << ',' << r.scenario_id << ',' << settling_cell(r) << ',' << num(r.ultimate_bound) << ','
            << num(r.chattering_index) << ',' << num(r.final_L0) << ',' << num(r.dt_used) << '\n';
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "parameter,value,method,scenario,settling_time,ultimate_bound,chattering_index,final_L0,dt,gain_status\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << to_string(row.parameter) << ',' << num(row.value) << ',' << r.method_id << ',' << r.scenario_id << ','
            << settling_cell(r) << ',' << num(r.ultimate_bound) << ',' << num(r.chattering_index) << ','
            << num(r.final_L0) << ',' << num(r.dt_used) << ',' << (r.certificate ? r.certificate->gain_status : "")
            << '\n';
    }
}

}  // namespace smoothsmc
