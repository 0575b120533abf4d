#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smoothsmc/certificate.hpp"
#include "smoothsmc/experiments.hpp"
#include "smoothsmc/serialization.hpp"

namespace fs = std::filesystem;
using namespace smoothsmc;

namespace {

enum Exit { ok = 0, usage = 1, numerical = 2, ordering = 3, uncertified = 4 };

// Flags shared by every subcommand; unset flags leave config-file values alone.
struct CommonFlags {
    std::string config_path;
    std::optional<std::string> experiment, method, out;
    RunOverrides flags;

    void attach(CLI::App* app, bool with_run_target = true) {
        app->add_option("--config", config_path, "JSON config (a report.json also works)")->check(CLI::ExistingFile);
        if (with_run_target) {
            app->add_option("--experiment", experiment, "exp1 | exp2 | exp3 | custom");
            app->add_option("--out", out, "output directory (default: out)");
            app->add_option("--dt", flags.dt, "integration step [s]");
            app->add_option("--horizon", flags.horizon, "simulated time [s]");
            app->add_option("--x1-init", flags.x1_init, "initial state")->expected(1, -1);
            app->add_option("--log-stride", flags.log_stride, "log every n-th step");
        }
        app->add_option("--m", flags.m, "homogeneity order (2 = baseline)");
        app->add_option("--k1", flags.k1);
        app->add_option("--k2", flags.k2);
        app->add_option("--k3", flags.k3);
        app->add_option("--k4", flags.k4);
        app->add_option("--kappa", flags.kappa, "L0 growth rate");
        app->add_option("--epsilon", flags.epsilon, "adaptation dead zone");
        app->add_option("--l0-init", flags.L0_init, "initial adaptive gain");
    }

    // File first, then flags on top.
    ConfigDocument resolve() const {
        ConfigDocument doc;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            json j = json::parse(in);
            if (j.contains("config")) j = j.at("config");
            doc = config_from_json(j);
        }
        if (experiment) doc.experiment = experiment;
        if (method) doc.method = method;
        if (out) doc.out = out;
        RunOverrides& o = doc.overrides;
        auto take = [](auto& dst, const auto& src) {
            if (src) dst = src;
        };
        take(o.dt, flags.dt);
        take(o.horizon, flags.horizon);
        take(o.x1_init, flags.x1_init);
        take(o.log_stride, flags.log_stride);
        take(o.m, flags.m);
        take(o.k1, flags.k1);
        take(o.k2, flags.k2);
        take(o.k3, flags.k3);
        take(o.k4, flags.k4);
        take(o.kappa, flags.kappa);
        take(o.epsilon, flags.epsilon);
        take(o.L0_init, flags.L0_init);
        return doc;
    }
};

Experiment require_experiment(const ConfigDocument& doc) {
    if (!doc.experiment) throw UsageError("--experiment is required");
    return parse_experiment(*doc.experiment);
}

fs::path out_dir(const ConfigDocument& doc) {
    return doc.out ? fs::path(*doc.out) : fs::path("out");
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

fs::path write_cell(const fs::path& root, const CellResult& cell) {
    const fs::path dir = root / (std::string(to_string(cell.spec.experiment)) + "_" + std::string(to_string(cell.spec.method)));
    fs::create_directories(dir);
    write_trajectory_csv(cell.trajectory, (dir / "trajectory.csv").string());
    write_json(dir / "report.json", {{"config", to_json(cell.spec)}, {"report", to_json(cell.report)}});
    return dir;
}

void print_summary(const ExperimentReport& r) {
    std::printf("%-17s %-6s settle=%-12s ultimate_bound=%-11.4g chattering=%-11.4g final_L0=%-9.4g gains=%s\n",
                r.method_id.c_str(), r.scenario_id.c_str(),
                r.settling_time ? std::to_string(*r.settling_time).c_str() : "not_settled", r.ultimate_bound,
                r.chattering_index, r.final_L0, r.certificate ? r.certificate->gain_status.c_str() : "-");
}

std::vector<Method> default_methods(Experiment e) {
    if (e == Experiment::exp3) return {Method::amsdo, Method::amdo_baseline};
    return {Method::amssosmc, Method::amstsmc_baseline};
}

int cmd_run(const CommonFlags& f) {
    const auto doc = f.resolve();
    const Experiment e = require_experiment(doc);
    if (!doc.method) throw UsageError("--method is required");
    const auto spec = resolve_run_spec(e, parse_method(*doc.method), doc.overrides);
    const auto cell = run_cell(spec);
    const auto dir = write_cell(out_dir(doc), cell);
    print_summary(cell.report);
    std::printf("wrote %s\n", dir.string().c_str());
    return ok;
}

int cmd_certify(const CommonFlags& f, double V0, double delta, std::optional<double> L0, std::optional<double> rate) {
    const auto doc = f.resolve();
    // Gains only; experiment-dependent m default does not apply here.
    RunOverrides o = doc.overrides;
    const auto spec = resolve_run_spec(Experiment::exp1, Method::amssosmc, o);
    const GainConfig& g = spec.gains;

    const auto check = check_gain_condition(g);
    json out;
    if (check.status == GainStatus::baseline_exempt) {
        out = {{"gains", to_json(g)}, {"gain_condition", {{"status", "baseline-exempt"}, {"ok", false}}}};
        std::cout << out.dump(2) << '\n';
        return ok;
    }
    const auto cert = build_certificate(g);
    out = to_json(cert);
    if (cert.constants_valid) {
        ConvergenceInputs in;
        in.V0 = V0;
        in.delta = delta;
        in.L0 = L0.value_or(g.L0_init);
        in.L0_rate = rate;
        json bounds = {{"unperturbed", nullptr}, {"perturbed", nullptr}};
        auto base = in;
        base.delta = 0.0;
        bounds["unperturbed"] = to_json(estimate_convergence(cert, base));
        if (delta > 0.0) {
            const auto est = estimate_convergence(cert, in);
            bounds["perturbed"] = est.c2 > 0.0 ? to_json(est) : json{{"c2", est.c2}, {"settling_time_bound", "infinite"}};
        }
        bounds["L0"] = in.L0;
        bounds["L0_rate"] = rate.value_or(g.kappa);
        bounds["delta"] = delta;
        out["bounds"] = std::move(bounds);
    }
    std::cout << out.dump(2) << '\n';
    return cert.gain_condition_ok() && cert.all_pd() ? ok : uncertified;
}

int cmd_compare(const CommonFlags& f, const std::vector<std::string>& method_names) {
    const auto doc = f.resolve();
    const Experiment e = require_experiment(doc);
    std::vector<Method> methods;
    for (const auto& m : method_names) methods.push_back(parse_method(m));
    if (methods.empty()) methods = default_methods(e);
    if (methods.size() < 2) throw UsageError("compare needs at least two methods");

    std::vector<RunSpec> specs;
    for (Method m : methods) {
        RunOverrides o = doc.overrides;
        // m is method-specific unless forced on the command line
        if (!f.flags.m) o.m.reset();
        specs.push_back(resolve_run_spec(e, m, o));
    }
    const auto cells = run_cells(specs);

    const fs::path root = out_dir(doc);
    std::vector<ExperimentReport> reports;
    json sidecar = {{"experiment", std::string(to_string(e))}, {"runs", json::array()}};
    for (const auto& c : cells) {
        write_cell(root, c);
        reports.push_back(c.report);
        sidecar["runs"].push_back(to_json(c.spec));
        print_summary(c.report);
    }
    const std::string stem = "comparison_" + std::string(to_string(e));
    {
        std::ofstream csv(root / (stem + ".csv"));
        write_comparison_csv(reports, csv);
    }
    write_json(root / (stem + ".config.json"), sidecar);

    const bool holds = smooth_orderings_hold(reports);
    std::printf("smooth < baseline chattering: %s\n", holds ? "holds" : "VIOLATED");
    return holds ? ok : ordering;
}

int cmd_sweep(const CommonFlags& f, const std::string& parameter, const std::vector<double>& values) {
    const auto doc = f.resolve();
    const Experiment e = require_experiment(doc);
    if (!doc.method) throw UsageError("--method is required");
    const auto param = parse_sweep_parameter(parameter);
    const auto base = resolve_run_spec(e, parse_method(*doc.method), doc.overrides);
    const auto rows = run_sweep(base, param, values);

    const fs::path root = out_dir(doc);
    fs::create_directories(root);
    const std::string stem = "sweep_" + std::string(to_string(e)) + "_" + *doc.method + "_" + parameter;
    {
        std::ofstream csv(root / (stem + ".csv"));
        write_sweep_csv(rows, csv);
    }
    write_json(root / (stem + ".config.json"),
               {{"base", to_json(base)}, {"parameter", parameter}, {"values", values}});
    for (const auto& r : rows) {
        std::printf("%s=%-8g ", parameter.c_str(), r.value);
        print_summary(r.report);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive smooth second-order sliding-mode control: simulations and certificates"};
    app.require_subcommand(1);

    CommonFlags run_f, cert_f, cmp_f, sweep_f;

    auto* run = app.add_subcommand("run", "simulate one experiment/method cell");
    run_f.attach(run);
    run->add_option("--method", run_f.method, "amssosmc | amstsmc-baseline | amsdo | amdo-baseline");

    auto* certify = app.add_subcommand("certify", "check the gain inequality and Lyapunov matrices");
    cert_f.attach(certify, false);
    double V0 = 1.0, delta = 0.0;
    std::optional<double> L0_at, L0_rate;
    certify->add_option("--V0", V0, "initial Lyapunov level for the settling-time bound")->check(CLI::NonNegativeNumber);
    certify->add_option("--delta", delta, "disturbance norm bound")->check(CLI::NonNegativeNumber);
    certify->add_option("--L0", L0_at, "adaptive gain at which bounds are evaluated (default: --l0-init)");
    certify->add_option("--l0-rate", L0_rate, "L0 growth rate used in the bound (default: kappa)");

    auto* compare = app.add_subcommand("compare", "run several methods on one experiment and check chattering order");
    cmp_f.attach(compare);
    std::vector<std::string> methods;
    compare->add_option("--methods", methods, "methods to compare (default: smooth + baseline)")->delimiter(',');

    auto* sweep = app.add_subcommand("sweep", "vary one parameter over a grid");
    sweep_f.attach(sweep);
    sweep->add_option("--method", sweep_f.method);
    std::string parameter;
    std::vector<double> values;
    sweep->add_option("--parameter", parameter, "m | k4 | kappa | epsilon")->required();
    sweep->add_option("--values", values, "grid values")->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*run) return cmd_run(run_f);
        if (*certify) return cmd_certify(cert_f, V0, delta, L0_at, L0_rate);
        if (*compare) return cmd_compare(cmp_f, methods);
        if (*sweep) return cmd_sweep(sweep_f, parameter, values);
    } catch (const NumericalAbort& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return numerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: bad config: %s\n", e.what());
        return usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage;
    }
    return usage;
}
