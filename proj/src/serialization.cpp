#include "smoothsmc/serialization.hpp"

namespace smoothsmc {

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& dst) {
    if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

}  // namespace

json to_json(const GainConfig& g) {
    return {{"k1", g.k1},       {"k2", g.k2},           {"k3", g.k3},           {"k4", g.k4},
            {"m", g.m},         {"kappa", g.kappa},     {"epsilon", g.epsilon}, {"L0_init", g.L0_init}};
}

json to_json(const SimConfig& s) {
    return {{"dt", s.dt},
            {"horizon", s.horizon},
            {"x1_init", s.x1_init},
            {"singular_tol", s.singular_tol},
            {"log_stride", s.log_stride}};
}

json to_json(const DisturbanceSpec& d) {
    json j{{"kind", std::string(to_string(d.kind))}};
    switch (d.kind) {
        case DisturbanceSpec::Kind::none: j["dim"] = d.dim; break;
        case DisturbanceSpec::Kind::constant: j["value"] = d.constant_value; break;
        case DisturbanceSpec::Kind::sinusoid_mix: {
            json ch = json::array();
            for (const auto& c : d.channels)
                ch.push_back({{"amplitude", c.amplitude}, {"frequency", c.frequency}, {"cosine", c.cosine}});
            j["channels"] = std::move(ch);
            break;
        }
    }
    j["norm_bound"] = d.norm_bound();
    j["derivative_bound"] = d.derivative_bound();
    return j;
}

DisturbanceSpec disturbance_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "none") return DisturbanceSpec::none(j.value("dim", std::size_t{3}));
    if (kind == "constant") return DisturbanceSpec::constant(j.at("value").get<Vec>());
    if (kind == "sinusoid-mix") {
        std::vector<SinusoidChannel> channels;
        for (const auto& c : j.at("channels"))
            channels.push_back({c.at("amplitude").get<double>(), c.at("frequency").get<double>(),
                                c.value("cosine", false)});
        return DisturbanceSpec::sinusoids(std::move(channels));
    }
    throw UsageError("unknown disturbance kind '" + kind + "' (expected none, constant, sinusoid-mix)");
}

json to_json(const RunSpec& spec) {
    return {{"experiment", std::string(to_string(spec.experiment))},
            {"method", std::string(to_string(spec.method))},
            {"gains", to_json(spec.gains)},
            {"sim", to_json(spec.sim)},
            {"disturbance", to_json(spec.disturbance)}};
}

ConfigDocument config_from_json(const json& j) {
    ConfigDocument doc;
    read_opt(j, "experiment", doc.experiment);
    read_opt(j, "method", doc.method);
    read_opt(j, "out", doc.out);
    RunOverrides& o = doc.overrides;
    if (j.contains("gains")) {
        const auto& g = j.at("gains");
        read_opt(g, "m", o.m);
        read_opt(g, "k1", o.k1);
        read_opt(g, "k2", o.k2);
        read_opt(g, "k3", o.k3);
        read_opt(g, "k4", o.k4);
        read_opt(g, "kappa", o.kappa);
        read_opt(g, "epsilon", o.epsilon);
        read_opt(g, "L0_init", o.L0_init);
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        read_opt(s, "dt", o.dt);
        read_opt(s, "horizon", o.horizon);
        read_opt(s, "x1_init", o.x1_init);
        read_opt(s, "log_stride", o.log_stride);
        read_opt(s, "singular_tol", o.singular_tol);
    }
    if (j.contains("disturbance") && !j.at("disturbance").is_null())
        o.disturbance = disturbance_from_json(j.at("disturbance"));
    return doc;
}

json to_json(const CertificateSummary& c) {
    return {{"gain_status", c.gain_status}, {"all_pd", opt(c.all_pd)}, {"p1", opt(c.p1)},
            {"n1", opt(c.n1)},              {"n2_coeff", opt(c.n2_coeff)}, {"n3", opt(c.n3)},
            {"n4", opt(c.n4)}};
}

json to_json(const ExperimentReport& r) {
    return {{"method", r.method_id},
            {"scenario", r.scenario_id},
            {"settled", r.settling_time.has_value()},
            {"settling_time", opt(r.settling_time)},
            {"settling_threshold", r.settling_threshold},
            {"ultimate_bound", r.ultimate_bound},
            {"chattering_index", r.chattering_index},
            {"tail_fraction", r.tail_fraction},
            {"final_L0", r.final_L0},
            {"dt", r.dt_used},
            {"horizon", r.horizon},
            {"certificate", r.certificate ? to_json(*r.certificate) : json(nullptr)}};
}

json to_json(const EigenSummary& e) {
    return {{"lambda_min", e.lambda_min}, {"lambda_max", e.lambda_max}, {"spectrum", e.spectrum}};
}

json to_json(const LyapunovCertificate& c) {
    auto block = [](const SymMatrix& m, const EigenSummary& e, bool pd) {
        return json{{"block", m.rows()}, {"eigen", to_json(e)}, {"positive_definite", pd}};
    };
    auto constant = [&](double v) { return c.constants_valid ? json(v) : json(nullptr); };
    const auto& g = c.gain_check;
    return {{"gains", to_json(c.config)},
            {"gain_condition", {{"status", std::string(to_string(g.status))},
                                {"ok", g.ok()},
                                {"lhs", std::isfinite(g.lhs) ? json(g.lhs) : json(nullptr)},
                                {"rhs", std::isfinite(g.rhs) ? json(g.rhs) : json(nullptr)},
                                {"critical_k4", critical_k4(c.config)}}},
            {"P", block(c.P_block, c.P_eig, c.P_pd)},
            {"Q", block(c.Q_block, c.Q_eig, c.Q_pd)},
            {"Omega1", block(c.Omega1_block, c.Omega1_eig, c.Omega1_pd)},
            {"Omega2", block(c.Omega2_block, c.Omega2_eig, c.Omega2_pd)},
            {"all_pd", c.all_pd()},
            {"p1", c.p1},
            {"constants_valid", c.constants_valid},
            {"n1", constant(c.n1)},
            {"n2_coeff", constant(c.n2_coeff)},
            {"n3", constant(c.n3)},
            {"n4", constant(c.n4)}};
}

json to_json(const ConvergenceEstimate& e) {
    json j{{"c1", e.c1},
           {"c2", e.c2},
           {"c3", e.c3},
           {"p", e.p},
           {"V0", e.V0},
           {"settling_time_bound", e.settling_time_bound ? json(*e.settling_time_bound) : json("infinite")},
           {"residual_V_level", e.residual_V_level ? json(*e.residual_V_level) : json("none")}};
    if (e.c3 > 0.0) {
        j["p2"] = e.p2;
        j["theta1"] = e.theta1;
        j["theta2"] = e.theta2;
        j["theta3"] = e.theta3;
    }
    return j;
}

}  // namespace smoothsmc
