#pragma once

#include <json.hpp>

#include "smoothsmc/certificate.hpp"
#include "smoothsmc/experiments.hpp"

namespace smoothsmc {

using nlohmann::json;

json to_json(const GainConfig& g);
json to_json(const SimConfig& s);
json to_json(const DisturbanceSpec& d);
DisturbanceSpec disturbance_from_json(const json& j);

/// Config document: {experiment, method, gains, sim, disturbance}. Same schema the
/// --config file uses, so an echoed config replays the run.
json to_json(const RunSpec& spec);

/// Reads a (possibly partial) config document into overrides; experiment/method
/// are returned separately when present.
struct ConfigDocument {
    std::optional<std::string> experiment;
    std::optional<std::string> method;
    std::optional<std::string> out;
    RunOverrides overrides;
};
ConfigDocument config_from_json(const json& j);

json to_json(const CertificateSummary& c);
json to_json(const ExperimentReport& r);
json to_json(const EigenSummary& e);
json to_json(const LyapunovCertificate& c);
json to_json(const ConvergenceEstimate& e);

}  // namespace smoothsmc
