#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qflux/channel.hpp"

namespace qflux::cli {

// Configuration or usage problem: exit code 1 territory (mathematical
// failures inside a run exit with 2 instead).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fully resolved experiment description. Defaults reproduce the calibrated
// scenario: incovariant builder with p = 0.2864, s = 0.1316, the prepared
// initial state, and a 101-point θ grid over [-π, π].
struct ExperimentConfig {
    // channel: either a named builder or an explicit Kraus list
    std::string builder = "incovariant"; // "incovariant" | "covariant" | "" (explicit)
    double p = 0.2864;
    double s = 0.1316;
    std::vector<ComplexMatrix> kraus; // used when builder is empty

    std::optional<ComplexMatrix> gamma; // explicit stationary state override

    ComplexMatrix rho_initial;

    std::vector<double> thetas;   // inclusive grid or explicit list
    double theta_single = 0.0;    // for single-θ commands (reverse distribution, crooks)
    bool theta_single_set = false;

    std::optional<uint64_t> shots;
    uint64_t seed = 1;
    std::string out_dir; // empty: stdout only

    double cluster_tol = 1e-9;
    double residual_tol = 1e-9;    // Crooks / second-law / marginal verifiers
    double integral_tol = 1e-10;   // integral fluctuation theorem verifier

    std::string config_hash; // FNV-1a of the canonical config document
};

// Strict parse: unknown keys anywhere in the document are rejected. The
// QFLUX_TOL environment variable, when set, overrides the default residual
// and integral tolerances (an explicit "tolerances" object still wins).
ExperimentConfig parse_config(const nlohmann::json &doc);
ExperimentConfig load_config_file(const std::string &path);
ExperimentConfig default_config();

// Resolved channel/stationary pair for a config.
struct ResolvedChannel {
    KrausChannel channel;
    StationaryState gamma;
};
ResolvedChannel resolve_channel(const ExperimentConfig &config);

std::string canonical_hash(const nlohmann::json &doc);

} // namespace qflux::cli
