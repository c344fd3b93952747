#pragma once

#include <ostream>

#include "qflux_cli/config.hpp"

namespace qflux::cli {

// Each command returns the process exit code: 0 success, 2 mathematical
// failure (verifier residual above tolerance, channel pathology). Usage and
// config errors are thrown as ConfigError and mapped to 1 by the entry point.

int cmd_stationary(const ExperimentConfig &config, std::ostream &out);
int cmd_distribution(const ExperimentConfig &config, const std::string &direction,
                     std::ostream &out);
int cmd_verify(const ExperimentConfig &config, const std::string &which, std::ostream &out);
int cmd_sweep_theta(const ExperimentConfig &config, std::ostream &out);
int cmd_sample_tpm(const ExperimentConfig &config, std::ostream &out);

// 17-significant-digit decimal rendering used by every CSV cell.
std::string format17(double value);

} // namespace qflux::cli
