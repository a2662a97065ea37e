#pragma once

#include <string>

#include "radonlik/harness/config.hpp"
#include "radonlik/harness/report.hpp"

namespace radonlik::harness {

/// Maps a command-line or config experiment name to its suite name;
/// "<suite>-proportionality" is accepted for every module suite. Throws
/// ConfigError for unknown names.
std::string canonical_experiment(const std::string& name);

/// Runs one named suite. Deterministic given the config (seed included)
/// and independent of the thread count.
ExperimentResult run_experiment(const std::string& name, const Config& config);

}  // namespace radonlik::harness
