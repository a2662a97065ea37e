#pragma once

#include <cstdint>

#include "radonlik/harness/config.hpp"
#include "radonlik/harness/report.hpp"

namespace radonlik::harness::detail {

Json report_header(const std::string& name, const Config& config, std::uint64_t seed);

ExperimentResult run_proportionality(const Config& config, std::uint64_t seed);
ExperimentResult run_mixture(const Config& config, std::uint64_t seed);
ExperimentResult run_expfam(const Config& config, std::uint64_t seed);
ExperimentResult run_poisson(const Config& config, std::uint64_t seed);
ExperimentResult run_diffusion(const Config& config, std::uint64_t seed);
ExperimentResult run_bayes(const Config& config, std::uint64_t seed);
ExperimentResult run_mcem(const Config& config, std::uint64_t seed);

}  // namespace radonlik::harness::detail
