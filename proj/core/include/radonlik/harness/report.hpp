#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radonlik/measure.hpp"

namespace radonlik::harness {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; infinities as "inf" / "-inf", NaN as "nan".
std::string format_double(double v);

/// Finite values as JSON numbers, non-finite ones as the strings above.
Json json_number(double v);
Json json_numbers(std::span<const double> values);
Json json_theta(const Theta& theta);

/// theta,<id1>,<id2>,diff with diff = curve1 - curve2. Vector-valued theta is
/// written with its coordinates joined by ';'. Throws PreconditionError
/// unless there are exactly two curves on the same grid.
void write_curves(std::ostream& out, const std::vector<LogLikelihoodCurve>& curves);
/// As write_curves; throws Error if the file cannot be written.
void emit_curves(const std::vector<LogLikelihoodCurve>& curves, const std::filesystem::path& path);

struct ExperimentResult {
  std::string name;
  bool pass = false;
  Json report;                              // deterministic given config and seed
  std::vector<LogLikelihoodCurve> curves;   // the pair written to curves.csv
  double seconds = 0.0;                     // wall time, kept out of report.json
};

/// Appends {"name", "pass", ...fields} to report["checks"] and returns pass.
bool add_check(Json& report, const std::string& name, bool pass, Json fields = Json::object());

/// Writes report.json, curves.csv and timings.json into `dir`, creating it.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

void write_json(const Json& j, const std::filesystem::path& path);

}  // namespace radonlik::harness
