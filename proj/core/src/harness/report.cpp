#include "radonlik/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "radonlik/error.hpp"

namespace radonlik::harness {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json json_numbers(std::span<const double> values) {
  Json a = Json::array();
  for (double v : values) a.push_back(json_number(v));
  return a;
}

Json json_theta(const Theta& theta) {
  if (theta.size() == 1) return json_number(theta[0]);
  return json_numbers(theta);
}

namespace {

std::string format_theta(const Theta& theta) {
  std::string s;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (i > 0) s += ';';
    s += format_double(theta[i]);
  }
  return s;
}

}  // namespace

void write_curves(std::ostream& out, const std::vector<LogLikelihoodCurve>& curves) {
  if (curves.size() != 2) throw PreconditionError("curves.csv needs exactly two curves");
  const auto& a = curves[0];
  const auto& b = curves[1];
  if (!(a.grid == b.grid) || a.values.size() != a.grid.size() ||
      b.values.size() != b.grid.size()) {
    throw PreconditionError("curves must share one theta grid");
  }
  out << "theta," << a.measure_id << ',' << b.measure_id << ",diff\n";
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    out << format_theta(a.grid[i]) << ',' << format_double(a.values[i]) << ','
        << format_double(b.values[i]) << ',' << format_double(a.values[i] - b.values[i]) << '\n';
  }
}

void emit_curves(const std::vector<LogLikelihoodCurve>& curves, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_curves(out, curves);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

bool add_check(Json& report, const std::string& name, bool pass, Json fields) {
  Json c = Json::object();
  c["name"] = name;
  c["pass"] = pass;
  for (auto& [k, v] : fields.items()) c[k] = v;
  report["checks"].push_back(std::move(c));
  return pass;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_json(result.report, dir / "report.json");
  emit_curves(result.curves, dir / "curves.csv");
  Json t = Json::object();
  t["experiment"] = result.name;
  t["seconds"] = result.seconds;
  write_json(t, dir / "timings.json");
}

}  // namespace radonlik::harness
