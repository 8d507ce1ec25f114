#include <cmath>
#include <cstdio>
#include <ostream>

#include "igeo/diagnostics.hpp"
#include "json.hpp"

namespace igeo {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

}  // namespace

void write_json(const DiagnosticReport& report, std::ostream& out) {
  out << "{\n";
  out << "  \"manifold\": " << quoted(report.manifold) << ",\n";
  out << "  \"seed\": " << report.seed << ",\n";
  out << "  \"tolerance\": " << num(report.tolerance) << ",\n";
  out << "  \"checks\": [";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    out << (i ? ",\n" : "\n");
    out << "    {\"name\": " << quoted(c.name) << ", \"kind\": " << quoted(to_string(c.kind))
        << ", \"alpha\": " << list(c.alpha) << ", \"points\": " << c.points
        << ", \"max_residual\": " << num(c.max_residual) << ", \"tol\": " << num(c.tol)
        << ", \"verdict\": " << quoted(to_string(c.verdict)) << ", \"worst_point\": " << list(c.worst_point);
    if (!c.note.empty()) out << ", \"note\": " << quoted(c.note);
    out << "}";
  }
  out << (report.checks.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
}

void write_text(const DiagnosticReport& report, std::ostream& out) {
  out << "manifold: " << report.manifold << "  seed: " << report.seed << "  tolerance: " << num(report.tolerance)
      << '\n';
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-11s  %-7s  %-6s  %-24s  %s\n", static_cast<int>(width), "check", "kind",
                "verdict", "points", "max_residual", "note");
  out << line;
  for (const auto& c : report.checks) {
    std::string alpha = c.alpha.empty() ? "" : "alpha=" + list(c.alpha);
    std::string note = c.note.empty() ? alpha : (alpha.empty() ? c.note : alpha + " " + c.note);
    std::snprintf(line, sizeof line, "%-*s  %-11s  %-7s  %-6d  %-24s  ", static_cast<int>(width), c.name.c_str(),
                  std::string(to_string(c.kind)).c_str(), std::string(to_string(c.verdict)).c_str(), c.points,
                  num(c.max_residual).c_str());
    out << line << note << '\n';
  }
}

}  // namespace igeo
