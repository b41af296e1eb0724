#include <cstdio>
#include <sstream>

#include "bpb/suites.hpp"

namespace bpb {

Json to_json(const SuiteConfig& cfg) {
  Json out;
  out["id"] = cfg.id;
  Json spaces = Json::array();
  for (const LpSpace& s : cfg.spaces) spaces.push_back(to_json(s));
  out["spaces"] = spaces;
  out["eps_grid"] = cfg.eps_grid;
  out["delta_grid"] = cfg.delta_grid;
  out["trials"] = cfg.trials;
  out["n_max"] = cfg.n_max;
  out["seed"] = cfg.seed;
  out["tolerances"] = to_json(cfg.tol);
  return out;
}

Json report_to_json(const SuiteReport& report, bool include_timing) {
  Json out;
  out["suite"] = report.suite;
  out["status"] = to_string(report.overall());
  out["passed"] = report.passed();
  out["config"] = to_json(report.config);
  Json assertions = Json::array();
  Json unclear = Json::array();
  for (const Assertion& a : report.assertions) {
    Json j;
    j["name"] = a.name;
    j["status"] = to_string(a.status);
    j["checked"] = a.checked;
    j["failed"] = a.failed;
    j["inconclusive"] = a.inconclusive;
    j["detail"] = a.detail;
    j["witness"] = a.witness;
    assertions.push_back(j);
    if (a.status == Status::Inconclusive) unclear.push_back(a.name);
  }
  out["assertions"] = assertions;
  out["inconclusive"] = unclear;
  out["data"] = report.data;
  if (include_timing) out["wall_clock_seconds"] = report.wall_clock_seconds;
  return out;
}

std::string emit_report(const SuiteReport& report, ReportFormat format, bool include_timing) {
  if (format == ReportFormat::Json) return report_to_json(report, include_timing).dump(2) + "\n";

  std::ostringstream out;
  const SuiteConfig& c = report.config;
  out << "suite " << report.suite << "\n";
  out << "config: seed=" << c.seed << " trials=" << c.trials << " n_max=" << c.n_max << " spaces=";
  for (std::size_t i = 0; i < c.spaces.size(); ++i) out << (i ? "," : "") << c.spaces[i].label();
  out << "\n";
  for (const Assertion& a : report.assertions) {
    out << "  [" << to_string(a.status) << "] " << a.name << ": " << a.detail << "\n";
    if (a.status == Status::Fail && !a.witness.is_null()) out << "      witness: " << a.witness.dump() << "\n";
  }
  out << "inconclusive:";
  bool any = false;
  for (const Assertion& a : report.assertions)
    if (a.status == Status::Inconclusive) {
      out << "\n  " << a.name << ": " << a.detail;
      any = true;
    }
  out << (any ? "\n" : " none\n");
  if (include_timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", report.wall_clock_seconds);
    out << "wall-clock: " << buf << " s\n";
  }
  out << "result: " << to_string(report.overall()) << "\n";
  return out.str();
}

}  // namespace bpb
