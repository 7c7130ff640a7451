#pragma once

// CLI reports: a JSON form that round-trips exactly and a text form whose
// first line carries the verdict.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nrcs/analysis.hpp"
#include "nrcs/design.hpp"
#include "nrcs/model.hpp"
#include "nrcs/model_io.hpp"
#include "nrcs/verify.hpp"

namespace nrcs {

struct ModelSummary {
  int N = 0;
  int n = 0;
  int r = 0;
  std::string fashion;
  VertexSet drivers;
  bool heterogeneous = false;

  bool operator==(const ModelSummary&) const = default;

  static ModelSummary of(const Model& m) {
    return {m.N(), m.sub.n(), m.sub.r(), to_string(m.fashion), m.topo.drivers, m.perturbation || m.hetero};
  }
};

struct DesignPayload {
  std::map<std::string, double> weights;  // "i,j" -> w
  std::vector<int> roots;
  double normalized_margin = 0.0;
  int draws = 0;
  std::string out_path;

  bool operator==(const DesignPayload&) const = default;
};

struct PointPayload {
  bool controllable = false;
  double normalized_margin = 0.0;
  std::string weights_path;

  bool operator==(const PointPayload&) const = default;
};

struct ExamplePayload {
  std::string name;
  std::string out_path;

  bool operator==(const ExamplePayload&) const = default;
};

using ReportPayload = std::variant<AnalysisReport, MonteCarloReport, DesignPayload, PointPayload, ExamplePayload>;

struct CliReport {
  std::string command;  // echo of the invocation
  ModelSummary model;
  ReportPayload payload;
  std::uint64_t seed = 0;
  TolerancePolicy tol;
  double wall_time_ms = 0.0;

  bool operator==(const CliReport& o) const {
    return command == o.command && model == o.model && payload == o.payload && seed == o.seed &&
           tol.rank_rel_tol == o.tol.rank_rel_tol && tol.eig_match_tol == o.tol.eig_match_tol &&
           tol.margin_floor == o.tol.margin_floor && wall_time_ms == o.wall_time_ms;
  }
};

enum ExitCode : int { kExitControllable = 0, kExitNot = 1, kExitUndecided = 2, kExitInputError = 3 };

inline int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::kStructurallyControllable: return kExitControllable;
    case Verdict::kNotStructurallyControllable: return kExitNot;
    case Verdict::kUndecided: return kExitUndecided;
  }
  return kExitUndecided;
}

// Mixed Monte Carlo outcomes are reported as undecided.
inline int exit_code_for(const MonteCarloReport& mc) {
  if (mc.controllable_count == mc.trials) return kExitControllable;
  if (mc.controllable_count == 0) return kExitNot;
  return kExitUndecided;
}

inline int exit_code_for(const CliReport& report) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnalysisReport>) return exit_code_for(p.verdict);
        else if constexpr (std::is_same_v<T, MonteCarloReport>) return exit_code_for(p);
        else if constexpr (std::is_same_v<T, PointPayload>) return p.controllable ? kExitControllable : kExitNot;
        else return kExitControllable;
      },
      report.payload);
}

namespace report_detail {

// JSON has no infinities; non-finite reals travel as strings.
inline json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double real_from(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(ErrorKind::kParse, "bad real value '" + s + "'");
  }
  return j.get<double>();
}

inline json complex_json(const Complex& z) { return json::array({real(z.real()), real(z.imag())}); }
inline Complex complex_from(const json& j) { return {real_from(j.at(0)), real_from(j.at(1))}; }

inline json analysis_json(const AnalysisReport& a) {
  json conds = json::array();
  for (const Condition& c : a.conditions) {
    conds.push_back({{"name", c.name}, {"pass", c.pass}, {"necessary", c.necessary}, {"detail", c.detail}});
  }
  json spectrum = json::array();
  for (const Complex& z : a.fixed_spectrum) spectrum.push_back(complex_json(z));
  json cert;
  cert["unreachable"] = a.certificates.unreachable;
  cert["failed_mode"] = a.certificates.failed_mode ? complex_json(*a.certificates.failed_mode) : json(nullptr);
  json margins = json::object();
  for (const auto& [k, v] : a.certificates.margins) margins[k] = real(v);
  cert["margins"] = margins;
  cert["cycles_input_reachable"] =
      a.certificates.cycles_input_reachable ? json(*a.certificates.cycles_input_reachable) : json(nullptr);
  return {{"kind", "analysis"}, {"verdict", to_string(a.verdict)}, {"rule", a.rule},
          {"conditions", conds}, {"fixed_spectrum", spectrum}, {"certificates", cert}};
}

inline AnalysisReport analysis_from(const json& j) {
  AnalysisReport a;
  a.verdict = parse_verdict(j.at("verdict").get<std::string>());
  a.rule = j.at("rule").get<std::string>();
  for (const json& c : j.at("conditions")) {
    a.conditions.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("necessary").get<bool>(),
                            c.at("detail").get<std::string>()});
  }
  for (const json& z : j.at("fixed_spectrum")) a.fixed_spectrum.push_back(complex_from(z));
  const json& cert = j.at("certificates");
  a.certificates.unreachable = cert.at("unreachable").get<VertexSet>();
  if (!cert.at("failed_mode").is_null()) a.certificates.failed_mode = complex_from(cert.at("failed_mode"));
  for (auto it = cert.at("margins").begin(); it != cert.at("margins").end(); ++it) {
    a.certificates.margins[it.key()] = real_from(it.value());
  }
  if (!cert.at("cycles_input_reachable").is_null()) {
    a.certificates.cycles_input_reachable = cert.at("cycles_input_reachable").get<bool>();
  }
  return a;
}

inline json payload_json(const ReportPayload& payload) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnalysisReport>) {
          return analysis_json(p);
        } else if constexpr (std::is_same_v<T, MonteCarloReport>) {
          return {{"kind", "monte_carlo"}, {"trials", p.trials}, {"controllable_count", p.controllable_count},
                  {"min_margin", real(p.min_margin)}, {"max_margin", real(p.max_margin)},
                  {"worst_seed", p.worst_seed}};
        } else if constexpr (std::is_same_v<T, DesignPayload>) {
          json w = json::object();
          for (const auto& [k, v] : p.weights) w[k] = real(v);
          return {{"kind", "design"}, {"weights", w}, {"roots", p.roots},
                  {"normalized_margin", real(p.normalized_margin)}, {"draws", p.draws}, {"out_path", p.out_path}};
        } else if constexpr (std::is_same_v<T, PointPayload>) {
          return {{"kind", "point"}, {"controllable", p.controllable},
                  {"normalized_margin", real(p.normalized_margin)}, {"weights_path", p.weights_path}};
        } else {
          return {{"kind", "example"}, {"name", p.name}, {"out_path", p.out_path}};
        }
      },
      payload);
}

inline ReportPayload payload_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "analysis") return analysis_from(j);
  if (kind == "monte_carlo") {
    return MonteCarloReport{j.at("trials").get<int>(), j.at("controllable_count").get<int>(),
                            real_from(j.at("min_margin")), real_from(j.at("max_margin")),
                            j.at("worst_seed").get<std::uint64_t>()};
  }
  if (kind == "design") {
    DesignPayload p;
    for (auto it = j.at("weights").begin(); it != j.at("weights").end(); ++it) p.weights[it.key()] = real_from(it.value());
    p.roots = j.at("roots").get<std::vector<int>>();
    p.normalized_margin = real_from(j.at("normalized_margin"));
    p.draws = j.at("draws").get<int>();
    p.out_path = j.at("out_path").get<std::string>();
    return p;
  }
  if (kind == "point") {
    return PointPayload{j.at("controllable").get<bool>(), real_from(j.at("normalized_margin")),
                        j.at("weights_path").get<std::string>()};
  }
  if (kind == "example") return ExamplePayload{j.at("name").get<std::string>(), j.at("out_path").get<std::string>()};
  fail(ErrorKind::kParse, "unknown report payload kind '" + kind + "'");
}

}  // namespace report_detail

inline json report_to_json(const CliReport& r) {
  using report_detail::real;
  json model = {{"N", r.model.N}, {"n", r.model.n}, {"r", r.model.r}, {"fashion", r.model.fashion},
                {"drivers", r.model.drivers}, {"heterogeneous", r.model.heterogeneous}};
  json tol = {{"rank_rel_tol", real(r.tol.rank_rel_tol)}, {"eig_match_tol", real(r.tol.eig_match_tol)},
              {"margin_floor", real(r.tol.margin_floor)}};
  return {{"command", r.command}, {"model", model},       {"result", report_detail::payload_json(r.payload)},
          {"seed", r.seed},       {"tolerances", tol},    {"wall_time_ms", real(r.wall_time_ms)}};
}

inline CliReport report_from_json(const json& j) {
  using report_detail::real_from;
  try {
    CliReport r;
    r.command = j.at("command").get<std::string>();
    const json& m = j.at("model");
    r.model = {m.at("N").get<int>(), m.at("n").get<int>(), m.at("r").get<int>(), m.at("fashion").get<std::string>(),
               m.at("drivers").get<VertexSet>(), m.at("heterogeneous").get<bool>()};
    r.payload = report_detail::payload_from(j.at("result"));
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& t = j.at("tolerances");
    r.tol.rank_rel_tol = real_from(t.at("rank_rel_tol"));
    r.tol.eig_match_tol = real_from(t.at("eig_match_tol"));
    r.tol.margin_floor = real_from(t.at("margin_floor"));
    r.wall_time_ms = real_from(j.at("wall_time_ms"));
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("malformed report: ") + e.what());
  }
}

inline std::string render_json(const CliReport& r) { return report_to_json(r).dump(2); }

inline CliReport parse_report(const std::string& text) { return report_from_json(parse_json_text(text, "report")); }

inline std::string verdict_line(const CliReport& r) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnalysisReport>) {
          return to_string(p.verdict);
        } else if constexpr (std::is_same_v<T, MonteCarloReport>) {
          const char* v = p.controllable_count == p.trials ? "Controllable"
                          : p.controllable_count == 0      ? "NotControllable"
                                                           : "Mixed";
          return std::string(v) + " " + std::to_string(p.controllable_count) + "/" + std::to_string(p.trials);
        } else if constexpr (std::is_same_v<T, DesignPayload>) {
          return "StructurallyControllable (designed " + std::to_string(p.weights.size()) + " weights)";
        } else if constexpr (std::is_same_v<T, PointPayload>) {
          return p.controllable ? "Controllable" : "NotControllable";
        } else {
          return "Example " + p.name + " written";
        }
      },
      r.payload);
}

inline std::string render_text(const CliReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << verdict_line(r) << "\n";
  out << "command: " << r.command << "\n";
  out << "model: N=" << r.model.N << " n=" << r.model.n << " r=" << r.model.r << " fashion=" << r.model.fashion
      << " drivers=" << detail::format_set(r.model.drivers) << (r.model.heterogeneous ? " heterogeneous" : "") << "\n";
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnalysisReport>) {
          out << "rule: " << p.rule << "\n";
          out << "conditions:\n";
          for (const Condition& c : p.conditions) {
            out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << (c.necessary ? " (necessary)" : "");
            if (!c.detail.empty()) out << ": " << c.detail;
            out << "\n";
          }
          if (!p.fixed_spectrum.empty()) {
            out << "fixed spectrum:";
            for (const Complex& z : p.fixed_spectrum) out << " " << detail::format_complex(z);
            out << "\n";
          }
          const Certificates& cert = p.certificates;
          if (!cert.unreachable.empty()) out << "unreachable vertices: " << detail::format_set(cert.unreachable) << "\n";
          if (cert.failed_mode) out << "failed mode: " << detail::format_complex(*cert.failed_mode) << "\n";
          for (const auto& [k, v] : cert.margins) out << "margin " << k << ": " << v << "\n";
          if (cert.cycles_input_reachable) {
            out << "cycles input-reachable: " << (*cert.cycles_input_reachable ? "yes" : "no") << "\n";
          }
        } else if constexpr (std::is_same_v<T, MonteCarloReport>) {
          out << "trials: " << p.trials << " controllable: " << p.controllable_count << "\n";
          out << "normalized margin: min " << p.min_margin << " max " << p.max_margin << " (worst trial seed "
              << p.worst_seed << ")\n";
        } else if constexpr (std::is_same_v<T, DesignPayload>) {
          out << "weights:";
          for (const auto& [k, v] : p.weights) out << " (" << k << ")=" << v;
          out << "\nnormalized margin: " << p.normalized_margin << " draws: " << p.draws << "\n";
          if (!p.out_path.empty()) out << "written to " << p.out_path << "\n";
        } else if constexpr (std::is_same_v<T, PointPayload>) {
          out << "normalized margin: " << p.normalized_margin << "\n";
          if (!p.weights_path.empty()) out << "weights: " << p.weights_path << "\n";
        } else {
          if (!p.out_path.empty()) out << "written to " << p.out_path << "\n";
        }
      },
      r.payload);
  out << "seed: " << r.seed << " tol-rank: " << r.tol.rank_rel_tol << " tol-eig: " << r.tol.eig_match_tol << "\n";
  out << "wall time: " << r.wall_time_ms << " ms\n";
  return out.str();
}

}  // namespace nrcs
