#pragma once

// Command implementations behind the nrcs executable. Each returns a CliReport;
// argument parsing and printing live in tools/.

#include <chrono>
#include <fstream>
#include <optional>
#include <string>

#include "nrcs/analysis.hpp"
#include "nrcs/design.hpp"
#include "nrcs/model_io.hpp"
#include "nrcs/report.hpp"
#include "nrcs/verify.hpp"

namespace nrcs {

namespace cli_detail {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::kInvalidInput, "cannot write '" + path + "'");
  out << text << "\n";
  require(static_cast<bool>(out), ErrorKind::kInvalidInput, "failed writing '" + path + "'");
}

inline CliReport base_report(const std::string& command, const Model& model, std::uint64_t seed,
                             const TolerancePolicy& tol) {
  CliReport r;
  r.command = command;
  r.model = ModelSummary::of(model);
  r.seed = seed;
  r.tol = tol;
  return r;
}

}  // namespace cli_detail

inline CliReport cmd_analyze(const std::string& command, const std::string& model_path, std::uint64_t seed,
                             const TolerancePolicy& tol) {
  const cli_detail::Stopwatch clock;
  tol.validate();
  const Model model = load_model(model_path);
  CliReport r = cli_detail::base_report(command, model, seed, tol);
  r.payload = analyze(model, tol, seed);
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

inline CliReport cmd_design(const std::string& command, const std::string& model_path, std::uint64_t seed,
                            const std::string& out_path, const TolerancePolicy& tol) {
  const cli_detail::Stopwatch clock;
  tol.validate();
  const Model model = load_model(model_path);
  require(model.fashion == Fashion::kSiso && !model.hetero && !model.perturbation, ErrorKind::kInvalidInput,
          "design supports SISO only (homogeneous single-channel models)");
  RandomSource rng(seed);
  const DesignedWeights designed = design_siso_weights(model.sub, model.topo, tol, rng);

  DesignPayload p;
  json file = json::object();
  for (const auto& [edge, w] : designed.as_map(model.topo.graph)) {
    const std::string key = std::to_string(edge.first) + "," + std::to_string(edge.second);
    p.weights[key] = w;
    file[key] = w;
  }
  for (const RootedTree& t : designed.forest.trees) p.roots.push_back(t.root);
  p.normalized_margin = designed.normalized_margin;
  p.draws = designed.draws;
  p.out_path = out_path;
  if (!out_path.empty()) cli_detail::write_text(out_path, file.dump(2));

  CliReport r = cli_detail::base_report(command, model, seed, tol);
  r.payload = p;
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

inline CliReport cmd_verify(const std::string& command, const std::string& model_path, int trials, std::uint64_t seed,
                            const std::optional<std::string>& weights_path, const TolerancePolicy& tol) {
  const cli_detail::Stopwatch clock;
  tol.validate();
  const Model model = load_model(model_path);
  CliReport r = cli_detail::base_report(command, model, seed, tol);
  if (weights_path) {
    const WeightAssignment w = parse_weights_json(read_json_file(*weights_path), model.topo.graph, model.fashion,
                                                  channel_count(model));
    const auto [ok, margin] = controllability_at(model, w, tol);
    r.payload = PointPayload{ok, margin, *weights_path};
  } else {
    require(trials >= 1, ErrorKind::kInvalidInput, "--trials must be at least 1");
    RandomSource rng(seed);
    r.payload = monte_carlo_controllability(model, trials, tol, rng);
  }
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

/// Writes the example model to `out_path` when given; `model_out` receives it
/// either way.
inline CliReport cmd_example(const std::string& command, const std::string& name, int N, const std::string& out_path,
                             Model* model_out = nullptr) {
  const cli_detail::Stopwatch clock;
  const Model model = example_model(parse_example_name(name), N);
  if (!out_path.empty()) cli_detail::write_text(out_path, model_to_json(model).dump(2));
  if (model_out) *model_out = model;
  CliReport r = cli_detail::base_report(command, model, 0, TolerancePolicy{});
  r.payload = ExamplePayload{name, out_path};
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

/// Exit code for a failure raised while running a command.
inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kNotStructurallyControllable: return kExitNot;
    case ErrorKind::kDesignFailure: return kExitUndecided;
    default: return kExitInputError;
  }
}

}  // namespace nrcs
