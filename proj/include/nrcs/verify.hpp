#pragma once

// Monte Carlo oracle: sample weights (and heterogeneity fills), assemble the
// lumped pair and record PBH margins.

#include <cstdint>
#include <limits>
#include <utility>

#include "nrcs/model.hpp"
#include "nrcs/numkernel.hpp"
#include "nrcs/sampling.hpp"

namespace nrcs {

struct MonteCarloReport {
  int trials = 0;
  int controllable_count = 0;
  double min_margin = 0.0;  // normalized PBH margins
  double max_margin = 0.0;
  std::uint64_t worst_seed = 0;  // per-trial seed of the smallest margin

  bool operator==(const MonteCarloReport&) const = default;
};

/// Assembles the lumped pair of `model` at the given weights. `deltas` are
/// per-vertex perturbation realizations (ignored unless the model has a
/// perturbation pattern).
inline LumpedSystem assemble_model(const Model& model, const WeightAssignment& w,
                                   const std::vector<Matrix>* deltas = nullptr) {
  if (model.hetero) {
    w.validate(model.topo.graph, 1);
    return assemble_heterogeneous(*model.hetero, model.topo, w.channel(0));
  }
  if (model.perturbation) {
    w.validate(model.topo.graph, 1);
    std::vector<Matrix> fills;
    if (deltas) {
      fills = *deltas;
    } else if (!model.perturbation->realizations.empty()) {
      fills = model.perturbation->realizations;
    } else {
      fills.assign(model.N(), Matrix::Zero(model.sub.n(), model.sub.n()));
    }
    return assemble_heterogeneous(perturbed_subsystems(model.sub, fills), model.topo, w.channel(0));
  }
  return assemble_lumped(model.sub, model.topo, model.fashion, w);
}

inline int channel_count(const Model& model) { return model.hetero ? 1 : model.sub.r(); }

/// Each trial draws an independent child seed from `rng`, so the report is a
/// pure function of the incoming stream state.
inline MonteCarloReport monte_carlo_controllability(const Model& model, int trials, const TolerancePolicy& tol,
                                                    RandomSource& rng) {
  require(trials >= 1, ErrorKind::kInvalidInput, "trials must be at least 1");
  tol.validate();
  model.validate();
  MonteCarloReport report;
  report.trials = trials;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.max_margin = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = rng.fork_seed();
    RandomSource trial(seed);
    const WeightAssignment w = sample_random_weights(model.topo.graph, model.fashion, channel_count(model), trial);
    std::vector<Matrix> fills;
    if (model.perturbation) {
      for (int i = 0; i < model.N(); ++i) fills.push_back(model.perturbation->fill(trial));
    }
    const LumpedSystem sys = assemble_model(model, w, model.perturbation ? &fills : nullptr);
    const PbhResult pbh = pbh_test(sys.A_sys, sys.B_sys, tol);
    report.controllable_count += pbh.controllable;
    if (pbh.normalized < report.min_margin) {
      report.min_margin = pbh.normalized;
      report.worst_seed = seed;
    }
    report.max_margin = std::max(report.max_margin, pbh.normalized);
  }
  return report;
}

/// Single-point verdict and normalized PBH margin at the given weights.
inline std::pair<bool, double> controllability_at(const Model& model, const WeightAssignment& w,
                                                  const TolerancePolicy& tol) {
  model.validate();
  const LumpedSystem sys = assemble_model(model, w);
  const PbhResult pbh = pbh_test(sys.A_sys, sys.B_sys, tol);
  return {pbh.controllable, pbh.normalized};
}

}  // namespace nrcs
