#pragma once

// Structural controllability deciders for the three interaction fashions and
// the two heterogeneous extensions, plus the fixed-spectrum and fixed-mode
// subroutines they rely on. All complex modes are handled in complex
// arithmetic throughout.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nrcs/graph.hpp"
#include "nrcs/model.hpp"
#include "nrcs/numkernel.hpp"
#include "nrcs/sampling.hpp"

namespace nrcs {

enum class Verdict { kStructurallyControllable, kNotStructurallyControllable, kUndecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kStructurallyControllable: return "StructurallyControllable";
    case Verdict::kNotStructurallyControllable: return "NotStructurallyControllable";
    case Verdict::kUndecided: return "Undecided";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "StructurallyControllable") return Verdict::kStructurallyControllable;
  if (s == "NotStructurallyControllable") return Verdict::kNotStructurallyControllable;
  if (s == "Undecided") return Verdict::kUndecided;
  fail(ErrorKind::kParse, "unknown verdict '" + s + "'");
}

struct Condition {
  std::string name;
  bool pass = false;
  bool necessary = false;  // failing it rules out structural controllability
  std::string detail;

  bool operator==(const Condition&) const = default;
};

struct Certificates {
  VertexSet unreachable;
  std::optional<Complex> failed_mode;
  std::map<std::string, double> margins;
  std::optional<bool> cycles_input_reachable;

  bool operator==(const Certificates&) const = default;
};

struct AnalysisReport {
  Verdict verdict = Verdict::kUndecided;
  std::string rule;  // which criterion produced the verdict
  std::vector<Condition> conditions;
  std::vector<Complex> fixed_spectrum;
  Certificates certificates;

  bool operator==(const AnalysisReport&) const = default;

  const Condition* find(const std::string& name) const {
    for (const auto& c : conditions) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

enum class FixedSpectrumMethod { kScalarLine, kDiagonalK };

struct FixedSpectrum {
  std::vector<Complex> modes;
  FixedSpectrumMethod method = FixedSpectrumMethod::kScalarLine;
  int samples = 0;

  bool empty() const { return modes.empty(); }
};

namespace detail {

inline std::string format_complex(const Complex& z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

inline std::string format_set(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + "}";
}

inline bool singular_at(const Matrix& A, const Matrix& feedback, Complex lambda, const TolerancePolicy& tol) {
  const Eigen::Index n = A.rows();
  CMatrix m = -(A + feedback).cast<Complex>();
  m.diagonal().array() += lambda;
  return numerical_rank(m, tol) < n;
}

inline Condition pbh_condition(const std::string& name, const PbhResult& r, bool necessary) {
  std::ostringstream os;
  os << "normalized margin " << r.normalized;
  if (!r.controllable) os << " at mode " << format_complex(r.worst_mode);
  return {name, r.controllable, necessary, os.str()};
}

inline Condition reachability_condition(const DiGraph& g, const VertexSet& drivers, Certificates& cert) {
  cert.unreachable = unreachable_vertices(g, drivers);
  const bool ok = cert.unreachable.empty();
  return {"globally input-reachable", ok, true,
          ok ? "every vertex reachable from a driver" : "unreachable vertices " + format_set(cert.unreachable)};
}

}  // namespace detail

/// Psi = intersection over real l of sigma(A + l BC). For each distinct
/// lambda_0 of A, det(lambda_0 I - A - l BC) is a polynomial in l of degree at
/// most rank(BC) vanishing at l = 0; it vanishes identically iff it vanishes at
/// l = 1, ..., rank(BC) + 1.
inline FixedSpectrum scalar_fixed_spectrum(const SubsystemDynamics& sub, const TolerancePolicy& tol = {}) {
  sub.validate();
  const Matrix BC = sub.B * sub.C;
  const int degree = numerical_rank(BC, tol);
  FixedSpectrum out{{}, FixedSpectrumMethod::kScalarLine, degree + 1};
  for (const Complex& lambda : distinct_eigenvalues(sub.A)) {
    bool fixed = true;
    for (int l = 1; l <= degree + 1 && fixed; ++l) {
      fixed = detail::singular_at(sub.A, static_cast<double>(l) * BC, lambda, tol);
    }
    if (fixed) out.modes.push_back(lambda);
  }
  return out;
}

/// Fixed modes with respect to diagonal feedback K: lambda_0 in sigma(A) is
/// declared fixed iff lambda_0 I - A - B diag(k) C is singular for every one of
/// `samples` random diagonal draws k.
inline FixedSpectrum diag_fixed_modes(const SubsystemDynamics& sub, const TolerancePolicy& tol, RandomSource& rng,
                                      int samples = 20) {
  sub.validate();
  require(samples >= 1, ErrorKind::kInvalidInput, "need at least one sample");
  std::vector<Vector> draws;
  for (int s = 0; s < samples; ++s) {
    Vector k(sub.r());
    for (int i = 0; i < sub.r(); ++i) k(i) = signed_nonzero(rng);
    draws.push_back(k);
  }
  FixedSpectrum out{{}, FixedSpectrumMethod::kDiagonalK, samples};
  for (const Complex& lambda : distinct_eigenvalues(sub.A)) {
    bool fixed = true;
    for (const Vector& k : draws) {
      if (!detail::singular_at(sub.A, sub.B * k.asDiagonal() * sub.C, lambda, tol)) {
        fixed = false;
        break;
      }
    }
    if (fixed) out.modes.push_back(lambda);
  }
  return out;
}

/// Generic row rank of [lambda I - A_sys(w), B_sys] estimated as the maximum
/// numerical rank over `samples` random weight draws.
inline int generic_rank_at_mode(const SubsystemDynamics& sub, const NetworkTopology& topo, Fashion fashion,
                                Complex lambda, const TolerancePolicy& tol, RandomSource& rng, int samples = 5) {
  sub.validate();
  check_fashion(fashion, sub.r());
  require(std::isfinite(lambda.real()) && std::isfinite(lambda.imag()), ErrorKind::kInvalidInput,
          "mode must be finite");
  std::optional<LinearParameterization> param;
  if (fashion == Fashion::kMultiWeighted) param = linear_parameterization(sub, topo);
  int best = 0;
  for (int s = 0; s < samples; ++s) {
    const WeightAssignment w = sample_random_weights(topo.graph, fashion, sub.r(), rng);
    const LumpedSystem sys = param ? param->reconstruct(w, sub.r()) : assemble_lumped(sub, topo, fashion, w);
    const Eigen::Index dim = sys.A_sys.rows();
    CMatrix m(dim, dim + sys.B_sys.cols());
    m.leftCols(dim) = -sys.A_sys.cast<Complex>();
    m.leftCols(dim).diagonal().array() += lambda;
    m.rightCols(sys.B_sys.cols()) = sys.B_sys.cast<Complex>();
    best = std::max(best, numerical_rank(m, tol));
  }
  return best;
}

/// SISO networks: structurally controllable iff (A,b) controllable, (A,c)
/// observable and the network globally input-reachable. With every vertex
/// driven, controllability of (A,b) alone decides (L = 0 works).
inline AnalysisReport check_siso(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                 const TolerancePolicy& tol = {}) {
  sub.validate();
  require(sub.r() == 1, ErrorKind::kInvalidFashion,
          "siso check requires r = 1, got r = " + std::to_string(sub.r()));
  AnalysisReport report;
  const PbhResult ctrl = pbh_test(sub.A, sub.B, tol);
  const PbhResult obs = observability_test(sub.A, sub.C, tol);
  report.certificates.margins["controllability(A,b)"] = ctrl.normalized;
  report.certificates.margins["observability(A,c)"] = obs.normalized;

  const bool all_driven = static_cast<int>(topo.drivers.size()) == topo.vertex_count();
  report.conditions.push_back(detail::pbh_condition("(A,b) controllable", ctrl, true));
  report.conditions.push_back(detail::pbh_condition("(A,c) observable", obs, !all_driven));
  report.conditions.push_back(detail::reachability_condition(topo.graph, topo.drivers, report.certificates));

  if (!ctrl.controllable) report.certificates.failed_mode = ctrl.worst_mode;
  if (all_driven) {
    report.rule = "all vertices driven: (A,b) controllability decides";
    report.verdict = ctrl.controllable ? Verdict::kStructurallyControllable : Verdict::kNotStructurallyControllable;
    return report;
  }
  report.rule = "siso criterion (controllable, observable, input-reachable)";
  const bool ok = ctrl.controllable && obs.controllable && report.certificates.unreachable.empty();
  report.verdict = ok ? Verdict::kStructurallyControllable : Verdict::kNotStructurallyControllable;
  return report;
}

namespace detail {

// Checks full generic rank at every mode; records one necessary condition per
// mode and returns false at the first deficiency.
inline bool full_rank_at_modes(const SubsystemDynamics& sub, const NetworkTopology& topo, Fashion fashion,
                               const std::vector<Complex>& modes, const TolerancePolicy& tol, RandomSource& rng,
                               AnalysisReport& report, const std::string& scope) {
  const int target = sub.n() * topo.vertex_count();
  for (const Complex& lambda : modes) {
    const int rank = generic_rank_at_mode(sub, topo, fashion, lambda, tol, rng);
    const bool ok = rank == target;
    report.conditions.push_back({"generic rank full at " + format_complex(lambda) + scope, ok, true,
                                 "generic rank " + std::to_string(rank) + " of " + std::to_string(target)});
    if (!ok) {
      report.certificates.failed_mode = lambda;
      return false;
    }
  }
  return true;
}

inline bool has_single_root(const NetworkTopology& topo) {
  for (int d : topo.drivers) {
    if (is_globally_input_reachable(topo.graph, {d})) return true;
  }
  return false;
}

// Screens the two necessary conditions shared by the MIMO criteria. Returns
// false (with a Not verdict recorded) if either fails.
inline bool mimo_screen(const SubsystemDynamics& sub, const NetworkTopology& topo, const TolerancePolicy& tol,
                        AnalysisReport& report) {
  const PbhResult ctrl = pbh_test(sub.A, sub.B, tol);
  report.certificates.margins["controllability(A,B)"] = ctrl.normalized;
  report.conditions.push_back(pbh_condition("(A,B) controllable", ctrl, true));
  report.conditions.push_back(reachability_condition(topo.graph, topo.drivers, report.certificates));
  if (!ctrl.controllable) report.certificates.failed_mode = ctrl.worst_mode;
  if (!ctrl.controllable || !report.certificates.unreachable.empty()) {
    report.verdict = Verdict::kNotStructurallyControllable;
    report.rule = "necessary condition failed";
    return false;
  }
  return true;
}

}  // namespace detail

/// Equally weighted MIMO networks. Psi = {} gives the reachability criterion;
/// otherwise the generic rank at each lambda in Psi decides, on the whole
/// network when one driver spans it and tree by tree on the driver-rooted
/// forest otherwise.
inline AnalysisReport check_mimo_equal(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                       const TolerancePolicy& tol, RandomSource& rng) {
  sub.validate();
  AnalysisReport report;
  if (!detail::mimo_screen(sub, topo, tol, report)) return report;

  const FixedSpectrum psi = scalar_fixed_spectrum(sub, tol);
  report.fixed_spectrum = psi.modes;
  report.conditions.push_back({"fixed spectrum empty", psi.empty(), false,
                               std::to_string(psi.modes.size()) + " mode(s) survive every scalar gain"});
  if (psi.empty()) {
    report.verdict = Verdict::kStructurallyControllable;
    report.rule = "empty fixed spectrum: input-reachability decides";
    return report;
  }

  // A deficient generic rank at lambda means lambda is an uncontrollable
  // eigenvalue for every weight choice.
  if (!detail::full_rank_at_modes(sub, topo, Fashion::kEquallyWeighted, psi.modes, tol, rng, report, "")) {
    report.verdict = Verdict::kNotStructurallyControllable;
    report.rule = "generic rank deficient at a fixed mode";
    return report;
  }
  if (detail::has_single_root(topo)) {
    report.verdict = Verdict::kStructurallyControllable;
    report.rule = "single driver spans the network; generic rank full on the fixed spectrum";
    return report;
  }

  const SpanningForest forest = rooted_spanning_forest(topo.graph, topo.drivers);
  for (const RootedTree& tree : forest.trees) {
    VertexSet members = tree.order;
    std::sort(members.begin(), members.end());
    const int root = static_cast<int>(std::lower_bound(members.begin(), members.end(), tree.root) - members.begin()) + 1;
    const NetworkTopology local(topo.graph.induced(members), {root});
    if (!detail::full_rank_at_modes(sub, local, Fashion::kEquallyWeighted, psi.modes, tol, rng, report,
                                    " (tree rooted at " + std::to_string(tree.root) + ")")) {
      // Cross-tree couplings might still help; the conditions above are not
      // necessary for the whole network.
      report.conditions.back().necessary = false;
      report.verdict = Verdict::kUndecided;
      report.rule = "tree-by-tree generic rank deficient; cross-tree couplings not analysed";
      return report;
    }
  }
  report.verdict = Verdict::kStructurallyControllable;
  report.rule = "every driver-rooted tree has full generic rank on the fixed spectrum";
  return report;
}

struct TransferPattern {
  Pattern gzv;  // r x r, (i,j) nonzero iff c_i (sI - A)^-1 b_j is not identically 0
  Pattern gzu;  // r x r, (i,j) nonzero iff c_i (sI - A)^-1 b_j (row of c_i (sI-A)^-1 B)
  Pattern H;    // r|E| x r|E|: block (i,j) = pattern(K_I K) if gzv(i,j)
  Pattern P;    // r|E| x r|drivers|: block i = pattern(K_I Delta) (x) gzu row i
};

/// Zero/nonzero structure of the transfer matrices of the incidence
/// parameterization. Each scalar transfer is sampled at three random real
/// points outside sigma(A).
inline TransferPattern transfer_pattern(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                        const TolerancePolicy& tol, RandomSource& rng) {
  sub.validate();
  const int r = sub.r();
  const int n = sub.n();
  const double radius = 1.0 + spectral_norm(sub.A);
  Pattern g = Pattern::Constant(r, r, false);
  for (int s = 0; s < 3; ++s) {
    const double mag = radius * (1.0 + rng.unit());
    const double point = rng.unit() < 0.5 ? -mag : mag;
    Matrix resolvent_arg = -sub.A;
    resolvent_arg.diagonal().array() += point;
    const Eigen::PartialPivLU<Matrix> lu(resolvent_arg);
    const Matrix X = lu.solve(sub.B);  // (sI - A)^-1 B
    const Matrix inv = lu.inverse();
    const double inv_norm = spectral_norm(inv);
    const Matrix T = sub.C * X;
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        const double scale = sub.C.row(i).norm() * sub.B.col(j).norm() * inv_norm;
        if (std::abs(T(i, j)) > tol.rank_rel_tol * std::max(n, 1) * scale && scale > 0.0) g(i, j) = true;
      }
    }
  }

  const IncidencePair inc = incidence_matrices(topo.graph);
  const Pattern kik = nonzero_pattern(inc.K_I * inc.K);
  const Pattern kid = nonzero_pattern(inc.K_I * topo.selector());
  const Eigen::Index m = topo.graph.edge_count();
  const Eigen::Index d = static_cast<Eigen::Index>(topo.drivers.size());

  TransferPattern out{g, g, Pattern::Constant(r * m, r * m, false), Pattern::Constant(r * m, r * d, false)};
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (g(i, j)) out.H.block(i * m, j * m, m, m) = kik;
    }
    // Row block i of G_zu is (K_I Delta) (x) (c_i (sI-A)^-1 B).
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        if (!kid(a, b)) continue;
        for (int j = 0; j < r; ++j) out.P(i * m + a, b * r + j) = g(i, j);
      }
    }
  }
  return out;
}

inline bool cycle_reachability_condition(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                  const TolerancePolicy& tol, RandomSource& rng) {
  const TransferPattern tp = transfer_pattern(sub, topo, tol, rng);
  return every_cycle_input_reachable(AuxGraph(tp.H, tp.P));
}

/// Differently weighted MIMO networks (requires every c_i != 0). Without
/// diagonal-feedback fixed modes reachability decides; otherwise the generic
/// rank at each fixed mode decides.
inline AnalysisReport check_mimo_multi(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                       const TolerancePolicy& tol, RandomSource& rng) {
  sub.validate();
  for (int i = 0; i < sub.r(); ++i) {
    require(sub.C.row(i).norm() > 0.0, ErrorKind::kPreconditionViolated,
            "output row c_" + std::to_string(i + 1) + " is zero; the multi-weighted criterion needs every c_i != 0");
  }
  AnalysisReport report;
  if (!detail::mimo_screen(sub, topo, tol, report)) return report;

  const FixedSpectrum fixed = diag_fixed_modes(sub, tol, rng);
  report.fixed_spectrum = fixed.modes;
  report.conditions.push_back(
      {"no fixed mode under diagonal feedback", fixed.empty(), false,
       std::to_string(fixed.modes.size()) + " fixed mode(s) over " + std::to_string(fixed.samples) +
           " random diagonal gains (false-positive probability 0 for continuous draws)"});

  const bool cycles = cycle_reachability_condition(sub, topo, tol, rng);
  report.certificates.cycles_input_reachable = cycles;
  report.conditions.push_back({"every auxiliary cycle input-reachable", cycles, false,
                               cycles ? "no parameter-dependent uncontrollable mode"
                                      : "an auxiliary cycle is not input-reachable"});

  if (fixed.empty()) {
    report.verdict = Verdict::kStructurallyControllable;
    report.rule = "no diagonal fixed mode: input-reachability decides";
    return report;
  }
  if (!detail::full_rank_at_modes(sub, topo, Fashion::kMultiWeighted, fixed.modes, tol, rng, report, "")) {
    report.verdict = Verdict::kNotStructurallyControllable;
    report.rule = "generic rank deficient at a fixed mode";
    return report;
  }
  report.verdict = Verdict::kStructurallyControllable;
  report.rule = "generic rank full at every fixed mode";
  return report;
}

/// Structured heterogeneity A + dA_i (siso). Sufficient only: a single random
/// fill of the mask making (A+dA,b) controllable and (A+dA,c) observable,
/// together with reachability, certifies controllability.
inline AnalysisReport check_hetero_perturbed(const SubsystemDynamics& sub, const HeteroPerturbation& perturbation,
                                             const NetworkTopology& topo, const TolerancePolicy& tol,
                                             RandomSource& rng, int realizations = 10) {
  sub.validate();
  require(sub.r() == 1, ErrorKind::kInvalidFashion, "perturbed heterogeneity check requires siso subsystems");
  require(perturbation.mask.rows() == sub.n() && perturbation.mask.cols() == sub.n(), ErrorKind::kInvalidInput,
          "perturbation pattern must be n x n");
  AnalysisReport report;
  int ctrl_count = 0;
  int obs_count = 0;
  bool found = false;
  for (int s = 0; s < realizations && !found; ++s) {
    const Matrix A = sub.A + perturbation.fill(rng);
    const PbhResult c = pbh_test(A, sub.B, tol);
    const PbhResult o = observability_test(A, sub.C, tol);
    ctrl_count += c.controllable;
    obs_count += o.controllable;
    if (c.controllable && o.controllable) {
      found = true;
      report.certificates.margins["controllability(A+dA,b)"] = c.normalized;
      report.certificates.margins["observability(A+dA,c)"] = o.normalized;
    }
  }
  report.conditions.push_back({"(A+dA,b) structurally controllable", ctrl_count > 0, false,
                               std::to_string(ctrl_count) + " controllable fill(s)"});
  report.conditions.push_back({"(A+dA,c) structurally observable", obs_count > 0, false,
                               std::to_string(obs_count) + " observable fill(s)"});
  report.conditions.push_back({"common fill controllable and observable", found, false,
                               found ? "witness found"
                                     : "none in " + std::to_string(realizations) +
                                           " fills; sampling cannot prove structural failure"});
  report.conditions.push_back(detail::reachability_condition(topo.graph, topo.drivers, report.certificates));

  if (!report.certificates.unreachable.empty()) {
    report.verdict = Verdict::kNotStructurallyControllable;
    report.rule = "input-reachability is necessary";
  } else if (found) {
    report.verdict = Verdict::kStructurallyControllable;
    report.rule = "sufficient condition: common fill and input-reachability";
  } else {
    report.verdict = Verdict::kUndecided;
    report.rule = "sufficient condition not met";
  }
  return report;
}

/// Fully heterogeneous siso subsystems. Sufficient: every (A_i,b_i)
/// controllable and (A_i,c_i) observable plus reachability.
inline AnalysisReport check_hetero_siso(const HeteroSubsystemList& subs, const NetworkTopology& topo,
                                        const TolerancePolicy& tol = {}) {
  require(static_cast<int>(subs.size()) == topo.vertex_count(), ErrorKind::kInvalidInput,
          "expected " + std::to_string(topo.vertex_count()) + " subsystems, got " + std::to_string(subs.size()));
  AnalysisReport report;
  bool all_minimal = true;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    subs[i].validate(static_cast<int>(i) + 1);
    const std::string tag = std::to_string(i + 1);
    const PbhResult c = pbh_test(subs[i].A, subs[i].b, tol);
    const PbhResult o = observability_test(subs[i].A, subs[i].c, tol);
    report.conditions.push_back(detail::pbh_condition("(A_" + tag + ",b_" + tag + ") controllable", c, false));
    report.conditions.push_back(detail::pbh_condition("(A_" + tag + ",c_" + tag + ") observable", o, false));
    report.certificates.margins["controllability " + tag] = c.normalized;
    report.certificates.margins["observability " + tag] = o.normalized;
    all_minimal = all_minimal && c.controllable && o.controllable;
  }
  report.conditions.push_back(detail::reachability_condition(topo.graph, topo.drivers, report.certificates));
  if (!report.certificates.unreachable.empty()) {
    report.verdict = Verdict::kNotStructurallyControllable;
    report.rule = "input-reachability is necessary";
  } else if (all_minimal) {
    report.verdict = Verdict::kStructurallyControllable;
    report.rule = "sufficient condition: minimal subsystems and input-reachability";
  } else {
    report.verdict = Verdict::kUndecided;
    report.rule = "sufficient condition not met";
  }
  return report;
}

/// Routes a model to the criterion matching its fashion and heterogeneity.
inline AnalysisReport analyze(const Model& model, const TolerancePolicy& tol, std::uint64_t seed) {
  tol.validate();
  model.validate();
  RandomSource rng(seed);
  if (model.hetero) return check_hetero_siso(*model.hetero, model.topo, tol);
  if (model.perturbation) return check_hetero_perturbed(model.sub, *model.perturbation, model.topo, tol, rng);
  switch (model.fashion) {
    case Fashion::kSiso: return check_siso(model.sub, model.topo, tol);
    case Fashion::kEquallyWeighted: return check_mimo_equal(model.sub, model.topo, tol, rng);
    case Fashion::kMultiWeighted: return check_mimo_multi(model.sub, model.topo, tol, rng);
  }
  fail(ErrorKind::kInvalidFashion, "unknown fashion");
}

inline AnalysisReport check_siso(const Model& model, const TolerancePolicy& tol = {}) {
  require(model.fashion == Fashion::kSiso, ErrorKind::kInvalidFashion, "model is not siso");
  return check_siso(model.sub, model.topo, tol);
}

inline AnalysisReport check_mimo_equal(const Model& model, const TolerancePolicy& tol, RandomSource& rng) {
  require(model.fashion == Fashion::kEquallyWeighted, ErrorKind::kInvalidFashion, "model is not equally weighted");
  return check_mimo_equal(model.sub, model.topo, tol, rng);
}

inline AnalysisReport check_mimo_multi(const Model& model, const TolerancePolicy& tol, RandomSource& rng) {
  require(model.fashion == Fashion::kMultiWeighted, ErrorKind::kInvalidFashion, "model is not multi-weighted");
  return check_mimo_multi(model.sub, model.topo, tol, rng);
}

}  // namespace nrcs
