#pragma once

// Constructive weight synthesis for SISO networks. Weights are chosen vertex
// by vertex along the topological order of each driver-rooted tree so that
// the spectrum of the new diagonal block A - p b c avoids both the spectrum
// built so far and the invariant zeros of the transfer from the tree input
// to the parent's output. Off-tree and cross-tree edges get weight zero.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nrcs/analysis.hpp"
#include "nrcs/graph.hpp"
#include "nrcs/model.hpp"
#include "nrcs/numkernel.hpp"
#include "nrcs/sampling.hpp"

namespace nrcs {

struct DesignedWeights {
  Vector weights;               // aligned with graph.edges(); zero off the forest
  SpanningForest forest;
  double normalized_margin = 0.0;  // PBH margin of the assembled network
  int draws = 0;                // candidate weights tried in total

  std::map<Edge, double> as_map(const DiGraph& g) const {
    std::map<Edge, double> out;
    for (int k = 0; k < g.edge_count(); ++k) {
      if (weights(k) != 0.0) out[g.edges()[k]] = weights(k);
    }
    return out;
  }
};

/// Finite invariant zeros of (A, B, C): the finite generalized eigenvalues of
/// the pencil ([A B; C 0], [I 0; 0 0]). Single-input single-output only.
inline std::vector<Complex> invariant_zeros(const Matrix& A, const Vector& b, const RowVector& c) {
  const Eigen::Index n = A.rows();
  Matrix M = Matrix::Zero(n + 1, n + 1);
  M.topLeftCorner(n, n) = A;
  M.topRightCorner(n, 1) = b;
  M.bottomLeftCorner(1, n) = c;
  Matrix E = Matrix::Zero(n + 1, n + 1);
  E.topLeftCorner(n, n).setIdentity();

  Eigen::GeneralizedEigenSolver<Matrix> solver(M, E, /*computeEigenvectors=*/false);
  std::vector<Complex> zeros;
  if (solver.info() != Eigen::Success) return zeros;
  const double scale = 1.0 + M.norm();
  const auto& alphas = solver.alphas();
  const auto& betas = solver.betas();
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    const double beta = std::abs(betas(i));
    if (beta <= 1e-12 * scale) continue;  // infinite eigenvalue
    const Complex z = alphas(i) / betas(i);
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) zeros.push_back(z);
  }
  return zeros;
}

namespace detail {

inline constexpr int kSeparationDraws = 50;
inline constexpr int kMaxDesignDraws = 500;

// Designs one tree in place; `local` is the tree-local lumped matrix.
inline void design_tree(const SubsystemDynamics& sub, const DiGraph& g, const RootedTree& tree,
                        const TolerancePolicy& tol, RandomSource& rng, Vector& weights, int& draws) {
  const int n = sub.n();
  const Vector b = sub.b(0);
  const RowVector c = sub.c(0);
  const Matrix bc = b * c;
  std::map<int, int> position;
  for (int k = 0; k < tree.size(); ++k) position[tree.order[k]] = k;

  Matrix Ak = sub.A;
  for (int k = 1; k < tree.size(); ++k) {
    const int v = tree.order[k];
    const int parent = tree.parent.at(v);
    const int ppos = position.at(parent);

    // Transfer from the root input to c x_parent inside the subtree of the
    // first ppos+1 vertices (closed under parents by the topological order).
    const Eigen::Index lead = static_cast<Eigen::Index>(ppos + 1) * n;
    Vector b_lead = Vector::Zero(lead);
    b_lead.head(n) = b;
    RowVector c_lead = RowVector::Zero(lead);
    c_lead.tail(n) = c;
    const Spectrum current = eigenvalues(Ak);
    std::vector<Complex> forbidden = current;
    for (const Complex& z : invariant_zeros(Ak.topLeftCorner(lead, lead), b_lead, c_lead)) {
      if (spectral_distance(z, current) > tol.eig_match_tol) forbidden.push_back(z);
    }

    const Eigen::Index dim = static_cast<Eigen::Index>(k) * n;
    Matrix next = Matrix::Zero(dim + n, dim + n);
    next.topLeftCorner(dim, dim) = Ak;
    Matrix B_next = Matrix::Zero(dim + n, 1);
    B_next.topRows(n) = b;

    bool accepted = false;
    for (int attempt = 0; !accepted; ++attempt) {
      if (draws >= kMaxDesignDraws) {
        fail(ErrorKind::kDesignFailure, "no admissible weight for edge (" + std::to_string(parent) + "," +
                                            std::to_string(v) + ") after " + std::to_string(draws) + " draws");
      }
      ++draws;
      const double p = rng.nonzero();
      const Matrix block = sub.A - p * bc;
      bool separated = true;
      for (const Complex& mode : eigenvalues(block)) {
        if (spectral_distance(mode, forbidden) <= tol.eig_match_tol) {
          separated = false;
          break;
        }
      }
      if (!separated && attempt < kSeparationDraws) continue;
      next.bottomRightCorner(n, n) = block;
      next.block(dim, static_cast<Eigen::Index>(ppos) * n, n, n) = p * bc;
      if (!is_controllable(next, B_next, tol)) continue;
      weights(g.edge_index(parent, v)) = p;
      accepted = true;
    }
    Ak = next;
  }
}

}  // namespace detail

/// Weights making the SISO network controllable. Throws
/// kNotStructurallyControllable when the network cannot be made controllable
/// and kDesignFailure if sampling is exhausted.
inline DesignedWeights design_siso_weights(const SubsystemDynamics& sub, const NetworkTopology& topo,
                                           const TolerancePolicy& tol, RandomSource& rng) {
  const AnalysisReport pre = check_siso(sub, topo, tol);
  if (pre.verdict != Verdict::kStructurallyControllable) {
    std::string failed;
    for (const auto& cond : pre.conditions) {
      if (cond.necessary && !cond.pass) failed += (failed.empty() ? "" : "; ") + cond.name + " (" + cond.detail + ")";
    }
    fail(ErrorKind::kNotStructurallyControllable, "design precheck failed: " + failed);
  }

  DesignedWeights out;
  out.forest = rooted_spanning_forest(topo.graph, topo.drivers);
  out.weights = Vector::Zero(topo.graph.edge_count());
  for (const RootedTree& tree : out.forest.trees) {
    detail::design_tree(sub, topo.graph, tree, tol, rng, out.weights, out.draws);
  }

  const LumpedSystem sys = assemble_lumped(sub, topo, Fashion::kSiso, {Fashion::kSiso, {out.weights}});
  const PbhResult check = pbh_test(sys.A_sys, sys.B_sys, tol);
  out.normalized_margin = check.normalized;
  if (!check.controllable) {
    fail(ErrorKind::kDesignFailure, "designed network failed the final PBH check (normalized margin " +
                                        std::to_string(check.normalized) + ")");
  }
  return out;
}

/// Laplacian of g (off-tree weights zero) with pairwise distinct eigenvalues
/// and (L, e_root) controllable.
inline Matrix design_distinct_laplacian(const DiGraph& g, int root, const TolerancePolicy& tol, RandomSource& rng) {
  const VertexSet missing = unreachable_vertices(g, {root});
  if (!missing.empty()) {
    throw NoForestError(missing, "no spanning tree rooted at vertex " + std::to_string(root));
  }
  SubsystemDynamics scalar{Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  const NetworkTopology topo(g, {root});
  const DesignedWeights w = design_siso_weights(scalar, topo, tol, rng);
  const Matrix L = laplacian(g, w.weights);

  const Spectrum spectrum = eigenvalues(L);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    for (std::size_t j = i + 1; j < spectrum.size(); ++j) {
      if (std::abs(spectrum[i] - spectrum[j]) <= tol.eig_match_tol) {
        fail(ErrorKind::kDesignFailure, "designed Laplacian has a repeated eigenvalue");
      }
    }
  }
  Matrix e = Matrix::Zero(g.vertex_count(), 1);
  e(root - 1, 0) = 1.0;
  if (kalman_rank(L, e, tol) != g.vertex_count()) {
    fail(ErrorKind::kDesignFailure, "designed Laplacian is not controllable from the root");
  }
  return L;
}

}  // namespace nrcs
