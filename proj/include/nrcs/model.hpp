#pragma once

// Diffusively coupled network model: identical subsystems (A, B, C) whose
// k-th input channel receives sum_j l^k_ij c_k (x_j - x_i), over a digraph
// where edge (i, j) means "i influences j". Lumped form:
//   A_sys = I_N (x) A - sum_k L_k (x) b_k c_k,   B_sys = Delta (x) B.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrcs/error.hpp"
#include "nrcs/graph.hpp"
#include "nrcs/numkernel.hpp"

namespace nrcs {

using RowVector = Eigen::RowVectorXd;

enum class Fashion { kSiso, kEquallyWeighted, kMultiWeighted };

inline const char* to_string(Fashion f) {
  switch (f) {
    case Fashion::kSiso: return "siso";
    case Fashion::kEquallyWeighted: return "equal";
    case Fashion::kMultiWeighted: return "multi";
  }
  return "?";
}

inline Fashion parse_fashion(const std::string& s) {
  if (s == "siso") return Fashion::kSiso;
  if (s == "equal") return Fashion::kEquallyWeighted;
  if (s == "multi") return Fashion::kMultiWeighted;
  fail(ErrorKind::kInvalidInput, "unknown fashion '" + s + "' (expected siso, equal or multi)");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct SubsystemDynamics {
  Matrix A;  // n x n
  Matrix B;  // n x r, columns b_k
  Matrix C;  // r x n, rows c_k

  int n() const { return static_cast<int>(A.rows()); }
  int r() const { return static_cast<int>(B.cols()); }
  Vector b(int k) const { return B.col(k); }
  RowVector c(int k) const { return C.row(k); }

  void validate() const {
    require(A.rows() >= 1 && A.rows() == A.cols(), ErrorKind::kInvalidInput,
            "A must be a non-empty square matrix");
    require(B.rows() == A.rows(), ErrorKind::kInvalidInput,
            "B has " + std::to_string(B.rows()) + " rows, expected n=" + std::to_string(n()));
    require(B.cols() >= 1, ErrorKind::kInvalidInput, "B needs at least one channel");
    require(C.rows() == B.cols() && C.cols() == A.rows(), ErrorKind::kInvalidInput,
            "C must be r x n = " + std::to_string(r()) + "x" + std::to_string(n()));
    require_finite(A, "A");
    require_finite(B, "B");
    require_finite(C, "C");
  }
};

struct NetworkTopology {
  DiGraph graph;
  VertexSet drivers;  // sorted, non-empty

  NetworkTopology() = default;
  NetworkTopology(DiGraph g, VertexSet d) : graph(std::move(g)), drivers(std::move(d)) {
    std::sort(drivers.begin(), drivers.end());
    drivers.erase(std::unique(drivers.begin(), drivers.end()), drivers.end());
    require(!drivers.empty(), ErrorKind::kInvalidInput, "at least one driving vertex is required");
    check_drivers(graph, drivers);
  }

  int vertex_count() const { return graph.vertex_count(); }

  /// Delta = [e_i] for i in drivers, N x |drivers|.
  Matrix selector() const {
    Matrix delta = Matrix::Zero(vertex_count(), static_cast<Eigen::Index>(drivers.size()));
    for (std::size_t k = 0; k < drivers.size(); ++k) delta(drivers[k] - 1, static_cast<Eigen::Index>(k)) = 1.0;
    return delta;
  }
};

inline void check_fashion(Fashion fashion, int r) {
  if (fashion == Fashion::kSiso) {
    require(r == 1, ErrorKind::kInvalidFashion, "siso fashion requires r = 1, got r = " + std::to_string(r));
  }
  require(r >= 1, ErrorKind::kInvalidFashion, "at least one channel required");
}

/// Per-channel edge weights, each channel a vector aligned with graph.edges().
/// Equal weighting stores a single channel shared by all r channels.
struct WeightAssignment {
  Fashion fashion = Fashion::kSiso;
  std::vector<Vector> channels;

  /// Weights seen by channel k (0-based).
  const Vector& channel(int k) const {
    return fashion == Fashion::kMultiWeighted ? channels.at(k) : channels.at(0);
  }

  void validate(const DiGraph& g, int r) const {
    check_fashion(fashion, r);
    const std::size_t expected = fashion == Fashion::kMultiWeighted ? static_cast<std::size_t>(r) : 1;
    require(channels.size() == expected, ErrorKind::kInvalidInput,
            "weight assignment has " + std::to_string(channels.size()) + " channel(s), expected " +
                std::to_string(expected));
    for (const auto& w : channels) {
      require(w.size() == g.edge_count(), ErrorKind::kInvalidInput,
              "weight vector length " + std::to_string(w.size()) + " does not match edge count " +
                  std::to_string(g.edge_count()));
      require_finite(w, "weights");
    }
  }

  static WeightAssignment zeros(const DiGraph& g, Fashion f, int r) {
    const int count = f == Fashion::kMultiWeighted ? r : 1;
    return {f, std::vector<Vector>(count, Vector::Zero(g.edge_count()))};
  }
};

/// Converts an edge -> weight map into a vector aligned with g.edges().
inline Vector edge_vector(const DiGraph& g, const std::map<Edge, double>& w) {
  Vector out = Vector::Zero(g.edge_count());
  for (const auto& [edge, value] : w) {
    const int k = g.edge_index(edge.first, edge.second);
    require(k >= 0, ErrorKind::kInvalidInput,
            "weight given for non-edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) + ")");
    out(k) = value;
  }
  return out;
}

/// L with L(j, i) = -w(i -> j) off the diagonal and zero row sums.
inline Matrix laplacian(const DiGraph& g, const Vector& w) {
  require(w.size() == g.edge_count(), ErrorKind::kInvalidInput, "one weight per edge expected");
  const int n = g.vertex_count();
  Matrix L = Matrix::Zero(n, n);
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto [i, j] = g.edges()[k];
    L(j - 1, i - 1) -= w(k);
    L(j - 1, j - 1) += w(k);
  }
  return L;
}

inline Matrix laplacian_from_weights(const NetworkTopology& topo, const std::map<Edge, double>& w) {
  return laplacian(topo.graph, edge_vector(topo.graph, w));
}

struct LumpedSystem {
  Matrix A_sys;  // nN x nN
  Matrix B_sys;  // nN x r|drivers|
};

inline LumpedSystem assemble_lumped(const SubsystemDynamics& sub, const NetworkTopology& topo, Fashion fashion,
                                    const WeightAssignment& w) {
  sub.validate();
  check_fashion(fashion, sub.r());
  require(w.fashion == fashion, ErrorKind::kInvalidInput,
          std::string("weights are for fashion '") + to_string(w.fashion) + "' but the model is '" +
              to_string(fashion) + "'");
  w.validate(topo.graph, sub.r());

  const int N = topo.vertex_count();
  LumpedSystem out;
  out.A_sys = kron(Matrix::Identity(N, N), sub.A);
  if (fashion == Fashion::kMultiWeighted) {
    for (int k = 0; k < sub.r(); ++k) {
      out.A_sys -= kron(laplacian(topo.graph, w.channel(k)), sub.b(k) * sub.c(k));
    }
  } else {
    out.A_sys -= kron(laplacian(topo.graph, w.channel(0)), sub.B * sub.C);
  }
  out.B_sys = kron(topo.selector(), sub.B);
  return out;
}

/// [A_sys, B_sys] = [A0, B0] + factor * diag(Lambda_1..Lambda_r) * [pattern, 0]
/// with factor = [K (x) b_1, ..., K (x) b_r] and pattern = col{K_I (x) c_k}.
struct LinearParameterization {
  Matrix A0;
  Matrix B0;
  Matrix factor;   // nN x r|E|
  Matrix pattern;  // r|E| x nN
  bool degenerate = false;

  LumpedSystem reconstruct(const WeightAssignment& w, int r) const {
    const Eigen::Index m = factor.cols() / std::max(r, 1);
    Vector diag(factor.cols());
    for (int k = 0; k < r; ++k) diag.segment(k * m, m) = w.channel(k);
    return {A0 + factor * diag.asDiagonal() * pattern, B0};
  }
};

inline LinearParameterization linear_parameterization(const SubsystemDynamics& sub, const NetworkTopology& topo) {
  sub.validate();
  const IncidencePair inc = incidence_matrices(topo.graph);
  const int N = topo.vertex_count();
  const int n = sub.n();
  const int r = sub.r();
  const int m = topo.graph.edge_count();
  LinearParameterization out;
  out.A0 = kron(Matrix::Identity(N, N), sub.A);
  out.B0 = kron(topo.selector(), sub.B);
  out.degenerate = inc.degenerate;
  out.factor.resize(static_cast<Eigen::Index>(n) * N, static_cast<Eigen::Index>(r) * m);
  out.pattern.resize(static_cast<Eigen::Index>(r) * m, static_cast<Eigen::Index>(n) * N);
  for (int k = 0; k < r; ++k) {
    out.factor.middleCols(static_cast<Eigen::Index>(k) * m, m) = kron(inc.K, sub.b(k));
    out.pattern.middleRows(static_cast<Eigen::Index>(k) * m, m) = kron(inc.K_I, sub.c(k));
  }
  return out;
}

/// Per-vertex SISO triple (A_[i], b_[i], c_[i]); dimensions may differ by vertex.
struct HeteroSubsystem {
  Matrix A;
  Vector b;
  RowVector c;

  int n() const { return static_cast<int>(A.rows()); }

  void validate(int vertex) const {
    const std::string where = "subsystem " + std::to_string(vertex);
    require(A.rows() >= 1 && A.rows() == A.cols(), ErrorKind::kInvalidInput, where + ": A must be square");
    require(b.size() == A.rows() && c.size() == A.rows(), ErrorKind::kInvalidInput,
            where + ": b and c must have length " + std::to_string(A.rows()));
    require_finite(A, where);
    require_finite(b, where);
    require_finite(c, where);
  }
};

using HeteroSubsystemList = std::vector<HeteroSubsystem>;

/// Structured perturbation: every vertex uses A + dA_i where dA_i shares the
/// sparsity mask and takes independent values.
struct HeteroPerturbation {
  Pattern mask;                      // n x n
  std::vector<Matrix> realizations;  // optional, one per vertex

  Matrix fill(RandomSource& rng) const {
    Matrix out = Matrix::Zero(mask.rows(), mask.cols());
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        if (mask(i, j)) out(i, j) = rng.uniform_signed();
      }
    }
    return out;
  }
};

inline HeteroSubsystemList perturbed_subsystems(const SubsystemDynamics& sub, const std::vector<Matrix>& deltas) {
  require(sub.r() == 1, ErrorKind::kInvalidFashion, "perturbed subsystems must be siso");
  HeteroSubsystemList out;
  for (const Matrix& d : deltas) {
    require(d.rows() == sub.n() && d.cols() == sub.n(), ErrorKind::kInvalidInput,
            "perturbation realization must be n x n");
    out.push_back({sub.A + d, sub.b(0), sub.c(0)});
  }
  return out;
}

inline HeteroSubsystemList identical_subsystems(const SubsystemDynamics& sub, int N) {
  return perturbed_subsystems(sub, std::vector<Matrix>(N, Matrix::Zero(sub.n(), sub.n())));
}

/// Block (i, i) = A_[i] - (sum_j l_ij) b_[i] c_[i]; block (i, j) = l_ij b_[i] c_[j],
/// where l_ij is the weight of edge j -> i.
inline LumpedSystem assemble_heterogeneous(const HeteroSubsystemList& subs, const NetworkTopology& topo,
                                           const Vector& w) {
  const int N = topo.vertex_count();
  require(static_cast<int>(subs.size()) == N, ErrorKind::kInvalidInput,
          "expected " + std::to_string(N) + " subsystems, got " + std::to_string(subs.size()));
  require(w.size() == topo.graph.edge_count(), ErrorKind::kInvalidInput, "one weight per edge expected");
  std::vector<Eigen::Index> offset(N + 1, 0);
  for (int i = 0; i < N; ++i) {
    subs[i].validate(i + 1);
    offset[i + 1] = offset[i] + subs[i].n();
  }
  const Eigen::Index dim = offset[N];
  LumpedSystem out{Matrix::Zero(dim, dim), Matrix::Zero(dim, static_cast<Eigen::Index>(topo.drivers.size()))};
  for (int i = 0; i < N; ++i) {
    out.A_sys.block(offset[i], offset[i], subs[i].n(), subs[i].n()) = subs[i].A;
  }
  for (int k = 0; k < topo.graph.edge_count(); ++k) {
    const auto [src, dst] = topo.graph.edges()[k];
    const int i = dst - 1;
    const int j = src - 1;
    out.A_sys.block(offset[i], offset[i], subs[i].n(), subs[i].n()) -= w(k) * subs[i].b * subs[i].c;
    out.A_sys.block(offset[i], offset[j], subs[i].n(), subs[j].n()) += w(k) * subs[i].b * subs[j].c;
  }
  for (std::size_t d = 0; d < topo.drivers.size(); ++d) {
    const int i = topo.drivers[d] - 1;
    out.B_sys.block(offset[i], static_cast<Eigen::Index>(d), subs[i].n(), 1) = subs[i].b;
  }
  return out;
}

/// A complete model description as ingested from JSON.
struct Model {
  SubsystemDynamics sub;
  NetworkTopology topo;
  Fashion fashion = Fashion::kSiso;
  std::optional<WeightAssignment> weights;          // pinned/reference weights
  std::optional<HeteroPerturbation> perturbation;   // structured dA_i
  std::optional<HeteroSubsystemList> hetero;        // fully heterogeneous siso

  int N() const { return topo.vertex_count(); }

  void validate() const {
    sub.validate();
    check_fashion(fashion, sub.r());
    if (weights) weights->validate(topo.graph, sub.r());
    if (perturbation || hetero) {
      require(fashion == Fashion::kSiso, ErrorKind::kInvalidFashion, "heterogeneous models must be siso");
    }
    if (perturbation) {
      require(perturbation->mask.rows() == sub.n() && perturbation->mask.cols() == sub.n(),
              ErrorKind::kInvalidInput, "perturbation pattern must be n x n");
      require(perturbation->realizations.empty() || static_cast<int>(perturbation->realizations.size()) == N(),
              ErrorKind::kInvalidInput, "perturbation realizations must be given for every vertex");
    }
    if (hetero) {
      require(static_cast<int>(hetero->size()) == N(), ErrorKind::kInvalidInput,
              "heterogeneous subsystem list must have one entry per vertex");
      for (int i = 0; i < N(); ++i) (*hetero)[i].validate(i + 1);
    }
  }
};

inline std::vector<Edge> bidirectional_chain(int N) {
  std::vector<Edge> edges;
  for (int i = 1; i < N; ++i) {
    edges.emplace_back(i, i + 1);
    edges.emplace_back(i + 1, i);
  }
  return edges;
}

/// Mass-spring-damper chain weights: l1_{i,i-1} = k_i/m_i, l1_{i,i+1} = k_{i+1}/m_i,
/// and likewise for the dampers on channel 2. k and mu are indexed 1..N (k[0] unused
/// by the chain couplings).
inline WeightAssignment msd_weights(const DiGraph& chain, const std::vector<double>& m,
                                    const std::vector<double>& k, const std::vector<double>& mu) {
  const int N = chain.vertex_count();
  require(static_cast<int>(m.size()) == N && static_cast<int>(k.size()) == N && static_cast<int>(mu.size()) == N,
          ErrorKind::kInvalidInput, "msd parameters must have one entry per mass");
  std::map<Edge, double> spring, damper;
  for (int i = 1; i <= N; ++i) {
    if (i > 1) {
      spring[{i - 1, i}] = k[i - 1] / m[i - 1];
      damper[{i - 1, i}] = mu[i - 1] / m[i - 1];
    }
    if (i < N) {
      spring[{i + 1, i}] = k[i] / m[i - 1];
      damper[{i + 1, i}] = mu[i] / m[i - 1];
    }
  }
  return {Fashion::kMultiWeighted, {edge_vector(chain, spring), edge_vector(chain, damper)}};
}

/// Tank chain weights: l_{i,i-1} = 1/(C_i R_{i-1}), l_{i,i+1} = 1/(C_i R_i).
inline WeightAssignment tank_weights(const DiGraph& chain, const std::vector<double>& capacitance,
                                     const std::vector<double>& resistance) {
  const int N = chain.vertex_count();
  require(static_cast<int>(capacitance.size()) == N && static_cast<int>(resistance.size()) == N,
          ErrorKind::kInvalidInput, "tank parameters must have one entry per tank");
  std::map<Edge, double> w;
  for (int i = 1; i <= N; ++i) {
    if (i > 1) w[{i - 1, i}] = 1.0 / (capacitance[i - 1] * resistance[i - 2]);
    if (i < N) w[{i + 1, i}] = 1.0 / (capacitance[i - 1] * resistance[i - 1]);
  }
  return {Fashion::kSiso, {edge_vector(chain, w)}};
}

/// Swing-equation generators: dA_i(2,2) = -d_i/m_i, l_ij = k_ij/m_i.
inline std::vector<Matrix> power_realizations(const std::vector<double>& m, const std::vector<double>& d) {
  require(m.size() == d.size(), ErrorKind::kInvalidInput, "one damping per inertia expected");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Matrix delta = Matrix::Zero(2, 2);
    delta(1, 1) = -d[i] / m[i];
    out.push_back(delta);
  }
  return out;
}

inline WeightAssignment power_weights(const DiGraph& g, const std::vector<double>& m,
                                      const std::map<Edge, double>& susceptance) {
  std::map<Edge, double> w;
  for (const auto& [edge, k] : susceptance) w[edge] = k / m.at(edge.second - 1);
  return {Fashion::kSiso, {edge_vector(g, w)}};
}

enum class ExampleName { kMsd, kTanks, kPower };

inline ExampleName parse_example_name(const std::string& s) {
  if (s == "msd") return ExampleName::kMsd;
  if (s == "tanks") return ExampleName::kTanks;
  if (s == "power") return ExampleName::kPower;
  fail(ErrorKind::kInvalidInput, "unknown example '" + s + "' (expected msd, tanks or power)");
}

/// Built-in physical examples on a bidirectional chain driven at vertex 1,
/// with reference weights from unit physical parameters. `graph` overrides
/// the chain for the power example.
inline Model example_model(ExampleName name, int N, std::optional<DiGraph> graph = std::nullopt) {
  require(N >= 2, ErrorKind::kInvalidInput, "examples need N >= 2");
  const DiGraph chain(N, bidirectional_chain(N));
  const std::vector<double> ones(N, 1.0);
  Model model;
  switch (name) {
    case ExampleName::kMsd: {
      model.sub.A = (Matrix(2, 2) << 0, 1, 0, 0).finished();
      model.sub.B = (Matrix(2, 2) << 0, 0, 1, 1).finished();
      model.sub.C = Matrix::Identity(2, 2);
      model.fashion = Fashion::kMultiWeighted;
      model.topo = NetworkTopology(chain, {1});
      model.weights = msd_weights(chain, ones, ones, ones);
      break;
    }
    case ExampleName::kTanks: {
      model.sub.A = Matrix::Zero(1, 1);
      model.sub.B = Matrix::Ones(1, 1);
      model.sub.C = Matrix::Ones(1, 1);
      model.fashion = Fashion::kSiso;
      model.topo = NetworkTopology(chain, {1});
      model.weights = tank_weights(chain, ones, ones);
      break;
    }
    case ExampleName::kPower: {
      const DiGraph g = graph ? *graph : chain;
      require(g.vertex_count() == N, ErrorKind::kInvalidInput, "power topology must have N vertices");
      model.sub.A = (Matrix(2, 2) << 0, 1, 0, 0).finished();
      model.sub.B = (Matrix(2, 1) << 0, 1).finished();
      model.sub.C = (Matrix(1, 2) << 1, 0).finished();
      model.fashion = Fashion::kSiso;
      model.topo = NetworkTopology(g, {1});
      std::map<Edge, double> k;
      for (const Edge& e : g.edges()) k[e] = 1.0;
      model.weights = power_weights(g, ones, k);
      HeteroPerturbation p;
      p.mask = Pattern::Constant(2, 2, false);
      p.mask(1, 1) = true;
      p.realizations = power_realizations(ones, ones);
      model.perturbation = p;
      break;
    }
  }
  return model;
}

}  // namespace nrcs
