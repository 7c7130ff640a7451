#pragma once

// Seeded generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nrcs/model.hpp"
#include "nrcs/numkernel.hpp"

namespace nrcs::testing {

inline Matrix random_matrix(RandomSource& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform_signed();
  return m;
}

// Random matrix of prescribed rank k as a product of thin factors.
inline Matrix random_low_rank(RandomSource& rng, int rows, int cols, int k) {
  return random_matrix(rng, rows, k) * random_matrix(rng, k, cols);
}

// Random tree on N vertices: parent of v is a uniformly chosen earlier vertex
// in a random labelling that keeps `root` first.
inline std::vector<Edge> random_tree(RandomSource& rng, int N, int root = 1) {
  std::vector<int> labels;
  for (int v = 1; v <= N; ++v)
    if (v != root) labels.push_back(v);
  for (int i = static_cast<int>(labels.size()) - 1; i > 0; --i) std::swap(labels[i], labels[rng.uniform_int(0, i)]);
  labels.insert(labels.begin(), root);
  std::vector<Edge> edges;
  for (int k = 1; k < N; ++k) edges.emplace_back(labels[rng.uniform_int(0, k - 1)], labels[k]);
  return edges;
}

// Random digraph: each ordered pair present with probability p.
inline std::vector<Edge> random_edges(RandomSource& rng, int N, double p) {
  std::vector<Edge> edges;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j)
      if (i != j && rng.unit() < p) edges.emplace_back(i, j);
  return edges;
}

inline std::vector<Edge> directed_chain(int N) {
  std::vector<Edge> edges;
  for (int i = 1; i < N; ++i) edges.emplace_back(i, i + 1);
  return edges;
}

// Elementwise Kronecker product, written without any library helper.
inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

// Laplacian straight from the definition: l_ji = w(i->j), L = [-l], zero row sums.
inline Matrix laplacian_oracle(int N, const std::vector<Edge>& edges, const Vector& w) {
  Matrix l = Matrix::Zero(N, N);
  for (std::size_t k = 0; k < edges.size(); ++k) l(edges[k].second - 1, edges[k].first - 1) += w(k);
  Matrix L = -l;
  for (int i = 0; i < N; ++i) L(i, i) = l.row(i).sum();
  return L;
}

// Lumped pair assembled block by block: A_sys(i,j) = delta_ij A - sum_k L_k(i,j) b_k c_k.
inline std::pair<Matrix, Matrix> lumped_oracle(const SubsystemDynamics& sub, int N, const std::vector<Edge>& edges,
                                               const VertexSet& drivers, const std::vector<Vector>& channels) {
  const int n = sub.n();
  const int r = sub.r();
  Matrix A = Matrix::Zero(n * N, n * N);
  Matrix B = Matrix::Zero(n * N, r * static_cast<int>(drivers.size()));
  std::vector<Matrix> L;
  for (int k = 0; k < r; ++k) L.push_back(laplacian_oracle(N, edges, channels[channels.size() == 1 ? 0 : k]));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Matrix block = i == j ? sub.A : Matrix::Zero(n, n);
      for (int k = 0; k < r; ++k) block -= L[k](i, j) * sub.B.col(k) * sub.C.row(k);
      A.block(i * n, j * n, n, n) = block;
    }
  }
  for (std::size_t d = 0; d < drivers.size(); ++d) B.block((drivers[d] - 1) * n, d * r, n, r) = sub.B;
  return {A, B};
}

// Rank of the Kalman matrix by plain SVD on the raw columns (no scaling).
inline int kalman_rank_oracle(const Matrix& A, const Matrix& B) {
  const int n = static_cast<int>(A.rows());
  Matrix K(n, B.cols() * n);
  Matrix block = B;
  for (int k = 0; k < n; ++k) {
    K.middleCols(k * B.cols(), B.cols()) = block;
    block = A * block;
  }
  Eigen::JacobiSVD<Matrix> svd(K);
  const Vector s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-9 * s(0)) ++rank;
  return rank;
}

inline Matrix row(std::initializer_list<double> v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

inline Matrix col(std::initializer_list<double> v) { return row(v).transpose(); }

}  // namespace nrcs::testing
