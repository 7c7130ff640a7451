#pragma once

// Dense numerical kernel: ranks, spectra, PBH controllability margins and a
// reproducible random source. Everything here is pure; RandomSource is the
// only stateful type and is meant for a single consumer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nrcs/error.hpp"

namespace nrcs {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Eigenvalues with multiplicity, sorted by real part then imaginary part.
using Spectrum = std::vector<Complex>;

struct TolerancePolicy {
  double rank_rel_tol = 1e-9;
  double eig_match_tol = 1e-7;
  double margin_floor = 1e-8;

  void validate() const {
    require(rank_rel_tol > 0.0 && rank_rel_tol < 1.0, ErrorKind::kInvalidInput,
            "rank_rel_tol must lie in (0, 1)");
    require(eig_match_tol > 0.0, ErrorKind::kInvalidInput, "eig_match_tol must be positive");
    require(margin_floor > 0.0, ErrorKind::kInvalidInput, "margin_floor must be positive");
  }
};

// Relative radius used to merge numerically split copies of a repeated
// eigenvalue. A Jordan block of size k perturbs its eigenvalue by roughly
// eps^(1/k) * |A|; 1e-4 covers blocks up to size 4.
inline constexpr double kClusterRelRadius = 1e-4;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (!m.allFinite()) fail(ErrorKind::kInvalidInput, what + " has non-finite entries");
}

template <typename Derived>
Vector singular_values(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return Vector();
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues();
}

inline double spectral_norm(const Matrix& m) {
  const Vector sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

/// Counts singular values above rank_rel_tol * max(rows, cols) * sigma_max.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, const TolerancePolicy& tol = {}) {
  require_finite(m, "matrix");
  const Vector sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold =
      tol.rank_rel_tol * static_cast<double>(std::max(m.rows(), m.cols())) * sv(0);
  return static_cast<int>((sv.array() > threshold).count());
}

inline bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

inline Spectrum eigenvalues(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::kInvalidInput,
          "eigenvalues: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
              ", expected square");
  require_finite(m, "matrix");
  if (m.size() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::kInvalidInput, "eigenvalue iteration did not converge");
  Spectrum out(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

/// Groups eigenvalues lying within `radius` of each other (single linkage) and
/// returns each group's mean. The mean of a split multiple eigenvalue is
/// accurate to working precision even when the individual copies are not.
inline std::vector<Complex> cluster_means(const Spectrum& spectrum, double radius) {
  const std::size_t count = spectrum.size();
  std::vector<int> group(count, -1);
  int groups = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups;
    std::vector<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t cur = frontier.back();
      frontier.pop_back();
      for (std::size_t j = 0; j < count; ++j) {
        if (group[j] < 0 && std::abs(spectrum[j] - spectrum[cur]) <= radius) {
          group[j] = groups;
          frontier.push_back(j);
        }
      }
    }
    ++groups;
  }
  std::vector<Complex> sums(groups, Complex(0.0, 0.0));
  std::vector<int> sizes(groups, 0);
  for (std::size_t i = 0; i < count; ++i) {
    sums[group[i]] += spectrum[i];
    ++sizes[group[i]];
  }
  std::vector<Complex> means(groups);
  for (int g = 0; g < groups; ++g) {
    means[g] = sums[g] / static_cast<double>(sizes[g]);
    // Conjugate-symmetric rounding noise on real clusters.
    if (std::abs(means[g].imag()) <= radius * 1e-6) means[g].imag(0.0);
  }
  std::sort(means.begin(), means.end(), complex_less);
  return means;
}

/// Distinct eigenvalues of `m`, with repeated (possibly defective) eigenvalues
/// merged to one representative.
inline std::vector<Complex> distinct_eigenvalues(const Matrix& m) {
  return cluster_means(eigenvalues(m), kClusterRelRadius * (1.0 + spectral_norm(m)));
}

inline double spectral_distance(const Complex& z, const std::vector<Complex>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& s : set) best = std::min(best, std::abs(z - s));
  return best;
}

/// Smallest singular value of [lambda*I - A, B].
inline double pbh_sigma_min(const Matrix& A, const Matrix& B, Complex lambda) {
  const Eigen::Index n = A.rows();
  CMatrix pencil(n, n + B.cols());
  pencil.leftCols(n) = -A.cast<Complex>();
  pencil.leftCols(n).diagonal().array() += lambda;
  pencil.rightCols(B.cols()) = B.cast<Complex>();
  const Vector sv = singular_values(pencil);
  return sv(n - 1);
}

struct PbhResult {
  double margin = 0.0;      // min over modes of sigma_min([lambda I - A, B])
  double normalized = 0.0;  // margin / (1 + |A| + |B|)
  bool controllable = false;
  Complex worst_mode{0.0, 0.0};
};

inline void check_pair(const Matrix& A, const Matrix& B, const char* which) {
  require(A.rows() == A.cols(), ErrorKind::kInvalidInput,
          std::string(which) + ": state matrix must be square");
  require(A.rows() >= 1, ErrorKind::kInvalidInput, std::string(which) + ": empty state matrix");
  require(B.rows() == A.rows(), ErrorKind::kInvalidInput,
          std::string(which) + ": dimension mismatch, A is " + std::to_string(A.rows()) + "x" +
              std::to_string(A.cols()) + " but the other factor has " + std::to_string(B.rows()) +
              " rows");
  require_finite(A, which);
  require_finite(B, which);
}

/// PBH test evaluated at every computed eigenvalue of A and at the mean of
/// every cluster of nearby eigenvalues.
inline PbhResult pbh_test(const Matrix& A, const Matrix& B, const TolerancePolicy& tol = {}) {
  check_pair(A, B, "pbh");
  const Spectrum spectrum = eigenvalues(A);
  const double norm_a = spectral_norm(A);
  std::vector<Complex> points = spectrum;
  const std::vector<Complex> clusters = cluster_means(spectrum, kClusterRelRadius * (1.0 + norm_a));
  points.insert(points.end(), clusters.begin(), clusters.end());

  PbhResult result;
  result.margin = std::numeric_limits<double>::infinity();
  for (const Complex& lambda : points) {
    const double s = pbh_sigma_min(A, B, lambda);
    if (s < result.margin) {
      result.margin = s;
      result.worst_mode = lambda;
    }
  }
  result.normalized = result.margin / (1.0 + norm_a + spectral_norm(B));
  result.controllable = result.normalized > tol.margin_floor;
  return result;
}

inline double pbh_margin(const Matrix& A, const Matrix& B, const TolerancePolicy& tol = {}) {
  return pbh_test(A, B, tol).margin;
}

inline bool is_controllable(const Matrix& A, const Matrix& B, const TolerancePolicy& tol = {}) {
  return pbh_test(A, B, tol).controllable;
}

inline PbhResult observability_test(const Matrix& A, const Matrix& C, const TolerancePolicy& tol = {}) {
  require(C.cols() == A.rows(), ErrorKind::kInvalidInput,
          "observability: C has " + std::to_string(C.cols()) + " columns, expected " +
              std::to_string(A.rows()));
  return pbh_test(A.transpose(), C.transpose(), tol);
}

inline double observability_margin(const Matrix& A, const Matrix& C, const TolerancePolicy& tol = {}) {
  return observability_test(A, C, tol).margin;
}

inline bool is_observable(const Matrix& A, const Matrix& C, const TolerancePolicy& tol = {}) {
  return observability_test(A, C, tol).controllable;
}

/// [B, AB, ..., A^(n-1) B]
inline Matrix kalman_matrix(const Matrix& A, const Matrix& B) {
  check_pair(A, B, "kalman");
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  Matrix out(n, n * m);
  if (m == 0) return out;
  out.leftCols(m) = B;
  for (Eigen::Index i = 1; i < n; ++i) {
    out.middleCols(i * m, m) = A * out.middleCols((i - 1) * m, m);
  }
  return out;
}

/// Rank of [B, AB, ..., A^(n-1) B] via the orthogonal staircase: the Krylov
/// space is grown one block at a time with an orthonormal basis, so the rank
/// is read off well-conditioned residuals instead of the raw Kalman columns.
inline int kalman_rank(const Matrix& A, const Matrix& B, const TolerancePolicy& tol = {}) {
  check_pair(A, B, "kalman");
  const Eigen::Index n = A.rows();
  const double scale_a = std::max(spectral_norm(A), 1.0);
  Matrix Q(n, 0);
  Matrix block = B;
  double scale = spectral_norm(B);
  while (Q.cols() < n && block.cols() > 0 && scale > 0.0) {
    for (int pass = 0; pass < 2; ++pass) block -= Q * (Q.transpose() * block);
    Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU);
    const Vector s = svd.singularValues();
    const double cutoff = tol.rank_rel_tol * static_cast<double>(std::max(n, B.cols())) * scale;
    Eigen::Index added = 0;
    while (added < s.size() && s(added) > cutoff && Q.cols() + added < n) ++added;
    if (added == 0) break;
    Matrix grown(n, Q.cols() + added);
    grown << Q, svd.matrixU().leftCols(added);
    Q = grown;
    block = A * Q.rightCols(added);
    scale = scale_a;
  }
  return static_cast<int>(Q.cols());
}

/// Deterministic pseudo-random stream (SplitMix64-seeded xoshiro256**). The
/// bit stream and the derived reals are fixed by the seed on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1].
  double uniform_signed() { return 2.0 * unit() - 1.0; }

  /// Uniform on [0.1, 2]; used wherever a draw must stay away from zero.
  double nonzero() { return 0.1 + 1.9 * unit(); }

  /// Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Seed for an independent child stream.
  std::uint64_t fork_seed() { return next_u64(); }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

inline RandomSource seeded_rng(std::uint64_t seed) { return RandomSource(seed); }

}  // namespace nrcs
