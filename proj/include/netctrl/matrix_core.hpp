#ifndef NETCTRL_MATRIX_CORE_HPP_
#define NETCTRL_MATRIX_CORE_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "netctrl/errors.hpp"

namespace netctrl {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrixd = Matrix<double>;
using Vectord = Vector<double>;

/// Throws StructuralError unless A is square, non-empty, and all entries are
/// finite and >= 0. Weight matrices are adjacency matrices of weighted
/// digraphs: A(i,j) > 0 encodes the edge (j,i).
template <typename Derived>
void validate_weight_matrix(const Eigen::MatrixBase<Derived>& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw StructuralError("weight matrix must be square with n >= 1");
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) {
      const auto x = A.derived()(i, j);
      if (!(x >= 0) || !std::isfinite(static_cast<double>(x)))
        throw StructuralError("weight matrix entries must be finite and >= 0");
    }
}

namespace detail {

/// Directed adjacency of the nonzero pattern: arc u -> w iff A(w,u) > 0.
template <typename Derived>
std::vector<std::vector<Index>> pattern_arcs(
    const Eigen::MatrixBase<Derived>& A) {
  const Index n = A.rows();
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u)
    for (Index w = 0; w < n; ++w)
      if (A.derived()(w, u) > 0) out[static_cast<std::size_t>(u)].push_back(w);
  return out;
}

inline std::vector<std::vector<Index>> reverse_arcs(
    const std::vector<std::vector<Index>>& out) {
  std::vector<std::vector<Index>> in(out.size());
  for (std::size_t u = 0; u < out.size(); ++u)
    for (Index w : out[u]) in[static_cast<std::size_t>(w)].push_back(
        static_cast<Index>(u));
  return in;
}

inline bool all_reachable(const std::vector<std::vector<Index>>& arcs,
                          Index n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index w : arcs[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

inline bool strongly_connected(const std::vector<std::vector<Index>>& arcs,
                               Index n) {
  if (n == 1) return true;
  return all_reachable(arcs, n) && all_reachable(reverse_arcs(arcs), n);
}

/// Period (gcd of directed cycle lengths) of a strongly connected pattern,
/// via BFS levels: gcd over arcs (u,w) of |level(u) + 1 - level(w)|.
inline long graph_period(const std::vector<std::vector<Index>>& arcs,
                         Index n) {
  std::vector<long> level(static_cast<std::size_t>(n), -1);
  std::vector<Index> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Index u = queue[head];
    for (Index w : arcs[static_cast<std::size_t>(u)])
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] =
            level[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
  }
  long g = 0;
  for (Index u = 0; u < n; ++u)
    for (Index w : arcs[static_cast<std::size_t>(u)])
      g = std::gcd(g, std::abs(level[static_cast<std::size_t>(u)] + 1 -
                               level[static_cast<std::size_t>(w)]));
  return g;
}

inline bool pattern_primitive(const std::vector<std::vector<Index>>& arcs,
                              Index n) {
  return strongly_connected(arcs, n) && graph_period(arcs, n) == 1;
}

/// Row bitmasks of the nonzero pattern, for cheap pattern products.
template <typename Derived>
std::vector<std::vector<std::uint64_t>> pattern_row_bits(
    const Eigen::MatrixBase<Derived>& A) {
  const Index n = A.rows();
  const std::size_t words = static_cast<std::size_t>((n + 63) / 64);
  std::vector<std::vector<std::uint64_t>> rows(
      static_cast<std::size_t>(n), std::vector<std::uint64_t>(words, 0));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (A.derived()(i, j) > 0)
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j / 64)] |=
            std::uint64_t{1} << (j % 64);
  return rows;
}

/// Arcs of the nonzero pattern of A*A^T: (A A^T)(i,j) > 0 iff rows i and j
/// of A share a positive column.
template <typename Derived>
std::vector<std::vector<Index>> product_pattern_arcs(
    const Eigen::MatrixBase<Derived>& A) {
  const Index n = A.rows();
  const auto rows = pattern_row_bits(A);
  std::vector<std::vector<Index>> arcs(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const auto& ri = rows[static_cast<std::size_t>(i)];
      const auto& rj = rows[static_cast<std::size_t>(j)];
      bool hit = false;
      for (std::size_t k = 0; k < ri.size() && !hit; ++k)
        hit = (ri[k] & rj[k]) != 0;
      // entry (i,j) > 0 means arc j -> i
      if (hit) arcs[static_cast<std::size_t>(j)].push_back(i);
    }
  return arcs;
}

}  // namespace detail

/// True iff the digraph of A's nonzero pattern is strongly connected
/// (computed by graph reachability, which is exact on the pattern).
template <typename Derived>
bool is_irreducible(const Eigen::MatrixBase<Derived>& A) {
  validate_weight_matrix(A);
  return detail::strongly_connected(detail::pattern_arcs(A), A.rows());
}

/// True iff M's nonzero pattern is irreducible and aperiodic, i.e. some
/// power of the 0/1 pattern is entrywise positive.
template <typename Derived>
bool is_pattern_primitive(const Eigen::MatrixBase<Derived>& M) {
  validate_weight_matrix(M);
  return detail::pattern_primitive(detail::pattern_arcs(M), M.rows());
}

/// Largest singular value.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& A) {
  Matrix<typename Derived::Scalar> M = A;
  Eigen::BDCSVD<Matrix<typename Derived::Scalar>> svd(M);
  return svd.singularValues()(0);
}

/// Structural predicates of a weight matrix. boundary_spectrum reports
/// whether eigenvalues within tolerance of the unit circle were found, in
/// which case marginal stability rests on the numeric semisimplicity proxy
/// rather than on a clear-cut spectral radius.
template <typename Scalar>
struct StructuralReport {
  bool irreducible = false;
  bool marginally_stable = false;
  bool strictly_stable = false;
  Scalar spectral_radius = 0;
  bool product_pattern_primitive = false;  // pattern of A*A^T
  bool positive_diagonal = false;
  bool boundary_spectrum = false;
};

/// Classifies A: spectral radius, strict/marginal Schur stability, and the
/// pattern predicates used by the energy bounds. Marginal stability of
/// boundary eigenvalues (|lambda| >= 1 - tol) is decided by comparing
/// algebraic multiplicity with n - rank(A - lambda I), the rank taken at
/// threshold 1e-8 * ||A||_2.
template <typename Derived>
StructuralReport<typename Derived::Scalar> stability_report(
    const Eigen::MatrixBase<Derived>& A,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  using Complex = std::complex<Scalar>;
  validate_weight_matrix(A);
  if (!(tol > 0)) throw StructuralError("tol must be > 0");
  const Index n = A.rows();
  const Matrix<Scalar> M = A;

  StructuralReport<Scalar> report;
  const auto arcs = detail::pattern_arcs(M);
  report.irreducible = detail::strongly_connected(arcs, n);
  report.product_pattern_primitive =
      detail::pattern_primitive(detail::product_pattern_arcs(M), n);
  report.positive_diagonal = (M.diagonal().array() > 0).all();

  Eigen::EigenSolver<Matrix<Scalar>> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigenvalue solver did not converge", 40 * n);
  const Vector<Complex> eigs = es.eigenvalues();
  report.spectral_radius = eigs.array().abs().maxCoeff();
  report.strictly_stable = report.spectral_radius < Scalar(1) - tol;

  std::vector<Complex> boundary;
  for (Index i = 0; i < n; ++i)
    if (std::abs(eigs(i)) >= Scalar(1) - tol) boundary.push_back(eigs(i));
  report.boundary_spectrum = !boundary.empty();

  if (report.spectral_radius > Scalar(1) + tol) {
    report.marginally_stable = false;
    return report;
  }

  // Cluster boundary eigenvalues, then test each cluster for semisimplicity.
  std::sort(boundary.begin(), boundary.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const Scalar cluster_radius =
      Scalar(1e-7) * std::max(Scalar(1), report.spectral_radius);
  const Scalar rank_threshold = Scalar(1e-8) * spectral_norm(M);
  bool semisimple = true;
  std::size_t i = 0;
  while (i < boundary.size() && semisimple) {
    std::size_t j = i + 1;
    Complex sum = boundary[i];
    while (j < boundary.size() &&
           std::abs(boundary[j] - boundary[j - 1]) <= cluster_radius) {
      sum += boundary[j];
      ++j;
    }
    const Complex center = sum / Scalar(j - i);
    Matrix<Complex> shifted = M.template cast<Complex>();
    shifted.diagonal().array() -= center;
    Eigen::BDCSVD<Matrix<Complex>> svd(shifted);
    Index rank = 0;
    for (Index k = 0; k < n; ++k)
      if (svd.singularValues()(k) > rank_threshold) ++rank;
    const Index geometric = n - rank;
    semisimple = geometric == static_cast<Index>(j - i);
    i = j;
  }
  report.marginally_stable = semisimple;
  return report;
}

}  // namespace netctrl

#endif  // NETCTRL_MATRIX_CORE_HPP_
