#ifndef NETCTRL_SPECTRAL_HPP_
#define NETCTRL_SPECTRAL_HPP_

#include <cmath>
#include <utility>

#include "netctrl/matrix_core.hpp"

namespace netctrl {

/// Perron data of an irreducible nonnegative matrix: the leading eigenvalue
/// lambda1, positive right/left eigenvectors v and w (A v = lambda1 v,
/// A^T w = lambda1 w), the ratio vector pi with pi_i = w_i / v_i normalized
/// to sum 1, and the nonincreasing spectrum sigma of the symmetrized product
/// Pi^{1/2} A A^R Pi^{-1/2}.
///
/// Normalization convention: sum_i v_i = 1, then w is scaled so that
/// sum_i pi_i = 1. Every exported quantity is invariant to this choice.
template <typename Scalar>
struct SpectralData {
  Scalar lambda1 = 0;
  Vector<Scalar> v;
  Vector<Scalar> w;
  Vector<Scalar> pi;
  Vector<Scalar> sigma;
  Scalar heterogeneity = 1;  // max_i pi_i / min_i pi_i

  Scalar sigma2() const { return sigma.size() > 1 ? sigma(1) : Scalar(0); }
  Scalar spectral_gap() const { return Scalar(1) - sigma2(); }
};

using SpectralDatad = SpectralData<double>;

namespace detail {

inline constexpr long kPowerIterationCap = 1000000;

/// Power iteration for the Perron pair of an irreducible nonnegative A,
/// run on I + A (primitive whenever A is irreducible, so the iteration
/// converges without assuming A itself aperiodic). `transpose` selects the
/// left eigenvector. Stops once ||A x - lambda x|| <= tol * lambda * ||x||;
/// lambda <= ||A||_2, so this is at least as strict as the contract
/// ||A v - lambda v|| <= tol * ||A||_2 * ||v||.
template <typename Scalar>
std::pair<Vector<Scalar>, Scalar> perron_vector(const Matrix<Scalar>& A,
                                                bool transpose, Scalar tol) {
  const Index n = A.rows();
  Vector<Scalar> x = Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n));
  Scalar lambda = 0;
  for (long it = 0; it < kPowerIterationCap; ++it) {
    Vector<Scalar> y = transpose ? Vector<Scalar>(A.transpose() * x)
                                 : Vector<Scalar>(A * x);
    lambda = x.dot(y) / x.squaredNorm();
    const Scalar residual = (y - lambda * x).norm();
    if (residual <= tol * lambda * x.norm()) {
      x /= x.sum();
      return {x, lambda};
    }
    x += y;
    x /= x.sum();
  }
  throw ConvergenceError("power iteration did not reach tolerance",
                         kPowerIterationCap);
}

/// A^S = Pi^{1/2} A Pi^{-1} A^T Pi^{1/2}, symmetrized to machine precision.
template <typename Scalar>
Matrix<Scalar> symmetrized_product_matrix(const Matrix<Scalar>& A,
                                          const Vector<Scalar>& pi) {
  const Vector<Scalar> root = pi.array().sqrt();
  Matrix<Scalar> AS = root.asDiagonal() * A * pi.cwiseInverse().asDiagonal() *
                      A.transpose() * root.asDiagonal();
  AS = ((AS + AS.transpose()) / Scalar(2)).eval();
  return AS;
}

/// Nonincreasing eigenvalues of a symmetric PSD matrix, with roundoff
/// negatives clamped to zero. Negativity beyond the clamp window violates
/// positive semidefiniteness and is reported as an error.
template <typename Scalar>
Vector<Scalar> psd_spectrum(const Matrix<Scalar>& S) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(S,
                                                   Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver did not converge",
                           30 * S.rows());
  Vector<Scalar> sigma = es.eigenvalues().reverse();
  const Scalar clamp = Scalar(1e-10) * std::max(Scalar(1), sigma(0));
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) < -clamp)
      throw Error("symmetrized product has a significantly negative "
                  "eigenvalue: " +
                  std::to_string(static_cast<double>(sigma(i))));
    if (sigma(i) < 0) sigma(i) = 0;
  }
  return sigma;
}

template <typename Scalar>
bool is_column_stochastic(const Matrix<Scalar>& A, Scalar tol) {
  return ((A.colwise().sum().array() - Scalar(1)).abs() <= tol).all();
}

}  // namespace detail

/// Computes the full Perron bundle for an irreducible A. Deterministic:
/// fixed start vector and iteration schedule.
template <typename Derived>
SpectralData<typename Derived::Scalar> leading_eigenpair(
    const Eigen::MatrixBase<Derived>& A,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-12)) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> M = A;
  if (!is_irreducible(M))
    throw StructuralError("leading eigenpair requires an irreducible matrix");
  if (!(tol > 0)) throw StructuralError("tol must be > 0");

  SpectralData<Scalar> data;
  auto [v, lambda_right] = detail::perron_vector(M, false, tol);
  auto [w, lambda_left] = detail::perron_vector(M, true, tol);
  (void)lambda_left;
  data.lambda1 = lambda_right;
  data.v = std::move(v);

  Vector<Scalar> pi = w.cwiseQuotient(data.v);
  const Scalar total = pi.sum();
  data.w = w / total;
  data.pi = pi / total;
  data.heterogeneity = data.pi.maxCoeff() / data.pi.minCoeff();
  data.sigma =
      detail::psd_spectrum(detail::symmetrized_product_matrix(M, data.pi));
  return data;
}

/// Time reversal Pi^{-1} A^T Pi. Shares the Perron pair (v, w) with A.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Matrix<Scalar> reversal(const Eigen::MatrixBase<Derived>& A,
                        const SpectralData<Scalar>& S) {
  return S.pi.cwiseInverse().asDiagonal() * A.transpose() *
         S.pi.asDiagonal();
}

template <typename Scalar>
struct SymmetrizedProduct {
  Matrix<Scalar> matrix;     // Pi^{1/2} A A^R Pi^{-1/2}, symmetric PSD
  Vector<Scalar> sigma;      // eigenvalues, nonincreasing
};

/// The symmetric PSD product whose second eigenvalue sigma2 drives the
/// energy bounds. Its top eigenvalue equals lambda1^2.
template <typename Derived, typename Scalar = typename Derived::Scalar>
SymmetrizedProduct<Scalar> symmetrized_product(
    const Eigen::MatrixBase<Derived>& A, const SpectralData<Scalar>& S) {
  SymmetrizedProduct<Scalar> result;
  result.matrix = detail::symmetrized_product_matrix(Matrix<Scalar>(A), S.pi);
  result.sigma = detail::psd_spectrum(result.matrix);
  return result;
}

/// True iff the stochastic matrix A equals its time reversal entrywise
/// within tol (max norm).
template <typename Derived, typename Scalar = typename Derived::Scalar>
bool is_reversible(const Eigen::MatrixBase<Derived>& A,
                   const SpectralData<Scalar>& S,
                   Scalar tol = Scalar(1e-9)) {
  const Matrix<Scalar> M = A;
  if (!detail::is_column_stochastic(M, tol))
    throw StructuralError(
        "reversibility is defined for column-stochastic matrices");
  const Matrix<Scalar> AR = reversal(M, S);
  return (M - AR).cwiseAbs().maxCoeff() <= tol;
}

/// Diagonal symmetrization Pi^{1/2} A Pi^{-1/2} of a reversible A. The
/// result is symmetric and shares A's (real) spectrum.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Matrix<Scalar> symmetrize(const Eigen::MatrixBase<Derived>& A,
                          const SpectralData<Scalar>& S,
                          Scalar tol = Scalar(1e-9)) {
  const Matrix<Scalar> M = A;
  if (!is_reversible(M, S, tol))
    throw StructuralError("symmetrize requires a reversible matrix");
  const Vector<Scalar> root = S.pi.array().sqrt();
  Matrix<Scalar> sym =
      root.asDiagonal() * M * root.cwiseInverse().asDiagonal();
  sym = ((sym + sym.transpose()) / Scalar(2)).eval();
  return sym;
}

template <typename Scalar>
struct ContractionCheck {
  Scalar lhs = 0;
  Scalar rhs = 0;
};

/// Evaluates the geometric contraction of left-propagated states on the
/// complement of v: lhs = ||(A^T)^t y||^2 in the Pi^{-1} norm against
/// rhs = sigma2^t ||y||^2. y is projected onto the orthogonal complement
/// of v first; a y (numerically) parallel to v is rejected.
template <typename Derived, typename Scalar = typename Derived::Scalar>
ContractionCheck<Scalar> check_contraction(const Eigen::MatrixBase<Derived>& A,
                                           const SpectralData<Scalar>& S,
                                           const Vector<Scalar>& y, long t) {
  if (t < 0) throw StructuralError("t must be >= 0");
  if (y.size() != A.rows()) throw StructuralError("y has wrong dimension");
  Vector<Scalar> y0 = y - (S.v.dot(y) / S.v.squaredNorm()) * S.v;
  if (y0.norm() <= Scalar(1e-10) * y.norm() || y.norm() == Scalar(0))
    throw StructuralError("y is parallel to v after projection");

  const Vector<Scalar> inv_pi = S.pi.cwiseInverse();
  const Matrix<Scalar> At = A.transpose();
  Vector<Scalar> z = y0;
  for (long k = 0; k < t; ++k) z = At * z;

  ContractionCheck<Scalar> result;
  result.lhs = z.cwiseAbs2().dot(inv_pi);
  result.rhs =
      std::pow(S.sigma2(), Scalar(t)) * y0.cwiseAbs2().dot(inv_pi);
  return result;
}

/// One-step contraction of the reversal on the complement of w:
/// lhs = ||A^R x||^2 in the Pi norm against rhs = sigma2 ||x||^2.
template <typename Derived, typename Scalar = typename Derived::Scalar>
ContractionCheck<Scalar> check_reversal_contraction(
    const Eigen::MatrixBase<Derived>& A, const SpectralData<Scalar>& S,
    const Vector<Scalar>& x) {
  if (x.size() != A.rows()) throw StructuralError("x has wrong dimension");
  Vector<Scalar> x0 = x - (S.w.dot(x) / S.w.squaredNorm()) * S.w;
  if (x0.norm() <= Scalar(1e-10) * x.norm() || x.norm() == Scalar(0))
    throw StructuralError("x is parallel to w after projection");

  const Vector<Scalar> z = reversal(A, S) * x0;
  ContractionCheck<Scalar> result;
  result.lhs = z.cwiseAbs2().dot(S.pi);
  result.rhs = S.sigma2() * x0.cwiseAbs2().dot(S.pi);
  return result;
}

/// True iff v lies in the kernel of A - A^T (within tol, scaled by
/// ||A||_2). Equivalent to the heterogeneity index being exactly 1.
template <typename Derived, typename Scalar = typename Derived::Scalar>
bool kernel_condition(const Eigen::MatrixBase<Derived>& A,
                      const SpectralData<Scalar>& S,
                      Scalar tol = Scalar(1e-9)) {
  const Matrix<Scalar> M = A;
  const Scalar residual = ((M - M.transpose()) * S.v).norm();
  return residual <= tol * spectral_norm(M) * S.v.norm();
}

}  // namespace netctrl

#endif  // NETCTRL_SPECTRAL_HPP_
