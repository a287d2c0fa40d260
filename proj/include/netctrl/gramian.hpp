#ifndef NETCTRL_GRAMIAN_HPP_
#define NETCTRL_GRAMIAN_HPP_

#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "netctrl/rng.hpp"
#include "netctrl/spectral.hpp"

namespace netctrl {

/// Discrete-time system x(t+1) = A x(t) + B u(t) where B selects the
/// controlled nodes: B = [e_{k_1} ... e_{k_m}] for controls = {k_1,...,k_m}
/// (0-based, distinct).
template <typename Scalar>
struct ControlSystem {
  Matrix<Scalar> A;
  std::vector<Index> controls;
};

using ControlSystemd = ControlSystem<double>;

template <typename Scalar>
struct GramianResult {
  Matrix<Scalar> W;  // symmetric PSD reachability Gramian over horizon T
  long T = 0;
  Scalar lambda_min = 0;
  // Minimum of x^T W x over unit x orthogonal to the Perron vector v;
  // present when v was supplied.
  std::optional<Scalar> lambda_min_restricted;
  bool converged = false;  // last increment ||W(T)-W(T-1)||_max negligible
};

using GramianResultd = GramianResult<double>;

namespace detail {

template <typename Scalar>
void validate_system(const ControlSystem<Scalar>& sys) {
  validate_weight_matrix(sys.A);
  const Index n = sys.A.rows();
  if (sys.controls.empty() || static_cast<Index>(sys.controls.size()) > n)
    throw StructuralError("control set must satisfy 1 <= m <= n");
  std::set<Index> seen;
  for (Index k : sys.controls) {
    if (k < 0 || k >= n)
      throw StructuralError("control index out of range");
    if (!seen.insert(k).second)
      throw StructuralError("control indices must be distinct");
  }
}

template <typename Scalar>
Matrix<Scalar> input_matrix(const ControlSystem<Scalar>& sys) {
  Matrix<Scalar> B = Matrix<Scalar>::Zero(
      sys.A.rows(), static_cast<Index>(sys.controls.size()));
  for (std::size_t c = 0; c < sys.controls.size(); ++c)
    B(sys.controls[c], static_cast<Index>(c)) = 1;
  return B;
}

/// Smallest eigenvalue of a symmetric matrix expected PSD up to roundoff;
/// clamps the roundoff window to zero.
template <typename Scalar>
Scalar min_psd_eigenvalue(const Matrix<Scalar>& W) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(W,
                                                   Eigen::EigenvaluesOnly);
  const Scalar lo = es.eigenvalues()(0);
  const Scalar hi = es.eigenvalues()(W.rows() - 1);
  if (lo < -Scalar(1e-10) * std::max(Scalar(1), hi))
    throw Error("Gramian has a significantly negative eigenvalue");
  return std::max(lo, Scalar(0));
}

/// Orthonormal basis of the complement of v, built by (twice-iterated)
/// Gram-Schmidt over [v, e_1, ..., e_n].
template <typename Scalar>
Matrix<Scalar> orthonormal_complement(const Vector<Scalar>& v) {
  const Index n = v.size();
  Matrix<Scalar> basis(n, n);
  Index cols = 0;
  basis.col(cols++) = v.normalized();
  for (Index j = 0; j < n && cols < n; ++j) {
    Vector<Scalar> u = Vector<Scalar>::Unit(n, j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index c = 0; c < cols; ++c)
        u -= basis.col(c).dot(u) * basis.col(c);
    const Scalar norm = u.norm();
    if (norm > Scalar(1e-8)) basis.col(cols++) = u / norm;
  }
  if (cols != n)
    throw Error("failed to build an orthonormal complement basis");
  return basis.rightCols(n - 1);
}

}  // namespace detail

/// Reachability Gramian over horizon T computed by the recursion
/// W(t+1) = A W(t) A^T + B B^T, W(0) = 0. When v is supplied, also reports
/// the minimum restricted to the complement of v.
template <typename Scalar>
GramianResult<Scalar> gramian(const ControlSystem<Scalar>& sys, long T,
                              const Vector<Scalar>* v = nullptr) {
  detail::validate_system(sys);
  if (T < 1) throw StructuralError("horizon T must be >= 1");
  const Index n = sys.A.rows();

  Matrix<Scalar> W = Matrix<Scalar>::Zero(n, n);
  Matrix<Scalar> increment(n, n);
  for (long t = 0; t < T; ++t) {
    Matrix<Scalar> next = sys.A * W * sys.A.transpose();
    for (Index k : sys.controls) next(k, k) += 1;
    increment = next - W;
    W = std::move(next);
  }
  W = ((W + W.transpose()) / Scalar(2)).eval();

  GramianResult<Scalar> result;
  result.W = W;
  result.T = T;
  result.lambda_min = detail::min_psd_eigenvalue(W);
  result.converged = increment.cwiseAbs().maxCoeff() <=
                     Scalar(1e-12) * std::max(Scalar(1),
                                              W.cwiseAbs().maxCoeff());
  if (v != nullptr) {
    const Matrix<Scalar> P = detail::orthonormal_complement(*v);
    const Matrix<Scalar> projected =
        ((P.transpose() * W * P + (P.transpose() * W * P).transpose()) /
         Scalar(2))
            .eval();
    result.lambda_min_restricted = detail::min_psd_eigenvalue(projected);
  }
  return result;
}

template <typename Scalar>
struct MinEnergyInput {
  Matrix<Scalar> inputs;  // m x T, column tau holds u*(tau)
  Scalar energy = 0;      // x_f^T W^{-1} x_f
};

/// The least-norm input sequence steering x(0) = 0 to x(T) = x_f:
/// u*(tau) = B^T (A^T)^{T-1-tau} W^{-1} x_f.
template <typename Scalar>
MinEnergyInput<Scalar> min_energy_input(const ControlSystem<Scalar>& sys,
                                        long T, const Vector<Scalar>& x_f) {
  if (x_f.size() != sys.A.rows())
    throw StructuralError("target state has wrong dimension");
  const GramianResult<Scalar> G = gramian(sys, T);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(G.W,
                                                   Eigen::EigenvaluesOnly);
  const Scalar lambda_max = es.eigenvalues()(sys.A.rows() - 1);
  if (G.lambda_min <= Scalar(1e-12) * lambda_max)
    throw SingularGramianError(
        "Gramian is singular at this horizon; state not reachable",
        static_cast<double>(G.lambda_min));

  const Vector<Scalar> c = G.W.ldlt().solve(x_f);
  const Index m = static_cast<Index>(sys.controls.size());
  Matrix<Scalar> inputs(m, T);
  Vector<Scalar> q = c;  // q(tau) = (A^T)^{T-1-tau} c, filled backwards
  for (long tau = T - 1; tau >= 0; --tau) {
    for (Index i = 0; i < m; ++i) inputs(i, tau) = q(sys.controls[i]);
    if (tau > 0) q = sys.A.transpose() * q;
  }
  return {std::move(inputs), x_f.dot(c)};
}

/// Spectral upper bound on the Gramian's minimum eigenvalue, valid for all
/// horizons and all control sets of size m:
/// heterogeneity * sigma2^{n/m} / (sigma2^2 (1 - sigma2)).
template <typename Scalar>
Scalar lambda_min_bound(const SpectralData<Scalar>& S, Index m) {
  const Index n = S.v.size();
  if (m < 1 || m > n) throw StructuralError("m must satisfy 1 <= m <= n");
  const Scalar sigma2 = S.sigma2();
  if (sigma2 <= 0)
    throw DegenerateSpectrumError(
        "sigma2 <= 0: bound formula undefined (minimum eigenvalue is "
        "trivially bounded elsewhere)");
  if (sigma2 >= Scalar(1) - Scalar(1e-12))
    throw DegenerateSpectrumError("spectral gap collapsed: sigma2 ~ 1");
  const Scalar exponent = Scalar(n) / Scalar(m);
  return S.heterogeneity * std::pow(sigma2, exponent) /
         (sigma2 * sigma2 * (Scalar(1) - sigma2));
}

enum class SubsetSearch { kExhaustive, kSampled };

template <typename Scalar>
struct ControllabilityDegree {
  Scalar value = 0;                // max over searched K of lim_T lambda_min
  std::vector<Index> argmax;       // control set attaining it
  long subsets_evaluated = 0;
  long horizon = 0;                // truncation horizon of the best set
  bool horizon_converged = false;  // increments fell below tolerance
};

namespace detail {

/// C(n, m) saturated at cap+1.
inline long long combinations_capped(Index n, Index m, long long cap) {
  long long c = 1;
  for (Index i = 0; i < m; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return c;
}

/// lim_T lambda_min(W(T)) for a fixed control set, truncated once the
/// increment stays below tol for 5 consecutive horizons or T = 50 n.
template <typename Scalar>
void limit_lambda_min(const ControlSystem<Scalar>& sys, Scalar tol,
                      Scalar* value, long* horizon, bool* converged) {
  const Index n = sys.A.rows();
  const long t_max = 50 * static_cast<long>(n);
  Matrix<Scalar> W = Matrix<Scalar>::Zero(n, n);
  Scalar previous = 0;
  int quiet_steps = 0;
  long t = 0;
  while (t < t_max) {
    Matrix<Scalar> next = sys.A * W * sys.A.transpose();
    for (Index k : sys.controls) next(k, k) += 1;
    W = std::move(next);
    ++t;
    const Scalar current =
        min_psd_eigenvalue(((W + W.transpose()) / Scalar(2)).eval());
    quiet_steps = (current - previous < tol) ? quiet_steps + 1 : 0;
    previous = current;
    if (quiet_steps >= 5) break;
  }
  *value = previous;
  *horizon = t;
  *converged = quiet_steps >= 5;
}

}  // namespace detail

/// Lower estimate of the controllability degree: the best achievable
/// minimum Gramian eigenvalue over control sets of size m (exact over the
/// enumerated sets in exhaustive mode, up to horizon truncation).
/// Ties keep the lexicographically smallest control set.
template <typename Scalar>
ControllabilityDegree<Scalar> controllability_degree(
    const Matrix<Scalar>& A, Index m,
    SubsetSearch mode = SubsetSearch::kExhaustive, long long budget = 100000,
    std::uint64_t seed = 0, Scalar increment_tol = Scalar(1e-10)) {
  validate_weight_matrix(A);
  const Index n = A.rows();
  if (m < 1 || m > n) throw StructuralError("m must satisfy 1 <= m <= n");

  std::vector<std::vector<Index>> candidates;
  if (mode == SubsetSearch::kExhaustive) {
    if (detail::combinations_capped(n, m, budget) > budget)
      throw SizeError("C(n,m) exceeds the exhaustive-search budget");
    std::vector<Index> K(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) K[static_cast<std::size_t>(i)] = i;
    for (;;) {
      candidates.push_back(K);
      // next combination in lexicographic order
      Index i = m - 1;
      while (i >= 0 && K[static_cast<std::size_t>(i)] == n - m + i) --i;
      if (i < 0) break;
      ++K[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < m; ++j)
        K[static_cast<std::size_t>(j)] = K[static_cast<std::size_t>(j - 1)] + 1;
    }
  } else {
    const long long target =
        std::min(budget, detail::combinations_capped(n, m, budget));
    SplitMix64 rng(seed);
    std::set<std::vector<long>> seen;
    long long attempts = 0;
    while (static_cast<long long>(seen.size()) < target &&
           attempts < 100 * budget) {
      seen.insert(sample_subset(rng, static_cast<long>(n),
                                static_cast<long>(m)));
      ++attempts;
    }
    for (const auto& subset : seen) {
      std::vector<Index> K(subset.begin(), subset.end());
      candidates.push_back(std::move(K));
    }
  }

  ControllabilityDegree<Scalar> best;
  best.value = -1;
  for (const auto& K : candidates) {
    ControlSystem<Scalar> sys{A, K};
    Scalar value;
    long horizon;
    bool converged;
    detail::limit_lambda_min(sys, increment_tol, &value, &horizon,
                             &converged);
    ++best.subsets_evaluated;
    if (value > best.value) {
      best.value = value;
      best.argmax = K;
      best.horizon = horizon;
      best.horizon_converged = converged;
    }
  }
  return best;
}

}  // namespace netctrl

#endif  // NETCTRL_GRAMIAN_HPP_
