#ifndef TMSD_ESTIMATOR_HPP
#define TMSD_ESTIMATOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tmsd/sampling.hpp"
#include "tmsd/subspace.hpp"

namespace tmsd {

/// t(T) = ||T - P * T||_F^2, the energy of x outside the subspace.
inline double residual_energy_full(const Subspace& s, const Tensor3d& x) {
  if (x.n1() != s.ambient() || x.n2() != 1 || x.n3() != s.basis().n3())
    throw DimensionMismatch("residual_energy_full: shape");
  Tensor3d r = x - s.project(x);
  return r.squaredNorm();
}

/// Least-squares restriction operator for tubal sampling: per-slice
/// rank-revealing decompositions of the restricted transform-domain basis,
/// reusable across many signals with one sample set. Rank-deficient slices
/// fall back to the minimum-norm solution, so the residual is defined at any
/// m and is identically zero for in-subspace signals.
class TubalRestrictionOperator {
 public:
  TubalRestrictionOperator(const SampleSet& omega, const Subspace& s)
      : transform_(s.transform()) {
    require_kind(omega, SamplingKind::tubal);
    Tensor3d uo = restrict_basis_tubal(omega, s.basis());
    m_ = uo.n1();
    n3_ = uo.n3();
    Tensor3cd uh = transform(transform_, uo);
    slices_.reserve(n3_);
    cod_.reserve(n3_);
    min_slice_rank_ = uo.n2();
    for (Index k = 0; k < n3_; ++k) {
      slices_.emplace_back(uh.slice(k));
      cod_.emplace_back(slices_.back());
      min_slice_rank_ = std::min(min_slice_rank_, cod_.back().rank());
    }
    expected_rank_ = uo.n2();
  }

  Index m() const { return m_; }
  Index n3() const { return n3_; }

  /// False when some transform-domain slice of the restricted basis lost
  /// rank (the strict projection P_omega would be undefined there).
  bool full_rank() const { return min_slice_rank_ == expected_rank_; }

  /// x_omega - P_omega * x_omega for an already restricted m x 1 x n3 signal.
  Tensor3d residual_tensor(const Tensor3d& xo) const {
    if (xo.n1() != m_ || xo.n2() != 1 || xo.n3() != n3_)
      throw DimensionMismatch("residual_tensor: restricted signal shape");
    Tensor3cd xh = transform(transform_, xo);
    Tensor3cd rh(m_, 1, n3_);
    for (Index k = 0; k < n3_; ++k) {
      VectorX<Complex> b = xh.slice(k).col(0);
      rh.slice(k).col(0) = b - slices_[k] * cod_[k].solve(b);
    }
    // the residual of a real signal is real; roundoff tolerance is loose
    // because restricted slices can be poorly conditioned at small m
    return to_real(inverse_transform(transform_, rh), 1e-6, xo.mat().norm());
  }

  double residual_energy_restricted(const Tensor3d& xo) const {
    return residual_tensor(xo).squaredNorm();
  }

 private:
  LinearTransform transform_;
  Index m_ = 0;
  Index n3_ = 0;
  Index min_slice_rank_ = 0;
  Index expected_rank_ = 0;
  std::vector<MatrixX<Complex>> slices_;
  std::vector<Eigen::CompleteOrthogonalDecomposition<MatrixX<Complex>>> cod_;
};

/// ||T_omega - P_omega * T_omega||_F^2 for tubal sampling.
inline double residual_energy_tubal(const SampleSet& omega, const Subspace& s,
                                    const Tensor3d& x) {
  TubalRestrictionOperator op(omega, s);
  return op.residual_energy_restricted(restrict_signal_tubal(omega, x));
}

/// Elementwise analog on the distinct sampled cells of the embedding.
class ElementwiseRestrictionOperator {
 public:
  ElementwiseRestrictionOperator(const SampleSet& omega,
                                 const EmbeddedSubspace& e)
      : cells_(distinct_cells(omega)) {
    require_kind(omega, SamplingKind::elementwise);
    if (omega.n1 != e.n1 || omega.n3 != e.n3)
      throw DimensionMismatch("restriction: shape");
    rows_.resize(static_cast<Index>(cells_.size()), e.basis_matrix.cols());
    for (Index i = 0; i < rows_.rows(); ++i)
      rows_.row(i) = e.basis_matrix.row(cells_[i]);
    cod_.compute(rows_);
  }

  const std::vector<Index>& cells() const { return cells_; }
  Index sampled_count() const { return rows_.rows(); }
  bool full_rank() const { return cod_.rank() == rows_.cols(); }

  /// Values of a tensor column on the distinct sampled cells.
  VectorX<double> sample_values(const Tensor3d& x) const {
    VectorX<double> v(rows_.rows());
    for (Index i = 0; i < rows_.rows(); ++i) {
      Index cell = cells_[i];
      v(i) = x(cell % x.n1(), 0, cell / x.n1());
    }
    return v;
  }

  VectorX<double> residual_vector(const VectorX<double>& values) const {
    if (values.size() != rows_.rows())
      throw DimensionMismatch("residual_vector: sampled value count");
    return values - rows_ * cod_.solve(values);
  }

  double residual_energy(const VectorX<double>& values) const {
    return residual_vector(values).squaredNorm();
  }

 private:
  std::vector<Index> cells_;
  MatrixX<double> rows_;
  Eigen::CompleteOrthogonalDecomposition<MatrixX<double>> cod_;
};

/// ||t_omega - P_omega t_omega||_2^2 for elementwise sampling. The sampled
/// signal x is given full-size; restriction and zero-filling are implied.
inline double residual_energy_elementwise(const SampleSet& omega,
                                          const EmbeddedSubspace& e,
                                          const Tensor3d& x) {
  if (x.n1() != e.n1 || x.n2() != 1 || x.n3() != e.n3)
    throw DimensionMismatch("residual_energy_elementwise: shape");
  ElementwiseRestrictionOperator op(omega, e);
  return op.residual_energy(op.sample_values(x));
}

enum class SamplingRegime { tubal, elementwise };

/// Probability-bound report: the alpha/beta/gamma constants, the minimum
/// sample size, and the concentration interval for the sampled residual.
/// lower_raw keeps the unclamped value; the usable lower bound is zero when
/// gamma >= 1 (the Gram bound behind it is vacuous there).
struct BoundReport {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  Index m_min = 0;
  double lower = 0;
  double upper = 0;
  double lower_raw = 0;
  bool valid = false;
  SamplingRegime regime = SamplingRegime::tubal;
  double c_sq = 0;
};

struct TubalSignalNorms {
  double f_sq;         // ||Y||_F^2 of the S-perp component
  double inf_star_sq;  // ||Y||_{inf*}^2
};

struct VectorSignalNorms {
  double l2_sq;    // ||y||_2^2 of the embedded S-perp component
  double linf_sq;  // ||y||_inf^2
};

namespace detail {

inline double bound_alpha(double n_ambient, double peak_sq, double total_sq,
                          double m, double log_inv_delta) {
  if (!(total_sq > 0)) return 0.0;
  double ratio = (n_ambient * peak_sq - total_sq) / total_sq;
  if (ratio < 0) ratio = 0;
  return std::sqrt(2.0 * ratio / m * log_inv_delta) +
         2.0 * ratio / (3.0 * m) * log_inv_delta;
}

}  // namespace detail

/// Tubal-sampling concentration bounds:
///   [m(1-a) - c^2 n2 mu b/(1-g)]/n1 * res  <=  estimate  <= (1+a) m/n1 * res
/// with m_min = ceil(8/3 n2 mu log(2 n2 n3 / delta)).
inline BoundReport bound_tubal(double delta, Index m, Index n1, Index n2,
                               Index n3, double mu, double c_sq,
                               const TubalSignalNorms& y,
                               double full_residual) {
  if (!(delta > 0) || !(delta < 1)) throw InvalidDelta("delta in (0,1)");
  const double lid = std::log(1.0 / delta);
  const double lt = std::log(2.0 * n2 * n3 / delta);
  BoundReport r;
  r.regime = SamplingRegime::tubal;
  r.c_sq = c_sq;
  r.alpha = detail::bound_alpha(n1, y.inf_star_sq, y.f_sq, m, lid);
  r.beta = std::pow(1.0 + 2.0 * std::sqrt(lid), 2);
  r.gamma = std::sqrt(8.0 * c_sq * n2 * mu / (3.0 * m) * lt);
  r.m_min = static_cast<Index>(std::ceil(8.0 / 3.0 * n2 * mu * lt));
  r.upper = (1.0 + r.alpha) * m / n1 * full_residual;
  r.lower_raw =
      (m * (1.0 - r.alpha) - c_sq * n2 * mu * r.beta / (1.0 - r.gamma)) / n1 *
      full_residual;
  r.lower = r.gamma >= 1.0 ? 0.0 : std::max(0.0, r.lower_raw);
  r.valid = r.gamma < 1.0 && m >= r.m_min;
  return r;
}

/// Elementwise-sampling concentration bounds (Theorem with n1*n3 ambient
/// size, mu(bold S), and the cos^2(theta) scale).
inline BoundReport bound_elementwise(double delta, Index m, Index n1, Index n2,
                                     Index n3, double mu_vec,
                                     const VectorSignalNorms& y,
                                     double cos_theta, double full_residual) {
  if (!(delta > 0) || !(delta < 1)) throw InvalidDelta("delta in (0,1)");
  if (cos_theta < 0 || cos_theta > 1 + 1e-12)
    throw InvalidArg("cos_theta in [0,1]");
  const double lid = std::log(1.0 / delta);
  const double lt = std::log(2.0 * n2 * n3 / delta);
  const double ambient = static_cast<double>(n1) * static_cast<double>(n3);
  const double scale = cos_theta * cos_theta * full_residual;
  BoundReport r;
  r.regime = SamplingRegime::elementwise;
  r.c_sq = 1.0;
  r.alpha = detail::bound_alpha(ambient, y.linf_sq, y.l2_sq, m, lid);
  r.beta = std::pow(1.0 + 2.0 * std::sqrt(lid), 2);
  r.gamma = std::sqrt(8.0 * n2 * n3 * mu_vec / (3.0 * m) * lt);
  r.m_min = static_cast<Index>(std::ceil(8.0 / 3.0 * n2 * n3 * mu_vec * lt));
  r.upper = (1.0 + r.alpha) * m / ambient * scale;
  r.lower_raw =
      (m * (1.0 - r.alpha) - n2 * n3 * mu_vec * r.beta / (1.0 - r.gamma)) /
      ambient * scale;
  r.lower = r.gamma >= 1.0 ? 0.0 : std::max(0.0, r.lower_raw);
  r.valid = r.gamma < 1.0 && m >= r.m_min;
  return r;
}

}  // namespace tmsd

#endif  // TMSD_ESTIMATOR_HPP
