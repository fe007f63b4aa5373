#ifndef TMSD_DETECTOR_HPP
#define TMSD_DETECTOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "tmsd/block_matrix.hpp"
#include "tmsd/distributions.hpp"
#include "tmsd/estimator.hpp"
#include "tmsd/sampling.hpp"

namespace tmsd {

/// Eigenstructure of (I - A)^H (I - A) for the residual operator A of a
/// restricted projection: weights sigma_i^2 (descending), the orthogonal
/// eigenbasis B, the numeric rank, and per-component noncentralities.
struct SpectrumDecomposition {
  VectorX<double> sigmas_sq;
  MatrixX<double> basis;
  Index rank = 0;
  VectorX<double> lambdas_sq;
};

namespace detail {

inline SpectrumDecomposition spectrum_of_residual_operator(
    const MatrixX<double>& a) {
  Eigen::SelfAdjointEigenSolver<MatrixX<double>> eig(a.transpose() * a);
  if (eig.info() != Eigen::Success)
    throw DecompositionFailed("spectrum: eigendecomposition failed");
  const Index n = a.rows();
  SpectrumDecomposition d;
  d.sigmas_sq = eig.eigenvalues().reverse();
  d.basis = eig.eigenvectors().rowwise().reverse();
  for (Index i = 0; i < n; ++i)
    if (d.sigmas_sq(i) < 0) d.sigmas_sq(i) = 0;
  double tol = 1e-8 * std::max(1.0, d.sigmas_sq(0));
  d.rank = 0;
  while (d.rank < n && d.sigmas_sq(d.rank) > tol) ++d.rank;
  d.lambdas_sq = VectorX<double>::Zero(n);
  return d;
}

}  // namespace detail

/// Spectrum of I_{m n3} - lmat(P_omega) under tubal sampling. Expected rank
/// is (m - n2) n3 for generic draws.
inline SpectrumDecomposition noise_spectrum_tubal(const SampleSet& omega,
                                                  const Subspace& s) {
  Tensor3d p = restriction_projection(omega, s);
  MatrixX<double> lp = lmat(s.transform(), p);
  MatrixX<double> a = MatrixX<double>::Identity(lp.rows(), lp.cols()) - lp;
  return detail::spectrum_of_residual_operator(a);
}

/// Spectrum of I_m - P_omega on the distinct sampled cells under elementwise
/// sampling. Expected rank m - n2 n3; the weights are 0/1 because the
/// restricted projection is orthogonal.
inline SpectrumDecomposition noise_spectrum_elementwise(
    const SampleSet& omega, const EmbeddedSubspace& e) {
  require_kind(omega, SamplingKind::elementwise);
  std::vector<Index> cells = distinct_cells(omega);
  const Index md = static_cast<Index>(cells.size());
  const Index rn3 = e.basis_matrix.cols();
  MatrixX<double> rows(md, rn3);
  for (Index i = 0; i < md; ++i) rows.row(i) = e.basis_matrix.row(cells[i]);
  MatrixX<double> gram = rows.transpose() * rows;
  Eigen::JacobiSVD<MatrixX<double>> svd(gram);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(rn3 - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw RankDeficientSample("noise_spectrum_elementwise: singular Gram");
  MatrixX<double> a = MatrixX<double>::Identity(md, md) -
                      rows * gram.ldlt().solve(rows.transpose());
  return detail::spectrum_of_residual_operator(a);
}

/// Fills lambda_i^2 = |(B^H s)_i|^2 on components with positive weight; the
/// signal is the unfolded clean restricted observation.
inline SpectrumDecomposition noncentral_params(SpectrumDecomposition d,
                                               const VectorX<double>& signal) {
  if (signal.size() != d.basis.rows())
    throw DimensionMismatch("noncentral_params: signal length");
  VectorX<double> coeff = d.basis.transpose() * signal;
  d.lambdas_sq = VectorX<double>::Zero(d.sigmas_sq.size());
  for (Index i = 0; i < d.rank; ++i)
    d.lambdas_sq(i) = coeff(i) * coeff(i);
  return d;
}

/// Four-cumulant chi-square match for Q = sum sigma_i^2 chi_1^2(lambda_i^2),
/// after Liu, Tang and Zhang. c_k = sum sigma^{2k} + k sum sigma^{2k} lambda^2.
struct LiuApprox {
  double mu_q = 0;
  double sigma_q = 0;
  double a = 0;
  double l = 0;
  double lambda_chi_sq = 0;
  double mu_chi = 0;
  double sigma_chi = 0;
};

inline LiuApprox liu_approx(const SpectrumDecomposition& d) {
  double c[5] = {0, 0, 0, 0, 0};
  for (int k = 1; k <= 4; ++k) {
    for (Index i = 0; i < d.rank; ++i) {
      double w = std::pow(d.sigmas_sq(i), k);
      c[k] += w + k * w * d.lambdas_sq(i);
    }
  }
  if (!(c[2] > 0)) throw DegenerateSpectrum("liu_approx: c2 == 0");
  LiuApprox out;
  out.mu_q = c[1];
  out.sigma_q = std::sqrt(2.0 * c[2]);
  double s1 = c[3] / std::pow(c[2], 1.5);
  double s2 = c[4] / (c[2] * c[2]);
  out.a = s1 * s1 > s2 ? 1.0 / (s1 - std::sqrt(s1 * s1 - s2)) : 1.0 / s1;
  out.lambda_chi_sq = s1 * out.a * out.a * out.a - out.a * out.a;
  if (out.lambda_chi_sq < 0) out.lambda_chi_sq = 0;  // s1^2 <= s2 branch
  out.l = out.a * out.a - 2.0 * out.lambda_chi_sq;
  out.mu_chi = out.l + out.lambda_chi_sq;
  out.sigma_chi = std::numbers::sqrt2 * out.a;
  return out;
}

/// CFAR threshold eta_p with P[Q > eta_p | H0] ~= p; the approximation must
/// have been built under H0 (all lambda_i^2 = 0).
inline double cfar_threshold(const LiuApprox& h0, double p) {
  if (!(p > 0) || !(p < 1)) throw InvalidP("cfar_threshold: p in (0,1)");
  double q = noncentral_chi2_quantile(1.0 - p, h0.l, h0.lambda_chi_sq);
  return h0.mu_q + h0.sigma_q * (q - h0.mu_chi) / h0.sigma_chi;
}

/// P[Q > eta_p] under the (H1) approximation.
inline double detection_probability(const LiuApprox& h1, double eta_p) {
  double x = (eta_p - h1.mu_q) / h1.sigma_q * h1.sigma_chi + h1.mu_chi;
  if (x <= 0) return 1.0;
  double pd = 1.0 - noncentral_chi2_cdf(x, h1.l, h1.lambda_chi_sq);
  return std::min(1.0, std::max(0.0, pd));
}

enum class Decision { H0, H1 };
enum class DetectorMode { noiseless, noisy_general, noisy_projection };

struct DetectorReport {
  double statistic = 0;
  double threshold = 0;
  Decision decision = Decision::H0;
  double p_fa_target = 0;
  std::optional<double> p_detect;
  DetectorMode mode = DetectorMode::noiseless;
  std::optional<LiuApprox> approx;
};

/// Noiseless test at threshold zero (numerically: tol).
inline DetectorReport detect_noiseless(double residual, double tol) {
  if (residual < 0) throw InvalidArg("detect_noiseless: residual >= 0");
  DetectorReport r;
  r.statistic = residual;
  r.threshold = tol;
  r.decision = residual > tol ? Decision::H1 : Decision::H0;
  r.p_fa_target = 0.0;
  r.mode = DetectorMode::noiseless;
  return r;
}

/// Exact noncentral chi-square detector for the orthogonal-projection case:
/// df = (m - n2) n3 under tubal sampling, m - n2 n3 under elementwise.
inline DetectorReport detect_noisy_projection(double statistic, Index df,
                                              double lambda_sq, double p) {
  if (df < 1) throw InvalidDegrees("detect_noisy_projection: df >= 1");
  if (!(p > 0) || !(p < 1)) throw InvalidP("p in (0,1)");
  DetectorReport r;
  r.statistic = statistic;
  r.threshold = chi2_quantile(1.0 - p, static_cast<double>(df));
  r.decision = statistic > r.threshold ? Decision::H1 : Decision::H0;
  r.p_fa_target = p;
  r.p_detect = 1.0 - noncentral_chi2_cdf(r.threshold, static_cast<double>(df),
                                         lambda_sq);
  r.mode = DetectorMode::noisy_projection;
  return r;
}

namespace detail {

/// Shared tail of the noisy detectors: route on the spectrum shape, threshold
/// under H0, and (when the clean restricted signal is known) analytic P_D.
inline DetectorReport detect_from_spectrum(
    const SpectrumDecomposition& spec, double statistic, double p,
    const std::optional<VectorX<double>>& clean_unfolded) {
  bool zero_one = true;
  for (Index i = 0; i < spec.sigmas_sq.size(); ++i) {
    double v = spec.sigmas_sq(i);
    if (std::min(std::fabs(v), std::fabs(v - 1.0)) > 1e-6) {
      zero_one = false;
      break;
    }
  }
  if (zero_one) {
    double lambda_sq = 0.0;
    if (clean_unfolded) {
      SpectrumDecomposition h1 = noncentral_params(spec, *clean_unfolded);
      lambda_sq = h1.lambdas_sq.sum();
    }
    DetectorReport r = detect_noisy_projection(statistic, spec.rank,
                                               lambda_sq, p);
    if (!clean_unfolded) r.p_detect.reset();
    return r;
  }
  LiuApprox h0 = liu_approx(spec);
  DetectorReport r;
  r.statistic = statistic;
  r.threshold = cfar_threshold(h0, p);
  r.decision = statistic > r.threshold ? Decision::H1 : Decision::H0;
  r.p_fa_target = p;
  r.mode = DetectorMode::noisy_general;
  r.approx = h0;
  if (clean_unfolded) {
    LiuApprox h1 = liu_approx(noncentral_params(spec, *clean_unfolded));
    r.p_detect = detection_probability(h1, r.threshold);
    r.approx = h1;
  }
  return r;
}

}  // namespace detail

/// Noisy detection under tubal sampling. observed is the restricted signal
/// plus unit-variance Gaussian noise (m x 1 x n3). clean, when provided, is
/// the noise-free restricted signal used for the analytic P_D.
inline DetectorReport detect_noisy(
    const SampleSet& omega, const Subspace& s, const Tensor3d& observed,
    double p, const std::optional<Tensor3d>& clean = std::nullopt) {
  SpectrumDecomposition spec = noise_spectrum_tubal(omega, s);
  TubalRestrictionOperator op(omega, s);
  double statistic = op.residual_energy_restricted(observed);
  std::optional<VectorX<double>> clean_vec;
  if (clean) clean_vec = unfold_vec(*clean);
  return detail::detect_from_spectrum(spec, statistic, p, clean_vec);
}

/// Noisy detection under elementwise sampling. observed is the zero-filled
/// sampled signal-plus-noise tensor (n1 x 1 x n3).
inline DetectorReport detect_noisy(
    const SampleSet& omega, const EmbeddedSubspace& e, const Tensor3d& observed,
    double p, const std::optional<Tensor3d>& clean = std::nullopt) {
  SpectrumDecomposition spec = noise_spectrum_elementwise(omega, e);
  ElementwiseRestrictionOperator op(omega, e);
  double statistic = op.residual_energy(op.sample_values(observed));
  std::optional<VectorX<double>> clean_vec;
  if (clean) clean_vec = op.sample_values(*clean);
  return detail::detect_from_spectrum(spec, statistic, p, clean_vec);
}

}  // namespace tmsd

#endif  // TMSD_DETECTOR_HPP
