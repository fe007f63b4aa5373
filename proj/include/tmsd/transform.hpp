#ifndef TMSD_TRANSFORM_HPP
#define TMSD_TRANSFORM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tmsd/error.hpp"
#include "tmsd/tensor.hpp"

namespace tmsd {

enum class TransformKind { dft, dct, custom };

/// Invertible length-n3 transform applied along mode-3 tubes. Immutable after
/// construction; energy_scale_sq is the c^2 constant used by the sampling
/// bounds (n3 for both DFT and DCT).
class LinearTransform {
 public:
  LinearTransform(Index n3, MatrixX<Complex> forward, MatrixX<Complex> inverse,
                  TransformKind kind, double energy_scale_sq)
      : n3_(n3),
        forward_(std::move(forward)),
        inverse_(std::move(inverse)),
        kind_(kind),
        energy_scale_sq_(energy_scale_sq) {}

  Index n3() const { return n3_; }
  const MatrixX<Complex>& forward() const { return forward_; }
  const MatrixX<Complex>& inverse() const { return inverse_; }
  TransformKind kind() const { return kind_; }
  double energy_scale_sq() const { return energy_scale_sq_; }

  /// True when the forward matrix is purely real (DCT, real custom maps);
  /// transform-domain data of real tensors is then real as well.
  bool is_real() const { return forward_.imag().cwiseAbs().maxCoeff() == 0.0; }

 private:
  Index n3_;
  MatrixX<Complex> forward_;
  MatrixX<Complex> inverse_;
  TransformKind kind_;
  double energy_scale_sq_;
};

/// Unnormalized DFT: F(j,k) = exp(-2*pi*i*j*k/n3), inverse = conj(F)/n3.
inline LinearTransform make_dft(Index n3) {
  if (n3 < 1) throw InvalidArg("make_dft: n3 >= 1");
  MatrixX<Complex> f(n3, n3);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n3);
  for (Index j = 0; j < n3; ++j)
    for (Index k = 0; k < n3; ++k) {
      // reduce j*k mod n3 first so large sizes keep full phase accuracy
      double phase = -w * static_cast<double>((j * k) % n3);
      f(j, k) = Complex(std::cos(phase), std::sin(phase));
    }
  MatrixX<Complex> inv = f.conjugate() / static_cast<double>(n3);
  return LinearTransform(n3, std::move(f), std::move(inv), TransformKind::dft,
                         static_cast<double>(n3));
}

/// Orthonormal DCT-II matrix: C(k,j) = s_k sqrt(2/n) cos(pi k (2j+1) / (2n)),
/// 0-based indices, s_0 = 1/sqrt(2).
inline MatrixX<double> dct2_matrix(Index n) {
  MatrixX<double> c(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      c(k, j) = std::sqrt(2.0 / n) *
                std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * n));
  c.row(0) *= 1.0 / std::numbers::sqrt2;
  return c;
}

/// Upshift matrix of the DCT product construction: ones on the superdiagonal.
inline MatrixX<double> upshift_matrix(Index n) {
  MatrixX<double> z = MatrixX<double>::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) z(i, i + 1) = 1.0;
  return z;
}

/// DCT-based transform M = W^{-1} C (I + Z) with W = diag(C(:,0)).
/// energy_scale_sq is pinned to n3, matching the bound corollaries.
inline LinearTransform make_dct(Index n3) {
  if (n3 < 1) throw InvalidArg("make_dct: n3 >= 1");
  MatrixX<double> c = dct2_matrix(n3);
  VectorX<double> w = c.col(0);
  MatrixX<double> m =
      w.cwiseInverse().asDiagonal() *
      (c * (MatrixX<double>::Identity(n3, n3) + upshift_matrix(n3)));
  Eigen::FullPivLU<MatrixX<double>> lu(m);
  Eigen::JacobiSVD<MatrixX<double>> svd(m);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(n3 - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw SingularTransform("make_dct: forward matrix not invertible");
  MatrixX<double> inv = lu.inverse();
  return LinearTransform(n3, m.cast<Complex>(), inv.cast<Complex>(),
                         TransformKind::dct, static_cast<double>(n3));
}

/// Arbitrary invertible transform; invertibility is verified numerically.
inline LinearTransform make_custom(const MatrixX<Complex>& forward,
                                   double energy_scale_sq) {
  Index n3 = forward.rows();
  if (forward.cols() != n3 || n3 < 1)
    throw InvalidArg("make_custom: forward must be square");
  Eigen::JacobiSVD<MatrixX<Complex>> svd(forward);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(n3 - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw SingularTransform("make_custom: matrix not invertible");
  if (!(energy_scale_sq > 0) || energy_scale_sq > smax * smax + 1e-9 * smax * smax)
    throw InvalidArg("make_custom: energy_scale_sq outside (0, smax^2]");
  Eigen::FullPivLU<MatrixX<Complex>> lu(forward);
  return LinearTransform(n3, forward, lu.inverse(), TransformKind::custom,
                         energy_scale_sq);
}

using Tube = VectorX<Complex>;

inline Tube apply_tube(const LinearTransform& t, const Tube& a) {
  if (a.size() != t.n3()) throw DimensionMismatch("apply_tube: tube length");
  return t.forward() * a;
}

inline Tube apply_tube(const LinearTransform& t, const VectorX<double>& a) {
  if (a.size() != t.n3()) throw DimensionMismatch("apply_tube: tube length");
  return t.forward() * a.cast<Complex>();
}

inline Tube invert_tube(const LinearTransform& t, const Tube& a) {
  if (a.size() != t.n3()) throw DimensionMismatch("invert_tube: tube length");
  return t.inverse() * a;
}

/// Tube product a * b = Linv(L(a) o L(b)), elementwise in transform domain.
inline Tube tube_mult(const LinearTransform& t, const Tube& a, const Tube& b) {
  if (a.size() != b.size()) throw DimensionMismatch("tube_mult: lengths");
  return invert_tube(t, apply_tube(t, a).cwiseProduct(apply_tube(t, b)));
}

/// Transforms every mode-3 tube: one GEMM on the tube-major layout.
template <typename Scalar>
Tensor3cd transform(const LinearTransform& t, const Tensor3<Scalar>& a) {
  if (a.n3() != t.n3()) throw DimensionMismatch("transform: n3 mismatch");
  Tensor3cd out(a.n1(), a.n2(), a.n3());
  out.mat() = to_complex(a).mat() * t.forward().transpose();
  return out;
}

template <typename Scalar>
Tensor3cd inverse_transform(const LinearTransform& t, const Tensor3<Scalar>& a) {
  if (a.n3() != t.n3())
    throw DimensionMismatch("inverse_transform: n3 mismatch");
  Tensor3cd out(a.n1(), a.n2(), a.n3());
  out.mat() = to_complex(a).mat() * t.inverse().transpose();
  return out;
}

/// Multiplicative unity tube e = Linv(1): transform-domain all-ones.
inline Tube unity_tube(const LinearTransform& t) {
  return t.inverse() * VectorX<Complex>::Ones(t.n3());
}

}  // namespace tmsd

#endif  // TMSD_TRANSFORM_HPP
