#ifndef TMSD_TENSOR_OPS_HPP
#define TMSD_TENSOR_OPS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <type_traits>

#include "tmsd/tensor.hpp"
#include "tmsd/transform.hpp"

namespace tmsd {

namespace detail {

inline Tensor3cd l_product_c(const LinearTransform& t, const Tensor3cd& ah,
                             const Tensor3cd& bh) {
  Tensor3cd ch(ah.n1(), bh.n2(), ah.n3());
  for (Index k = 0; k < ah.n3(); ++k) ch.slice(k) = ah.slice(k) * bh.slice(k);
  return ch;
}

}  // namespace detail

/// L-product: per-slice matrix products in the transform domain. Real inputs
/// yield a real tensor (imaginary residue asserted below 1e-8 relative).
template <typename SA, typename SB>
auto l_product(const LinearTransform& t, const Tensor3<SA>& a,
               const Tensor3<SB>& b) {
  if (a.n2() != b.n1())
    throw DimensionMismatch("l_product: inner dimensions");
  if (a.n3() != b.n3() || a.n3() != t.n3())
    throw DimensionMismatch("l_product: n3 mismatch");
  Tensor3cd ch = detail::l_product_c(t, transform(t, a), transform(t, b));
  Tensor3cd c = inverse_transform(t, ch);
  constexpr bool real_inputs = std::is_same_v<SA, double> && std::is_same_v<SB, double>;
  if constexpr (real_inputs)
    return to_real(c, 1e-8, a.mat().norm() * b.mat().norm());
  else
    return c;
}

/// Tensor transpose: Hermitian transpose of every transform-domain slice.
template <typename Scalar>
Tensor3<Scalar> tensor_transpose(const LinearTransform& t,
                                 const Tensor3<Scalar>& a) {
  if (a.n3() != t.n3()) throw DimensionMismatch("tensor_transpose: n3");
  Tensor3cd ah = transform(t, a);
  Tensor3cd th(a.n2(), a.n1(), a.n3());
  for (Index k = 0; k < a.n3(); ++k) th.slice(k) = ah.slice(k).adjoint();
  Tensor3cd out = inverse_transform(t, th);
  if constexpr (std::is_same_v<Scalar, double>)
    return to_real(out, 1e-8, a.mat().norm());
  else
    return out;
}

/// Identity tensor: unity tubes e = Linv(1) on the diagonal. Every
/// transform-domain slice is the m x m identity matrix.
inline Tensor3d identity_tensor(const LinearTransform& t, Index m) {
  Tube e = unity_tube(t);
  double mag = e.norm();
  if (e.imag().norm() > 1e-8 * mag)
    throw DecompositionFailed("identity_tensor: unity tube is not real");
  Tensor3d id(m, m, t.n3());
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < t.n3(); ++k) id(i, i, k) = e(k).real();
  return id;
}

/// Per-slice inverse in the transform domain; a slice with condition number
/// above 1e12 raises SingularSlice.
template <typename Scalar>
Tensor3<Scalar> tensor_inverse(const LinearTransform& t,
                               const Tensor3<Scalar>& a) {
  if (a.n1() != a.n2()) throw DimensionMismatch("tensor_inverse: square only");
  if (a.n3() != t.n3()) throw DimensionMismatch("tensor_inverse: n3");
  Tensor3cd ah = transform(t, a);
  Tensor3cd ih(a.n1(), a.n1(), a.n3());
  for (Index k = 0; k < a.n3(); ++k) {
    MatrixX<Complex> s = ah.slice(k);
    Eigen::JacobiSVD<MatrixX<Complex>> svd(s);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(s.rows() - 1);
    if (!(smin > 0) || smax / smin > 1e12)
      throw SingularSlice(static_cast<int>(k));
    ih.slice(k) = s.partialPivLu().inverse();
  }
  Tensor3cd out = inverse_transform(t, ih);
  if constexpr (std::is_same_v<Scalar, double>)
    return to_real(out);
  else
    return out;
}

/// L-SVD factors. Stored complex; for DFT and real transforms the factors of
/// a real tensor are real and real_factors() casts them.
struct LSvdResult {
  Tensor3cd u;
  Tensor3cd sigma;
  Tensor3cd v;

  struct Real {
    Tensor3d u, sigma, v;
  };
  Real real_factors(double tol = 1e-8) const {
    return Real{to_real(u, tol), to_real(sigma, tol), to_real(v, tol)};
  }
};

namespace detail {

inline void slice_svd(const MatrixX<Complex>& s, MatrixX<Complex>& u,
                      VectorX<double>& sv, MatrixX<Complex>& v) {
  Eigen::JacobiSVD<MatrixX<Complex>> svd(
      s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success)
    throw DecompositionFailed("l_svd: slice SVD failed");
  u = svd.matrixU();
  sv = svd.singularValues();
  v = svd.matrixV();
}

}  // namespace detail

/// Per-slice SVD in the transform domain, singular values nonincreasing in
/// every slice. For the DFT the conjugate-symmetric half-spectrum is mirrored
/// so that real tensors get real factors.
inline LSvdResult l_svd(const LinearTransform& t, const Tensor3d& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  if (n3 != t.n3()) throw DimensionMismatch("l_svd: n3");
  Tensor3cd ah = transform(t, a);
  LSvdResult r{Tensor3cd(n1, n1, n3), Tensor3cd(n1, n2, n3),
               Tensor3cd(n2, n2, n3)};
  const bool mirror = t.kind() == TransformKind::dft;
  const Index half = mirror ? n3 / 2 + 1 : n3;
  for (Index k = 0; k < half; ++k) {
    MatrixX<Complex> u, v;
    VectorX<double> sv;
    detail::slice_svd(ah.slice(k), u, sv, v);
    r.u.slice(k) = u;
    r.v.slice(k) = v;
    for (Index i = 0; i < sv.size(); ++i) r.sigma(i, i, k) = sv(i);
  }
  if (mirror) {
    for (Index k = half; k < n3; ++k) {
      r.u.slice(k) = r.u.slice(n3 - k).conjugate();
      r.v.slice(k) = r.v.slice(n3 - k).conjugate();
      r.sigma.slice(k) = r.sigma.slice(n3 - k).conjugate();
    }
  }
  r.u = inverse_transform(t, r.u);
  r.sigma = inverse_transform(t, r.sigma);
  r.v = inverse_transform(t, r.v);
  return r;
}

inline LSvdResult l_svd(const LinearTransform& t, const Tensor3cd& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  if (n3 != t.n3()) throw DimensionMismatch("l_svd: n3");
  Tensor3cd ah = transform(t, a);
  LSvdResult r{Tensor3cd(n1, n1, n3), Tensor3cd(n1, n2, n3),
               Tensor3cd(n2, n2, n3)};
  for (Index k = 0; k < n3; ++k) {
    MatrixX<Complex> u, v;
    VectorX<double> sv;
    detail::slice_svd(ah.slice(k), u, sv, v);
    r.u.slice(k) = u;
    r.v.slice(k) = v;
    for (Index i = 0; i < sv.size(); ++i) r.sigma(i, i, k) = sv(i);
  }
  r.u = inverse_transform(t, r.u);
  r.sigma = inverse_transform(t, r.sigma);
  r.v = inverse_transform(t, r.v);
  return r;
}

/// Number of nonzero singular tubes. tol < 0 selects the default
/// 1e-9 * (largest singular value across slices).
template <typename Scalar>
Index l_rank(const LinearTransform& t, const Tensor3<Scalar>& a,
             double tol = -1.0) {
  const Index d = std::min(a.n1(), a.n2());
  Tensor3cd ah = transform(t, a);
  MatrixX<double> sv(d, a.n3());
  double smax = 0.0;
  for (Index k = 0; k < a.n3(); ++k) {
    Eigen::JacobiSVD<MatrixX<Complex>> svd(MatrixX<Complex>(ah.slice(k)));
    sv.col(k) = svd.singularValues();
    smax = std::max(smax, sv(0, k));
  }
  if (tol < 0) tol = 1e-9 * smax;
  // spatial singular tube i = Linv applied to row i of sv
  MatrixX<Complex> tubes = sv.cast<Complex>() * t.inverse().transpose();
  Index rank = 0;
  for (Index i = 0; i < d; ++i)
    if (tubes.row(i).norm() > tol) ++rank;
  return rank;
}

}  // namespace tmsd

#endif  // TMSD_TENSOR_OPS_HPP
