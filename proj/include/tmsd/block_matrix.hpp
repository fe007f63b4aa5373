#ifndef TMSD_BLOCK_MATRIX_HPP
#define TMSD_BLOCK_MATRIX_HPP

#include <Eigen/Dense>

#include "tmsd/tensor.hpp"
#include "tmsd/transform.hpp"

namespace tmsd {

/// Frontal slices stacked vertically: slice k occupies rows [k*n1, (k+1)*n1).
template <typename Scalar>
MatrixX<Scalar> unfold(const Tensor3<Scalar>& a) {
  MatrixX<Scalar> m(a.n1() * a.n3(), a.n2());
  for (Index k = 0; k < a.n3(); ++k)
    m.middleRows(k * a.n1(), a.n1()) = a.slice(k);
  return m;
}

template <typename Scalar>
VectorX<Scalar> unfold_vec(const Tensor3<Scalar>& a) {
  if (a.n2() != 1) throw NotATensorColumn("unfold_vec: n2 == 1 required");
  return unfold(a).col(0);
}

template <typename Scalar>
Tensor3<Scalar> fold(const Eigen::Ref<const MatrixX<Scalar>>& m, Index n1,
                     Index n3) {
  if (m.rows() != n1 * n3) throw DimensionMismatch("fold: row count");
  Tensor3<Scalar> a(n1, m.cols(), n3);
  for (Index k = 0; k < n3; ++k) a.slice(k) = m.middleRows(k * n1, n1);
  return a;
}

template <typename Scalar>
Tensor3<Scalar> fold_vec(const VectorX<Scalar>& v, Index n1, Index n3) {
  return fold<Scalar>(v, n1, n3);
}

/// Block circulant matrix: block column 0 holds slices 0..n3-1 top to bottom,
/// each further block column circularly shifted down.
template <typename Scalar>
MatrixX<Scalar> bcirc(const Tensor3<Scalar>& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  MatrixX<Scalar> m(n1 * n3, n2 * n3);
  for (Index bc = 0; bc < n3; ++bc)
    for (Index br = 0; br < n3; ++br) {
      Index sl = (br - bc + n3) % n3;
      m.block(br * n1, bc * n2, n1, n2) = a.slice(sl);
    }
  return m;
}

/// Block matrix of the DCT product:
///   ((I+Z) kron I_n1)^{-1} (T + H) ((I+Z) kron I_n2),
/// T block (p,q) = slice |p-q|; H block (p,q) = slice p+q+1 below the
/// anti-diagonal, zero on it, slice 2*n3-1-(p+q) beyond it (0-based slices).
/// The unit upper block-bidiagonal factors are applied structurally.
template <typename Scalar>
MatrixX<Scalar> lmat_dct(const Tensor3<Scalar>& a) {
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  MatrixX<Scalar> m(n1 * n3, n2 * n3);
  for (Index p = 0; p < n3; ++p)
    for (Index q = 0; q < n3; ++q) {
      auto blk = m.block(p * n1, q * n2, n1, n2);
      blk = a.slice(p >= q ? p - q : q - p);
      Index s = p + q;  // 0-based anti-diagonal index; corner at s = n3 - 1
      if (s + 1 < n3)
        blk += a.slice(s + 1);
      else if (s + 1 > n3)
        blk += a.slice(2 * n3 - 1 - s);
    }
  // left factor: ((I+Z) kron I)^{-1} by block back-substitution
  for (Index p = n3 - 2; p >= 0; --p)
    m.middleRows(p * n1, n1) -= m.middleRows((p + 1) * n1, n1);
  // right factor: block column q gains block column q-1
  for (Index q = n3 - 1; q >= 1; --q)
    m.middleCols(q * n2, n2) += m.middleCols((q - 1) * n2, n2);
  return m;
}

/// Structured matrix realizing the L-product on unfolded tensors; defined for
/// the DFT (block circulant) and DCT (Toeplitz-plus-Hankel conjugated) only.
template <typename Scalar>
MatrixX<Scalar> lmat(const LinearTransform& t, const Tensor3<Scalar>& a) {
  switch (t.kind()) {
    case TransformKind::dft:
      return bcirc(a);
    case TransformKind::dct:
      return lmat_dct(a);
    default:
      throw UnsupportedTransform("lmat: custom transforms have no block form");
  }
}

}  // namespace tmsd

#endif  // TMSD_BLOCK_MATRIX_HPP
