#ifndef TMSD_SUBSPACE_HPP
#define TMSD_SUBSPACE_HPP

#include <Eigen/Dense>
#include <utility>

#include "tmsd/block_matrix.hpp"
#include "tmsd/tensor.hpp"
#include "tmsd/tensor_ops.hpp"
#include "tmsd/transform.hpp"

namespace tmsd {

/// Tensor-column subspace spanned by the lateral slices of a basis tensor U,
/// with the orthogonal projection P = U (U' * U)^{-1} U' cached at
/// construction. Immutable; safe to share across trial workers.
class Subspace {
 public:
  Subspace(LinearTransform transform, Tensor3d basis)
      : transform_(std::move(transform)), basis_(std::move(basis)) {
    build_projection();
  }

  const LinearTransform& transform() const { return transform_; }
  const Tensor3d& basis() const { return basis_; }
  const Tensor3d& projection() const { return projection_; }
  bool orthonormal() const { return orthonormal_; }
  Index dim() const { return basis_.n2(); }
  Index ambient() const { return basis_.n1(); }

  Tensor3d project(const Tensor3d& x) const {
    return l_product(transform_, projection_, x);
  }

 private:
  void build_projection() {
    const Index n1 = basis_.n1(), r = basis_.n2(), n3 = basis_.n3();
    Tensor3cd uh = tmsd::transform(transform_, basis_);
    // orthonormal when every transform-domain Gram slice is the identity
    double gram_dev = 0.0;
    Tensor3cd ph(n1, n1, n3);
    for (Index k = 0; k < n3; ++k) {
      MatrixX<Complex> uk = uh.slice(k);
      MatrixX<Complex> gram = uk.adjoint() * uk;
      gram_dev += (gram - MatrixX<Complex>::Identity(r, r)).squaredNorm();
      Eigen::JacobiSVD<MatrixX<Complex>> svd(gram);
      double smax = svd.singularValues()(0);
      double smin = svd.singularValues()(r - 1);
      if (!(smin > 0) || smax / smin > 1e12)
        throw DegenerateBasis(static_cast<int>(k));
      ph.slice(k) = uk * gram.ldlt().solve(uk.adjoint());
    }
    orthonormal_ = std::sqrt(gram_dev) < 1e-8;
    projection_ = to_real(inverse_transform(transform_, ph));
  }

  LinearTransform transform_;
  Tensor3d basis_;
  Tensor3d projection_;
  bool orthonormal_ = false;
};

inline Subspace make_subspace(const LinearTransform& t, const Tensor3d& u) {
  return Subspace(t, u);
}

/// Coherence mu(S) = (n1/r) max_j ||P * E_j||_F^2. P * E_j equals the j-th
/// lateral slice of P, so the scan reduces to slice norms.
inline double coherence_tensor(const Subspace& s) {
  const Tensor3d& p = s.projection();
  const Index n1 = p.n1();
  double best = 0.0;
  for (Index j = 0; j < n1; ++j) {
    double e = 0.0;
    for (Index k = 0; k < p.n3(); ++k) e += p.slice(k).col(j).squaredNorm();
    best = std::max(best, e);
  }
  return static_cast<double>(n1) / static_cast<double>(s.dim()) * best;
}

/// Vector-space embedding of a tensor-column subspace: the column space of
/// lmat(U) in R^{n1 n3}, with its orthogonal projection matrix.
struct EmbeddedSubspace {
  MatrixX<double> basis_matrix;       // n1 n3 x r n3
  MatrixX<double> projection_matrix;  // n1 n3 x n1 n3
  Index dimension;                    // r * n3
  Index n1;
  Index n3;
};

inline EmbeddedSubspace embed(const Subspace& s) {
  MatrixX<double> b = lmat(s.transform(), s.basis());
  const Index dim = s.dim() * s.basis().n3();
  Eigen::ColPivHouseholderQR<MatrixX<double>> qr(b);
  if (qr.rank() < dim)
    throw DegenerateBasis(static_cast<int>(qr.rank()));
  MatrixX<double> q = qr.householderQ() * MatrixX<double>::Identity(b.rows(), dim);
  // columns of q were pivoted but span the same space
  EmbeddedSubspace e;
  e.basis_matrix = std::move(b);
  e.projection_matrix = q * q.transpose();
  e.dimension = dim;
  e.n1 = s.ambient();
  e.n3 = s.basis().n3();
  return e;
}

/// mu(bold S) = (n1/n2) max_j ||P_S e_j||_2^2 over the standard basis.
inline double coherence_vector(const EmbeddedSubspace& e, Index n1, Index n2) {
  double best = 0.0;
  for (Index j = 0; j < e.projection_matrix.cols(); ++j)
    best = std::max(best, e.projection_matrix.col(j).squaredNorm());
  return static_cast<double>(n1) / static_cast<double>(n2) * best;
}

/// cos(theta) = ||P_{S^perp} unfold(Y)||_2 / ||unfold(Y)||_2 for a tensor
/// column Y (the S-perp component of a signal).
inline double principal_angle_cos(const EmbeddedSubspace& e, const Tensor3d& y) {
  VectorX<double> v = unfold_vec(y);
  double nrm = v.norm();
  if (!(nrm > 0)) throw ZeroSignal("principal_angle_cos: zero signal");
  VectorX<double> perp = v - e.projection_matrix * v;
  double c = perp.norm() / nrm;
  return c > 1.0 ? 1.0 : c;
}

}  // namespace tmsd

#endif  // TMSD_SUBSPACE_HPP
