#ifndef TMSD_TENSOR_HPP
#define TMSD_TENSOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <type_traits>

#include "tmsd/error.hpp"

namespace tmsd {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense third-order tensor. Entries are stored with frontal slices
/// contiguous: the backing matrix is (n1*n2) x n3 column-major, so slice k is
/// column k reshaped to n1 x n2 and a mode-3 tube is a row. This makes
/// tube transforms single GEMMs and slice access zero-copy.
template <typename Scalar>
class Tensor3 {
 public:
  using SliceMap = Eigen::Map<MatrixX<Scalar>>;
  using ConstSliceMap = Eigen::Map<const MatrixX<Scalar>>;

  Tensor3() : n1_(0), n2_(0), n3_(0) {}

  Tensor3(Index n1, Index n2, Index n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(MatrixX<Scalar>::Zero(n1 * n2, n3)) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
      throw DimensionMismatch("Tensor3: dimensions must be positive");
  }

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }

  Scalar& operator()(Index i, Index j, Index k) { return data_(i + n1_ * j, k); }
  const Scalar& operator()(Index i, Index j, Index k) const {
    return data_(i + n1_ * j, k);
  }

  /// Backing (n1*n2) x n3 matrix; row p = tube (p % n1, p / n1).
  MatrixX<Scalar>& mat() { return data_; }
  const MatrixX<Scalar>& mat() const { return data_; }

  SliceMap slice(Index k) { return SliceMap(data_.col(k).data(), n1_, n2_); }
  ConstSliceMap slice(Index k) const {
    return ConstSliceMap(data_.col(k).data(), n1_, n2_);
  }

  auto tube(Index i, Index j) { return data_.row(i + n1_ * j); }
  auto tube(Index i, Index j) const { return data_.row(i + n1_ * j); }

  bool same_shape(const Tensor3& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }

  double norm() const { return data_.norm(); }
  double squaredNorm() const { return data_.squaredNorm(); }
  double frobenius_norm() const { return data_.norm(); }

  Tensor3 operator+(const Tensor3& o) const {
    require_same(o);
    Tensor3 r(*this);
    r.data_ += o.data_;
    return r;
  }
  Tensor3 operator-(const Tensor3& o) const {
    require_same(o);
    Tensor3 r(*this);
    r.data_ -= o.data_;
    return r;
  }
  Tensor3 operator*(Scalar s) const {
    Tensor3 r(*this);
    r.data_ *= s;
    return r;
  }
  Tensor3& operator*=(Scalar s) {
    data_ *= s;
    return *this;
  }

 private:
  void require_same(const Tensor3& o) const {
    if (!same_shape(o)) throw DimensionMismatch("Tensor3: shape mismatch");
  }

  Index n1_, n2_, n3_;
  MatrixX<Scalar> data_;
};

using Tensor3d = Tensor3<double>;
using Tensor3cd = Tensor3<Complex>;

inline Tensor3cd to_complex(const Tensor3d& a) {
  Tensor3cd c(a.n1(), a.n2(), a.n3());
  c.mat() = a.mat().cast<Complex>();
  return c;
}

inline const Tensor3cd& to_complex(const Tensor3cd& a) { return a; }

/// Casts complex data that is known to represent a real tensor back to real,
/// requiring the imaginary residue to stay below tol * magnitude. scale is
/// the natural magnitude of the computation that produced a; it keeps the
/// check meaningful when the true result is zero (pure roundoff).
inline Tensor3d to_real(const Tensor3cd& a, double tol = 1e-8,
                        double scale = 0.0) {
  double mag = std::max(a.mat().norm(), scale);
  double imag = a.mat().imag().norm();
  if (imag > tol * (mag > 0 ? mag : 1.0))
    throw DecompositionFailed("to_real: imaginary residue " +
                              std::to_string(imag) + " exceeds tolerance");
  Tensor3d r(a.n1(), a.n2(), a.n3());
  r.mat() = a.mat().real();
  return r;
}

struct TensorNorms {
  double frobenius;
  double linf_star;
  double linf;
};

/// Max row-tube l2 norm of a tensor column.
template <typename Scalar>
double linf_star_norm(const Tensor3<Scalar>& a) {
  if (a.n2() != 1)
    throw NotATensorColumn("linf_star is defined for n2 == 1 only");
  return a.mat().rowwise().norm().maxCoeff();
}

template <typename Scalar>
double linf_norm(const Tensor3<Scalar>& a) {
  return a.mat().cwiseAbs().maxCoeff();
}

template <typename Scalar>
TensorNorms norms(const Tensor3<Scalar>& a) {
  return TensorNorms{a.frobenius_norm(), linf_star_norm(a), linf_norm(a)};
}

}  // namespace tmsd

#endif  // TMSD_TENSOR_HPP
