#ifndef TMSD_SAMPLING_HPP
#define TMSD_SAMPLING_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tmsd/rng.hpp"
#include "tmsd/subspace.hpp"
#include "tmsd/tensor.hpp"

namespace tmsd {

enum class SamplingKind { tubal, elementwise };

/// Sampled index set. Tubal entries are row indices in [0, n1); elementwise
/// entries are flat cell ids k * n1 + i for cell (i, k), matching the unfold
/// row order.
struct SampleSet {
  SamplingKind kind;
  std::vector<Index> indices;
  bool replacement = false;
  Index n1 = 0;
  Index n3 = 0;

  Index m() const { return static_cast<Index>(indices.size()); }
};

/// Uniform draw, deterministic given the seed (PCG32; partial Fisher-Yates
/// for the without-replacement mode).
inline SampleSet draw(SamplingKind kind, Index m, Index n1, Index n3,
                      bool replacement, std::uint64_t seed) {
  const Index universe = kind == SamplingKind::tubal ? n1 : n1 * n3;
  if (m < 1) throw InvalidArg("draw: m >= 1");
  if (!replacement && m > universe)
    throw TooManySamples("draw: m exceeds the index universe");
  Pcg32 rng(seed);
  SampleSet s{kind, {}, replacement, n1, n3};
  s.indices.reserve(m);
  if (replacement) {
    for (Index i = 0; i < m; ++i)
      s.indices.push_back(rng.next_below(static_cast<std::uint32_t>(universe)));
  } else {
    std::vector<Index> pool(universe);
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < m; ++i) {
      Index j = i + rng.next_below(static_cast<std::uint32_t>(universe - i));
      std::swap(pool[i], pool[j]);
      s.indices.push_back(pool[i]);
    }
  }
  return s;
}

inline void require_kind(const SampleSet& omega, SamplingKind kind) {
  if (omega.kind != kind) throw KindMismatch("sample set kind mismatch");
}

/// Selected horizontal tubes of a tensor column, in sample order.
inline Tensor3d restrict_signal_tubal(const SampleSet& omega,
                                      const Tensor3d& x) {
  require_kind(omega, SamplingKind::tubal);
  if (x.n2() != 1) throw DimensionMismatch("restrict_signal_tubal: n2 == 1");
  if (x.n1() != omega.n1 || x.n3() != omega.n3)
    throw DimensionMismatch("restrict_signal_tubal: shape");
  Tensor3d out(omega.m(), 1, x.n3());
  for (Index i = 0; i < omega.m(); ++i)
    out.mat().row(i) = x.mat().row(omega.indices[i]);
  return out;
}

/// Selected horizontal slices of a basis tensor, in sample order.
inline Tensor3d restrict_basis_tubal(const SampleSet& omega,
                                     const Tensor3d& u) {
  require_kind(omega, SamplingKind::tubal);
  if (u.n1() != omega.n1 || u.n3() != omega.n3)
    throw DimensionMismatch("restrict_basis_tubal: shape");
  Tensor3d out(omega.m(), u.n2(), u.n3());
  for (Index k = 0; k < u.n3(); ++k)
    for (Index i = 0; i < omega.m(); ++i)
      out.slice(k).row(i) = u.slice(k).row(omega.indices[i]);
  return out;
}

/// Zero-filled restriction: sampled entries copied (duplicates copy the value
/// once), everything else zero.
inline Tensor3d restrict_signal_elementwise(const SampleSet& omega,
                                            const Tensor3d& x) {
  require_kind(omega, SamplingKind::elementwise);
  if (x.n2() != 1)
    throw DimensionMismatch("restrict_signal_elementwise: n2 == 1");
  if (x.n1() != omega.n1 || x.n3() != omega.n3)
    throw DimensionMismatch("restrict_signal_elementwise: shape");
  Tensor3d out(x.n1(), 1, x.n3());
  for (Index cell : omega.indices) {
    Index i = cell % x.n1();
    Index k = cell / x.n1();
    out(i, 0, k) = x(i, 0, k);
  }
  return out;
}

/// Embedded-basis restriction: rows of lmat(U) outside the sampled cells are
/// zeroed (row k*n1+i kept iff cell (i,k) sampled).
inline MatrixX<double> restrict_basis_elementwise(const SampleSet& omega,
                                                  const EmbeddedSubspace& e) {
  require_kind(omega, SamplingKind::elementwise);
  if (omega.n1 != e.n1 || omega.n3 != e.n3)
    throw DimensionMismatch("restrict_basis_elementwise: shape");
  MatrixX<double> out = MatrixX<double>::Zero(e.basis_matrix.rows(),
                                              e.basis_matrix.cols());
  for (Index cell : omega.indices) out.row(cell) = e.basis_matrix.row(cell);
  return out;
}

/// Distinct sampled cells in first-appearance order (replacement draws may
/// repeat cells; the zero-filled representation holds each value once).
inline std::vector<Index> distinct_cells(const SampleSet& omega) {
  std::vector<Index> cells;
  std::vector<char> seen(static_cast<std::size_t>(omega.n1 * omega.n3), 0);
  for (Index cell : omega.indices)
    if (!seen[static_cast<std::size_t>(cell)]) {
      seen[static_cast<std::size_t>(cell)] = 1;
      cells.push_back(cell);
    }
  return cells;
}

/// Projection onto the restricted tubal basis, as an m x m x n3 tensor.
/// Raises RankDeficientSample when a transform-domain Gram slice is
/// ill-conditioned (m too small or a degenerate draw).
inline Tensor3d restriction_projection(const SampleSet& omega,
                                       const Subspace& s) {
  require_kind(omega, SamplingKind::tubal);
  Tensor3d uo = restrict_basis_tubal(omega, s.basis());
  const Index m = uo.n1(), r = uo.n2(), n3 = uo.n3();
  if (m < r) throw RankDeficientSample("restriction_projection: m < r");
  Tensor3cd uh = transform(s.transform(), uo);
  Tensor3cd ph(m, m, n3);
  for (Index k = 0; k < n3; ++k) {
    MatrixX<Complex> uk = uh.slice(k);
    MatrixX<Complex> gram = uk.adjoint() * uk;
    Eigen::JacobiSVD<MatrixX<Complex>> svd(gram);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(r - 1);
    if (!(smin > 0) || smax / smin > 1e12)
      throw RankDeficientSample("restriction_projection: singular Gram slice " +
                                std::to_string(k));
    ph.slice(k) = uk * gram.ldlt().solve(uk.adjoint());
  }
  return to_real(inverse_transform(s.transform(), ph));
}

/// Projection onto the restricted embedded basis, full-size with support on
/// the sampled rows and columns only.
inline MatrixX<double> restriction_projection(const SampleSet& omega,
                                              const EmbeddedSubspace& e) {
  require_kind(omega, SamplingKind::elementwise);
  std::vector<Index> cells = distinct_cells(omega);
  const Index mdist = static_cast<Index>(cells.size());
  const Index rn3 = e.basis_matrix.cols();
  MatrixX<double> rows(mdist, rn3);
  for (Index i = 0; i < mdist; ++i) rows.row(i) = e.basis_matrix.row(cells[i]);
  MatrixX<double> gram = rows.transpose() * rows;
  Eigen::JacobiSVD<MatrixX<double>> svd(gram);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(rn3 - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw RankDeficientSample("restriction_projection: singular Gram");
  MatrixX<double> small = rows * gram.ldlt().solve(rows.transpose());
  const Index n = e.basis_matrix.rows();
  MatrixX<double> full = MatrixX<double>::Zero(n, n);
  for (Index i = 0; i < mdist; ++i)
    for (Index j = 0; j < mdist; ++j) full(cells[i], cells[j]) = small(i, j);
  return full;
}

}  // namespace tmsd

#endif  // TMSD_SAMPLING_HPP
