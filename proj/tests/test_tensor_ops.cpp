#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tmsd/block_matrix.hpp"
#include "tmsd/tensor_ops.hpp"

using namespace tmsd;
using tmsd::test::random_tensor;

TEST_SUITE_BEGIN("tensor_ops");

TEST_CASE("l_product identity and zero") {
  Pcg32 rng(1);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(5);
    Tensor3d a = random_tensor(4, 3, 5, rng);
    Tensor3d id = identity_tensor(t, 3);
    CHECK((l_product(t, a, id) - a).frobenius_norm() <
          1e-10 * a.frobenius_norm());
    Tensor3d z(3, 2, 5);
    CHECK(l_product(t, a, z).frobenius_norm() == 0.0);
  }
}

TEST_CASE("l_product equals block-circulant oracle under dft") {
  Pcg32 rng(2);
  LinearTransform t = make_dft(5);
  Tensor3d a = random_tensor(4, 3, 5, rng);
  Tensor3d c = random_tensor(3, 2, 5, rng);
  MatrixX<double> lhs = unfold(l_product(t, a, c));
  MatrixX<double> rhs = bcirc(a) * unfold(c);
  CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());
}

TEST_CASE("l_product dimension checks") {
  LinearTransform t = make_dft(4);
  Tensor3d a(2, 3, 4), b(2, 2, 4), c(3, 2, 3);
  CHECK_THROWS_AS(l_product(t, a, b), DimensionMismatch);
  CHECK_THROWS_AS(l_product(t, a, c), DimensionMismatch);
}

TEST_CASE("transpose involution and reversal") {
  Pcg32 rng(3);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(6);
    Tensor3d a = random_tensor(4, 3, 6, rng);
    Tensor3d b = random_tensor(3, 5, 6, rng);
    Tensor3d att = tensor_transpose(t, tensor_transpose(t, a));
    CHECK((att - a).frobenius_norm() < 1e-10 * a.frobenius_norm());
    Tensor3d lhs = tensor_transpose(t, l_product(t, a, b));
    Tensor3d rhs =
        l_product(t, tensor_transpose(t, b), tensor_transpose(t, a));
    CHECK((lhs - rhs).frobenius_norm() < 1e-10 * (1 + lhs.frobenius_norm()));
    Tensor3d id = identity_tensor(t, 4);
    CHECK((tensor_transpose(t, id) - id).frobenius_norm() < 1e-10);
  }
}

TEST_CASE("identity tensor structure") {
  LinearTransform t = make_dft(4);
  Tensor3d id = identity_tensor(t, 3);
  for (Index i = 0; i < 3; ++i) {
    CHECK(id(i, i, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (Index k = 1; k < 4; ++k)
      CHECK(std::fabs(id(i, i, k)) < 1e-12);
  }
  LinearTransform td = make_dct(5);
  Tensor3cd lid = transform(td, identity_tensor(td, 4));
  for (Index k = 0; k < 5; ++k)
    CHECK((MatrixX<Complex>(lid.slice(k)) - MatrixX<Complex>::Identity(4, 4))
              .norm() < 1e-9);
}

TEST_CASE("tensor inverse") {
  Pcg32 rng(4);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(3);
    Tensor3d id = identity_tensor(t, 4);
    CHECK((tensor_inverse(t, id) - id).frobenius_norm() < 1e-9);
    Tensor3d two = id * 2.0;
    CHECK((tensor_inverse(t, two) - id * 0.5).frobenius_norm() < 1e-9);
    // random well-conditioned: diagonally dominated
    Tensor3d a = random_tensor(4, 4, 3, rng);
    a = a + id * 5.0;
    Tensor3d prod = l_product(t, a, tensor_inverse(t, a));
    CHECK((prod - id).frobenius_norm() < 1e-8);
  }
}

TEST_CASE("tensor inverse rejects singular slices") {
  LinearTransform t = make_dct(2);
  Tensor3d a(2, 2, 2);  // all zero: every slice singular
  CHECK_THROWS_AS(tensor_inverse(t, a), SingularSlice);
  Tensor3d rect(2, 3, 2);
  CHECK_THROWS_AS(tensor_inverse(t, rect), DimensionMismatch);
}

TEST_CASE("l_svd reconstruction and orthogonality") {
  Pcg32 rng(5);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(4);
    for (int rep = 0; rep < 10; ++rep) {
      Tensor3d a = random_tensor(5, 3, 4, rng);
      LSvdResult svd = l_svd(t, a);
      auto rf = svd.real_factors();
      Tensor3d rec = l_product(
          t, l_product(t, rf.u, rf.sigma), tensor_transpose(t, rf.v));
      CHECK((rec - a).frobenius_norm() < 1e-9 * a.frobenius_norm());
      Tensor3d id = identity_tensor(t, 5);
      Tensor3d utu = l_product(t, tensor_transpose(t, rf.u), rf.u);
      CHECK((utu - id).frobenius_norm() < 1e-9);
      Tensor3d idv = identity_tensor(t, 3);
      Tensor3d vtv = l_product(t, tensor_transpose(t, rf.v), rf.v);
      CHECK((vtv - idv).frobenius_norm() < 1e-9);
      // transform-domain sigma: diagonal, nonnegative, nonincreasing
      Tensor3cd sh = transform(t, rf.sigma);
      for (Index k = 0; k < 4; ++k) {
        double prev = 1e300;
        for (Index i = 0; i < 3; ++i) {
          double v = sh(i, i, k).real();
          CHECK(std::fabs(sh(i, i, k).imag()) < 1e-9);
          CHECK(v >= -1e-12);
          CHECK(v <= prev + 1e-9);
          prev = v;
          for (Index j = 0; j < 3; ++j)
            if (j != i) CHECK(std::abs(sh(i, j, k)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("l_svd of identity and rank-1 construction") {
  LinearTransform t = make_dft(3);
  Tensor3d id = identity_tensor(t, 3);
  LSvdResult svd = l_svd(t, id);
  auto rf = svd.real_factors();
  CHECK((rf.sigma - id).frobenius_norm() < 1e-9);

  // rank-1: u0 * s * v0' has exactly one nonzero singular tube
  Pcg32 rng(6);
  Tensor3d u0 = random_tensor(4, 1, 3, rng);
  Tensor3d v0 = random_tensor(3, 1, 3, rng);
  Tensor3d a = l_product(t, u0, tensor_transpose(t, v0));
  CHECK(l_rank(t, a) == 1);
}

TEST_CASE("l_rank basics") {
  LinearTransform t = make_dct(4);
  Tensor3d z(5, 3, 4);
  CHECK(l_rank(t, z) == 0);
  Tensor3d id = identity_tensor(t, 4);
  CHECK(l_rank(t, id) == 4);
}

TEST_CASE("associativity of the L-product") {
  Pcg32 rng(7);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(5);
    Tensor3d a = random_tensor(3, 4, 5, rng);
    Tensor3d b = random_tensor(4, 2, 5, rng);
    Tensor3d c = random_tensor(2, 3, 5, rng);
    Tensor3d lhs = l_product(t, l_product(t, a, b), c);
    Tensor3d rhs = l_product(t, a, l_product(t, b, c));
    CHECK((lhs - rhs).frobenius_norm() < 1e-9 * (1 + lhs.frobenius_norm()));
  }
}

TEST_CASE("frobenius scaling under transforms") {
  Pcg32 rng(8);
  LinearTransform t = make_dft(7);
  Tensor3d a = random_tensor(4, 3, 7, rng);
  CHECK(transform(t, a).squaredNorm() ==
        doctest::Approx(7.0 * a.squaredNorm()).epsilon(1e-10));
  // dct: only the spectral-norm bound holds
  LinearTransform td = make_dct(7);
  Eigen::JacobiSVD<MatrixX<Complex>> svd(td.forward());
  double smax = svd.singularValues()(0);
  CHECK(std::sqrt(transform(td, a).squaredNorm()) <=
        smax * a.frobenius_norm() * (1 + 1e-12));
  CHECK(td.energy_scale_sq() <= smax * smax + 1e-9);
}

TEST_CASE("norms") {
  Tensor3d ones(6, 1, 5);
  ones.mat().setOnes();
  TensorNorms n = norms(ones);
  CHECK(n.frobenius == doctest::Approx(std::sqrt(30.0)));
  CHECK(n.linf_star == doctest::Approx(std::sqrt(5.0)));
  CHECK(n.linf == doctest::Approx(1.0));

  Tensor3d z(4, 1, 3);
  TensorNorms zn = norms(z);
  CHECK(zn.frobenius == 0.0);
  CHECK(zn.linf_star == 0.0);
  CHECK(zn.linf == 0.0);

  Pcg32 rng(9);
  Tensor3d x = random_tensor(7, 1, 5, rng);
  double flat = 0;
  for (Index i = 0; i < 7; ++i)
    for (Index k = 0; k < 5; ++k) flat += x(i, 0, k) * x(i, 0, k);
  CHECK(norms(x).frobenius == doctest::Approx(std::sqrt(flat)).epsilon(1e-12));

  Tensor3d wide(3, 2, 4);
  CHECK_THROWS_AS(linf_star_norm(wide), NotATensorColumn);
}

TEST_SUITE_END();
