#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tmsd/transform.hpp"

using namespace tmsd;
using tmsd::test::random_real_tube;

TEST_SUITE_BEGIN("transform");

TEST_CASE("dft construction") {
  LinearTransform t1 = make_dft(1);
  CHECK(t1.forward()(0, 0) == Complex(1, 0));
  CHECK(t1.inverse()(0, 0) == Complex(1, 0));

  LinearTransform t4 = make_dft(4);
  VectorX<double> delta = VectorX<double>::Zero(4);
  delta(0) = 1.0;
  Tube out = apply_tube(t4, delta);
  for (Index k = 0; k < 4; ++k) CHECK(std::abs(out(k) - 1.0) < 1e-12);
  CHECK((t4.forward() * t4.inverse() - MatrixX<Complex>::Identity(4, 4)).norm() <
        1e-10);
  CHECK(t4.energy_scale_sq() == 4.0);
}

TEST_CASE("dft parseval over random tubes") {
  LinearTransform t = make_dft(50);
  Pcg32 rng(1);
  for (int i = 0; i < 100; ++i) {
    VectorX<double> a = random_real_tube(50, rng);
    CHECK(apply_tube(t, a).norm() ==
          doctest::Approx(std::sqrt(50.0) * a.norm()).epsilon(1e-10));
  }
}

TEST_CASE("dct construction and inverse roundtrip") {
  LinearTransform t1 = make_dct(1);
  CHECK(std::abs((t1.forward() * t1.inverse())(0, 0) - 1.0) < 1e-12);

  LinearTransform t4 = make_dct(4);
  CHECK((t4.forward() * t4.inverse() - MatrixX<Complex>::Identity(4, 4)).norm() <
        1e-10);
  CHECK(t4.energy_scale_sq() == 4.0);
  CHECK(t4.is_real());
}

TEST_CASE("dct forward matches explicit construction") {
  // independently assembled W^{-1} C (I + Z)
  const Index n = 5;
  MatrixX<double> c(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      c(k, j) = std::sqrt(2.0 / n) *
                std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * n)) *
                (k == 0 ? 1.0 / std::numbers::sqrt2 : 1.0);
  MatrixX<double> iz = MatrixX<double>::Identity(n, n);
  for (Index i = 0; i + 1 < n; ++i) iz(i, i + 1) = 1.0;
  MatrixX<double> m = c.col(0).cwiseInverse().asDiagonal() * (c * iz);
  LinearTransform t = make_dct(n);
  CHECK((t.forward().real() - m).norm() < 1e-12);

  Pcg32 rng(3);
  VectorX<double> a = random_real_tube(n, rng);
  CHECK((apply_tube(t, a) - (m * a).cast<Complex>()).norm() < 1e-12);
}

TEST_CASE("unity tube is the multiplicative identity") {
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(8);
    Tube e = unity_tube(t);
    Pcg32 rng(5);
    Tube a = tmsd::test::random_tube(8, rng);
    CHECK((tube_mult(t, a, e) - a).norm() < 1e-10 * a.norm());
    Tube z = Tube::Zero(8);
    CHECK(tube_mult(t, a, z).norm() < 1e-12);
  }
}

TEST_CASE("invert_tube closed forms") {
  LinearTransform t = make_dft(4);
  Tube ones = Tube::Ones(4);
  Tube delta = invert_tube(t, ones);
  CHECK(std::abs(delta(0) - 1.0) < 1e-12);
  for (Index k = 1; k < 4; ++k) CHECK(std::abs(delta(k)) < 1e-12);

  LinearTransform td = make_dct(6);
  Pcg32 rng(11);
  Tube a = tmsd::test::random_tube(6, rng);
  CHECK((invert_tube(td, apply_tube(td, a)) - a).norm() < 1e-12 * a.norm());
  CHECK((td.inverse() * a - invert_tube(td, a)).norm() < 1e-12);
}

TEST_CASE("roundtrip over 200 random tubes") {
  Pcg32 rng(17);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(12);
    for (int i = 0; i < 100; ++i) {
      Tube a = tmsd::test::random_tube(12, rng);
      CHECK((invert_tube(t, apply_tube(t, a)) - a).norm() <= 1e-10 * a.norm());
    }
  }
}

TEST_CASE("apply dft(2) closed form") {
  LinearTransform t = make_dft(2);
  VectorX<double> a(2);
  a << 1, 1;
  Tube out = apply_tube(t, a);
  CHECK(std::abs(out(0) - 2.0) < 1e-12);
  CHECK(std::abs(out(1)) < 1e-12);
  VectorX<double> z = VectorX<double>::Zero(2);
  CHECK(apply_tube(t, z).norm() == 0.0);
  VectorX<double> wrong = VectorX<double>::Zero(3);
  CHECK_THROWS_AS(apply_tube(t, wrong), DimensionMismatch);
}

TEST_CASE("tube_mult equals circular convolution under dft") {
  Pcg32 rng(23);
  for (Index n = 1; n <= 16; ++n) {
    LinearTransform t = make_dft(n);
    Tube a = tmsd::test::random_tube(n, rng);
    Tube b = tmsd::test::random_tube(n, rng);
    Tube conv = Tube::Zero(n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) conv((i + j) % n) += a(i) * b(j);
    CHECK((tube_mult(t, a, b) - conv).norm() < 1e-10 * (1.0 + conv.norm()));
  }
}

TEST_CASE("tube_mult associative and commutative") {
  Pcg32 rng(29);
  for (auto build : {make_dft, make_dct}) {
    LinearTransform t = build(9);
    for (int i = 0; i < 20; ++i) {
      Tube a = tmsd::test::random_tube(9, rng);
      Tube b = tmsd::test::random_tube(9, rng);
      Tube c = tmsd::test::random_tube(9, rng);
      Tube ab_c = tube_mult(t, tube_mult(t, a, b), c);
      Tube a_bc = tube_mult(t, a, tube_mult(t, b, c));
      CHECK((ab_c - a_bc).norm() <= 1e-9 * (1.0 + ab_c.norm()));
      CHECK((tube_mult(t, a, b) - tube_mult(t, b, a)).norm() <=
            1e-9 * (1.0 + ab_c.norm()));
    }
  }
}

TEST_CASE("custom transforms validated at construction") {
  MatrixX<Complex> sing = MatrixX<Complex>::Zero(3, 3);
  CHECK_THROWS_AS(make_custom(sing, 1.0), SingularTransform);
  MatrixX<Complex> ok = 2.0 * MatrixX<Complex>::Identity(3, 3);
  LinearTransform t = make_custom(ok, 4.0);
  CHECK(t.kind() == TransformKind::custom);
  CHECK_THROWS_AS(make_custom(ok, 5.0), InvalidArg);  // above smax^2
}

TEST_SUITE_END();
