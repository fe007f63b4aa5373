#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_helpers.hpp"
#include "tmsd/estimator.hpp"
#include "tmsd/io.hpp"
#include "tmsd/sampling.hpp"

using namespace tmsd;
using tmsd::test::random_tensor;

TEST_SUITE_BEGIN("sampling");

TEST_CASE("draw determinism and exhaustion") {
  SampleSet a = draw(SamplingKind::tubal, 7, 10, 4, false, 99);
  SampleSet b = draw(SamplingKind::tubal, 7, 10, 4, false, 99);
  CHECK(a.indices == b.indices);

  SampleSet full = draw(SamplingKind::tubal, 10, 10, 4, false, 1);
  std::set<Index> distinct(full.indices.begin(), full.indices.end());
  CHECK(distinct.size() == 10);
  CHECK(*distinct.begin() == 0);
  CHECK(*distinct.rbegin() == 9);

  CHECK_THROWS_AS(draw(SamplingKind::tubal, 11, 10, 4, false, 1),
                  TooManySamples);
  CHECK_THROWS_AS(draw(SamplingKind::elementwise, 41, 10, 4, false, 1),
                  TooManySamples);
  // replacement lifts the cap
  SampleSet rep = draw(SamplingKind::tubal, 25, 10, 4, true, 5);
  CHECK(rep.m() == 25);
}

TEST_CASE("replacement draw is uniform (chi-square goodness of fit)") {
  const Index n1 = 50, n3 = 50;
  const Index m = 10000;
  SampleSet s = draw(SamplingKind::elementwise, m, n1, n3, true, 1234);
  std::vector<double> counts(n1 * n3, 0.0);
  for (Index cell : s.indices) counts[cell] += 1.0;
  const double expect = static_cast<double>(m) / (n1 * n3);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // chi-square with 2499 dof: mean 2499, sd sqrt(2*2499) ~ 70.7; 4 sigma
  CHECK(std::fabs(chi2 - 2499.0) < 4.0 * std::sqrt(2.0 * 2499.0));
}

TEST_CASE("restrict signal tubal") {
  Pcg32 rng(1);
  Tensor3d x = random_tensor(6, 1, 3, rng);

  SampleSet id{SamplingKind::tubal, {0, 1, 2, 3, 4, 5}, false, 6, 3};
  CHECK((restrict_signal_tubal(id, x) - x).frobenius_norm() == 0.0);

  Tensor3d two(3, 1, 2);
  two(2, 0, 0) = 1.0;
  two(2, 0, 1) = 2.0;
  SampleSet one{SamplingKind::tubal, {2}, false, 3, 2};
  Tensor3d sel = restrict_signal_tubal(one, two);
  CHECK(sel.n1() == 1);
  CHECK(sel(0, 0, 0) == 1.0);
  CHECK(sel(0, 0, 1) == 2.0);

  SampleSet sub{SamplingKind::tubal, {4, 0, 3}, false, 6, 3};
  Tensor3d r = restrict_signal_tubal(sub, x);
  double expect = x.tube(4, 0).squaredNorm() + x.tube(0, 0).squaredNorm() +
                  x.tube(3, 0).squaredNorm();
  CHECK(r.squaredNorm() == doctest::Approx(expect).epsilon(1e-12));

  SampleSet wrong{SamplingKind::elementwise, {0}, false, 6, 3};
  CHECK_THROWS_AS(restrict_signal_tubal(wrong, x), KindMismatch);
}

TEST_CASE("restrict basis tubal and projection property") {
  Pcg32 rng(2);
  LinearTransform t = make_dft(4);
  Tensor3d u = random_tensor(8, 2, 4, rng);

  SampleSet full{SamplingKind::tubal, {0, 1, 2, 3, 4, 5, 6, 7}, false, 8, 4};
  CHECK((restrict_basis_tubal(full, u) - u).frobenius_norm() == 0.0);

  SampleSet one{SamplingKind::tubal, {5}, false, 8, 4};
  Tensor3d single = restrict_basis_tubal(one, u);
  CHECK(single.n1() == 1);
  CHECK(single.n2() == 2);

  Subspace s(t, u);
  SampleSet sub = draw(SamplingKind::tubal, 5, 8, 4, false, 7);
  Tensor3d p = restriction_projection(sub, s);
  Tensor3d pp = l_product(t, p, p);
  CHECK((pp - p).frobenius_norm() < 1e-8 * (1 + p.frobenius_norm()));
  Tensor3d pt = tensor_transpose(t, p);
  CHECK((pt - p).frobenius_norm() < 1e-8 * (1 + p.frobenius_norm()));
}

TEST_CASE("restrict signal elementwise") {
  Pcg32 rng(3);
  Tensor3d x = random_tensor(4, 1, 3, rng);

  std::vector<Index> all;
  for (Index c = 0; c < 12; ++c) all.push_back(c);
  SampleSet full{SamplingKind::elementwise, all, false, 4, 3};
  CHECK((restrict_signal_elementwise(full, x) - x).frobenius_norm() == 0.0);

  SampleSet some{SamplingKind::elementwise, {0, 5, 11}, false, 4, 3};
  Tensor3d r = restrict_signal_elementwise(some, x);
  CHECK(r(0, 0, 0) == x(0, 0, 0));
  CHECK(r(1, 0, 1) == x(1, 0, 1));  // cell 5 = 1*4 + 1 -> (i=1, k=1)
  CHECK(r(3, 0, 2) == x(3, 0, 2));
  CHECK(r(2, 0, 0) == 0.0);
  double expect = x(0, 0, 0) * x(0, 0, 0) + x(1, 0, 1) * x(1, 0, 1) +
                  x(3, 0, 2) * x(3, 0, 2);
  CHECK(unfold_vec(r).squaredNorm() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("restrict basis elementwise and projection") {
  Pcg32 rng(4);
  LinearTransform t = make_dft(3);
  Tensor3d u = random_tensor(5, 2, 3, rng);
  Subspace s(t, u);
  EmbeddedSubspace e = embed(s);

  std::vector<Index> all;
  for (Index c = 0; c < 15; ++c) all.push_back(c);
  SampleSet full{SamplingKind::elementwise, all, false, 5, 3};
  CHECK((restrict_basis_elementwise(full, e) - e.basis_matrix).norm() == 0.0);

  SampleSet one{SamplingKind::elementwise, {7}, false, 5, 3};  // (i=2, k=1)
  MatrixX<double> m = restrict_basis_elementwise(one, e);
  CHECK((m.row(7) - e.basis_matrix.row(7)).norm() == 0.0);
  m.row(7).setZero();
  CHECK(m.norm() == 0.0);

  SampleSet big = draw(SamplingKind::elementwise, 12, 5, 3, false, 11);
  MatrixX<double> p = restriction_projection(big, e);
  CHECK((p * p - p).norm() < 1e-8 * (1 + p.norm()));
  CHECK((p - p.transpose()).norm() < 1e-8);
}

TEST_CASE("restriction projection edge cases") {
  Pcg32 rng(5);
  LinearTransform t = make_dct(3);
  Tensor3d u = random_tensor(6, 2, 3, rng);
  Subspace s(t, u);

  // full sampling in identity order reproduces the cached projection
  SampleSet full{SamplingKind::tubal, {0, 1, 2, 3, 4, 5}, false, 6, 3};
  Tensor3d p = restriction_projection(full, s);
  CHECK((p - s.projection()).frobenius_norm() <
        1e-8 * (1 + p.frobenius_norm()));

  // interpolation regime m = r: restricted in-span signals have residual 0
  SampleSet interp = draw(SamplingKind::tubal, 2, 6, 3, false, 3);
  Tensor3d c = random_tensor(2, 1, 3, rng);
  Tensor3d x = l_product(t, u, c);
  TubalRestrictionOperator op(interp, s);
  CHECK(op.residual_energy_restricted(restrict_signal_tubal(interp, x)) <
        1e-10);

  // rank-deficient: m < r
  SampleSet tiny = draw(SamplingKind::tubal, 1, 6, 3, false, 4);
  CHECK_THROWS_AS(restriction_projection(tiny, s), RankDeficientSample);
}

TEST_CASE("energy split inequality") {
  Pcg32 rng(6);
  Tensor3d x = random_tensor(8, 1, 4, rng);
  for (int rep = 0; rep < 10; ++rep) {
    SampleSet st = draw(SamplingKind::tubal, 1 + rng.next_below(8), 8, 4,
                        false, 100 + rep);
    CHECK(restrict_signal_tubal(st, x).squaredNorm() <=
          x.squaredNorm() + 1e-12);
    SampleSet se = draw(SamplingKind::elementwise, 1 + rng.next_below(32), 8,
                        4, false, 200 + rep);
    CHECK(restrict_signal_elementwise(se, x).squaredNorm() <=
          x.squaredNorm() + 1e-12);
  }
}

TEST_CASE("sample set json roundtrip") {
  SampleSet s = draw(SamplingKind::elementwise, 9, 5, 3, true, 77);
  nlohmann::json j = sample_set_to_json(s, 77);
  SampleSet back = sample_set_from_json(j);
  CHECK(back.kind == s.kind);
  CHECK(back.indices == s.indices);
  CHECK(back.replacement == s.replacement);
  CHECK(back.n1 == s.n1);
  CHECK(back.n3 == s.n3);
}

TEST_SUITE_END();
