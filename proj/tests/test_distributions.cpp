#include <doctest.h>
#include "tmsd/distributions.hpp"
#include "tmsd/rng.hpp"

#include <cmath>

using namespace tmsd;

TEST_SUITE_BEGIN("distributions");

TEST_CASE("chi2 cdf basics") {
  CHECK(chi2_cdf(0.0, 3.0) == doctest::Approx(0.0));
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
    CHECK(chi2_cdf(x, 2.0) == doctest::Approx(1.0 - std::exp(-x / 2)).epsilon(1e-12));
  CHECK(chi2_cdf(3.841, 1.0) == doctest::Approx(0.95).epsilon(1e-3));
  CHECK_THROWS_AS(chi2_cdf(-1.0, 1.0), InvalidArg);
  CHECK_THROWS_AS(chi2_cdf(1.0, 0.0), InvalidArg);
}

TEST_CASE("noncentral cdf reduces to central at lambda 0") {
  for (double k : {1.0, 2.0, 5.0, 50.0})
    for (double x : {0.5, 2.0, 10.0, 60.0})
      CHECK(noncentral_chi2_cdf(x, k, 0.0) ==
            doctest::Approx(chi2_cdf(x, k)).epsilon(1e-14));
  CHECK(noncentral_chi2_cdf(0.0, 3.0, 2.0) == 0.0);
}

TEST_CASE("noncentral cdf vs sampling oracle") {
  // (k=3, lambda^2=2): X = (Z1 + sqrt(2))^2 + Z2^2 + Z3^2
  const int n = 2000000;
  Pcg32 rng(123);
  const double x = 5.0;
  long hits = 0;
  for (int i = 0; i < n; ++i) {
    double z1 = rng.next_gaussian() + std::sqrt(2.0);
    double z2 = rng.next_gaussian();
    double z3 = rng.next_gaussian();
    if (z1 * z1 + z2 * z2 + z3 * z3 <= x) ++hits;
  }
  double mc = static_cast<double>(hits) / n;
  double se = std::sqrt(mc * (1 - mc) / n);
  CHECK(std::fabs(noncentral_chi2_cdf(x, 3.0, 2.0) - mc) < 3 * se);
}

TEST_CASE("quantile closed forms and roundtrips") {
  for (double q : {0.1, 0.5, 0.9, 0.99})
    CHECK(noncentral_chi2_quantile(q, 2.0, 0.0) ==
          doctest::Approx(-2.0 * std::log(1.0 - q)).epsilon(1e-9));
  Pcg32 rng(7);
  for (double k : {1.0, 2.0, 5.0, 50.0})
    for (double l2 : {0.0, 1.0, 10.0}) {
      for (int i = 0; i < 4; ++i) {
        double x = (k + l2) * (0.2 + rng.next_double() * 2.0);
        double q = noncentral_chi2_cdf(x, k, l2);
        if (q > 1e-12 && q < 1 - 1e-12)
          CHECK(noncentral_chi2_quantile(q, k, l2) ==
                doctest::Approx(x).epsilon(1e-8));
        double p = 0.05 + 0.9 * rng.next_double();
        CHECK(noncentral_chi2_cdf(noncentral_chi2_quantile(p, k, l2), k, l2) ==
              doctest::Approx(p).epsilon(1e-8));
      }
    }
}

TEST_CASE("cdf monotone and bounded") {
  double prev = -1.0;
  for (double x = 0.0; x <= 30.0; x += 0.5) {
    double v = noncentral_chi2_cdf(x, 4.0, 3.0);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("series truncation is converged") {
  // brute-force fixed-length Poisson mixture as independent evaluation
  double k = 4.0, l2 = 9.0, x = 13.0;
  double half = l2 / 2, acc = 0.0;
  for (long j = 0; j < 400; ++j)
    acc += std::exp(-half + j * std::log(half) - std::lgamma(j + 1.0)) *
           chi2_cdf(x, k + 2.0 * j);
  CHECK(noncentral_chi2_cdf(x, k, l2) == doctest::Approx(acc).epsilon(1e-10));
}

TEST_CASE("gaussian stream statistics and determinism") {
  auto a = gaussian_stream(42, 1000);
  auto b = gaussian_stream(42, 1000);
  CHECK(a == b);
  auto big = gaussian_stream(7, 1000000);
  double mean = 0, var = 0;
  for (double v : big) mean += v;
  mean /= big.size();
  for (double v : big) var += (v - mean) * (v - mean);
  var /= big.size();
  CHECK(std::fabs(mean) < 0.005);
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_SUITE_END();
