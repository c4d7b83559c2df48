#include <cmath>
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "vfsc/numeric.hpp"
#include "vfsc/rng.hpp"
#include "vfsc/source_model.hpp"

using namespace vfsc;

namespace {
double plogp_sum(std::initializer_list<double> p) {
  double h = 0;
  for (double x : p) {
    if (x > 0) h -= x * std::log(x);
  }
  return h;
}
}  // namespace

TEST_CASE("entropy against direct evaluation") {
  CHECK(entropy(SourceSpec::uniform(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(entropy(SourceSpec({1.0, 0.0})) == 0.0);
  CHECK(entropy(SourceSpec::bernoulli(0.3)) == doctest::Approx(0.610864302055).epsilon(1e-11));
  CHECK(entropy(SourceSpec({0.5, 0.25, 0.125, 0.125})) ==
        doctest::Approx(plogp_sum({0.5, 0.25, 0.125, 0.125})).epsilon(1e-14));
  CHECK(entropy(SourceSpec::uniform(7)) == doctest::Approx(std::log(7.0)).epsilon(1e-14));
}

TEST_CASE("source spec validation") {
  CHECK_THROWS_AS(SourceSpec({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(SourceSpec({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(SourceSpec(std::vector<double>{}), std::invalid_argument);
  const SourceSpec s({0.2, 0.3, 0.5});
  CHECK(s.cdf().back() == 1.0);
  CHECK(s.max_prob() == 0.5);
  CHECK_FALSE(s.is_uniform());
  CHECK(SourceSpec::uniform(5).is_uniform());
  CHECK(parse_pmf("0.7, 0.3").prob(1) == doctest::Approx(0.3));
  CHECK_THROWS(parse_pmf("0.7 x"));
}

TEST_CASE("sample_block") {
  RandomStream a(5);
  const auto point = sample_block(SourceSpec({0.0, 1.0}), 5, a);
  CHECK(point == SequenceSample{1, 1, 1, 1, 1});

  RandomStream r1(12345), r2(12345);
  const std::size_t n = 1'000'000;
  const auto x = sample_block(SourceSpec::bernoulli(0.5), n, r1);
  const auto y = sample_block(SourceSpec::bernoulli(0.5), n, r2);
  CHECK(x == y);
  const double ones = static_cast<double>(std::count(x.begin(), x.end(), Symbol{1}));
  // 3 sigma = 3 * sqrt(0.25 / n) = 0.0015.
  CHECK(std::abs(ones / n - 0.5) <= 0.002);
  CHECK_THROWS(sample_block(SourceSpec::bernoulli(0.5), 0, r1));
}

TEST_CASE("sample_block frequencies on a four letter law") {
  const SourceSpec s({0.1, 0.2, 0.3, 0.4});
  RandomStream rng(99);
  const std::size_t n = 400'000;
  const auto x = sample_block(s, n, rng);
  for (Symbol v = 0; v < 4; ++v) {
    const double f = static_cast<double>(std::count(x.begin(), x.end(), v)) / n;
    const double sigma = std::sqrt(s.prob(v) * (1 - s.prob(v)) / n);
    CHECK(std::abs(f - s.prob(v)) <= 4 * sigma);
  }
}

TEST_CASE("block distortion") {
  const auto h = DistortionSpec::hamming(2);
  const SequenceSample v{0, 0, 0, 0}, w{0, 1, 0, 1};
  CHECK(block_distortion(v, v, h) == 0.0);
  CHECK(block_distortion(v, w, h) == 0.5);
  const DistortionSpec m(2, 2, {0.0, 0.7, 1.3, 0.2});
  const SequenceSample a{0, 1, 1}, b{1, 0, 1};
  CHECK(block_distortion(a, b, m) == doctest::Approx((0.7 + 1.3 + 0.2) / 3.0).epsilon(1e-15));
  CHECK_THROWS(block_distortion(a, w, m));
  CHECK_THROWS(block_distortion(SequenceSample{}, SequenceSample{}, m));
}

TEST_CASE("parse_distortion") {
  const auto d = parse_distortion("0 1 2; 1 0 1");
  CHECK(d.source_size() == 2);
  CHECK(d.reproduction_size() == 3);
  CHECK(d(1, 2) == 1.0);
  CHECK(d.integral());
  CHECK(d.max_entry() == 2.0);
  CHECK_THROWS(parse_distortion("0 1; 1"));
  CHECK_THROWS(parse_distortion("0 -1; 1 0"));
}

TEST_CASE("numeric helpers") {
  SUBCASE("log_sum_exp matches direct sum") {
    const std::vector<double> t{std::log(0.1), std::log(0.2), std::log(0.7)};
    CHECK(log_sum_exp(t) == doctest::Approx(0.0).epsilon(1e-15));
    const std::vector<double> big{1000.0, 1000.0};
    CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)));
  }
  SUBCASE("log_binomial against exact integers") {
    double c = 1;
    for (int k = 0; k <= 20; ++k) {
      CHECK(log_binomial(20, k) == doctest::Approx(std::log(c)).epsilon(1e-13));
      c = c * (20 - k) / (k + 1);
    }
  }
  SUBCASE("within_budget absorbs rounding only") {
    double s = 0;
    for (int i = 0; i < 10; ++i) s += 0.1;
    CHECK(within_budget(s, 10, 0.1));
    CHECK_FALSE(within_budget(1.01, 10, 0.1));
  }
  SUBCASE("Clopper-Pearson brackets the rate") {
    const auto e = binomial_estimate(30, 100);
    CHECK(e.lo < 0.3);
    CHECK(e.hi > 0.3);
    const auto z = binomial_estimate(0, 1000);
    CHECK(z.lo == 0.0);
    // Exact upper limit for zero successes: 1 - (alpha/2)^(1/n).
    CHECK(z.hi == doctest::Approx(1 - std::pow(0.005, 1.0 / 1000)).epsilon(1e-10));
  }
}
