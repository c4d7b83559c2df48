#include <cmath>

#include "doctest.h"
#include "vfsc/randomizer.hpp"

using namespace vfsc;

namespace {

// Inner code that reconstructs every block with the all-zero word.
class ZeroInnerCode final : public InnerCode {
 public:
  ZeroInnerCode(std::size_t n, double D) : n_(n), D_(D), ham_(DistortionSpec::hamming(2)) {}
  std::size_t block_length() const override { return n_; }
  double ln_codebook_size() const override { return 7.5; }
  TrialRecord code(std::span<const Symbol> block) const override {
    TrialRecord r;
    r.tau = n_;
    r.index = 2;
    r.distortion = block_distortion(block, reconstruct(2), ham_);
    r.psi_hit = true;
    r.excess = r.distortion > D_;
    return r;
  }
  SequenceSample reconstruct(std::size_t) const override { return SequenceSample(n_, 0); }
  const DistortionSpec& distortion() const override { return ham_; }

 private:
  std::size_t n_;
  double D_;
  DistortionSpec ham_;
};

// Exhaustive mass of a coin set over all blocks of its length.
double enumerate_mass(const SourceSpec& src, const CoinSet& coin) {
  const std::size_t L = coin.block_length();
  const std::size_t k = src.alphabet_size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < L; ++i) total *= k;
  double mass = 0;
  SequenceSample b(L);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double p = 1;
    for (std::size_t i = 0; i < L; ++i) {
      b[i] = static_cast<Symbol>(c % k);
      c /= k;
      p *= src.prob(b[i]);
    }
    if (coin.contains(b)) mass += p;
  }
  return mass;
}

}  // namespace

TEST_CASE("wrapper parameters") {
  const auto p = derive_params(1000, 0.2, 0.05);
  CHECK(std::abs(p.gamma - 2.5625) < 1e-12);
  CHECK(std::abs(p.alpha - 0.16) < 1e-12);
  CHECK(std::abs(p.beta - 0.18) < 1e-12);
  CHECK(std::abs(p.f_delta - 0.025) < 1e-12);
  CHECK(p.nprime == 800);
  CHECK(p.long_branch() == 2050);
  CHECK(p.L_baseline == 6);
  CHECK((p.gamma * p.alpha + 1 - p.alpha) * (1 - p.epsilon) == doctest::Approx(1.0).epsilon(1e-15));
  for (double eps : {0.05, 0.3, 0.7}) {
    for (double delta : {1e-3, 0.1, 2.0}) {
      const auto q = derive_params(5000, eps, delta);
      CHECK((q.gamma * q.alpha + 1 - q.alpha) * (1 - eps) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(q.alpha < q.beta);
      CHECK(q.beta < eps);
      CHECK(q.f_delta > 0);
    }
  }
  const auto tiny = derive_params(1000, 0.2, 1e-6);
  CHECK(tiny.alpha < 0.2);
  CHECK(tiny.alpha > 0.19999);
  CHECK(tiny.beta > 0.19999);
  CHECK_THROWS(derive_params(1000, 0.0, 0.05));
  CHECK_THROWS(derive_params(1000, 1.0, 0.05));
  CHECK_THROWS(derive_params(1000, 0.2, 0.0));
  CHECK_THROWS(derive_params(3, 0.2, 0.05));
}

TEST_CASE("coin sets") {
  SUBCASE("fair bit") {
    const auto src = SourceSpec::bernoulli(0.5);
    const auto coin = build_coin_set(src, 0.16, 0.18, 6);
    CHECK(coin.block_length() == 6);
    CHECK(coin.mass() == 11.0 / 64.0);
    CHECK(enumerate_mass(src, coin) == doctest::Approx(11.0 / 64.0).epsilon(1e-15));
  }
  SUBCASE("short baseline is lengthened") {
    const auto coin = build_coin_set(SourceSpec::bernoulli(0.5), 0.16, 0.18, 2);
    CHECK(coin.block_length() == 6);
  }
  SUBCASE("widest interval takes one atom") {
    for (const auto& src : {SourceSpec::bernoulli(0.9), SourceSpec({0.2, 0.5, 0.3})}) {
      const auto coin = build_single_symbol_coin_set(src, 0.0, 1.0);
      CHECK(coin.mass() == doctest::Approx(src.max_prob()));
      CHECK(enumerate_mass(src, coin) == doctest::Approx(coin.mass()).epsilon(1e-14));
    }
  }
  SUBCASE("skewed bit") {
    const auto src = SourceSpec::bernoulli(0.9);
    const auto coin = build_coin_set(src, 0.16, 0.18, 6);
    CHECK(coin.block_length() >= 38);
    CHECK(coin.mass() > 0.16);
    CHECK(coin.mass() <= 0.18);
    RandomStream rng(31);
    const std::size_t T = 200'000;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < T; ++t) hits += coin.contains(sample_block(src, coin.block_length(), rng));
    const double sigma = std::sqrt(coin.mass() * (1 - coin.mass()) / T);
    CHECK(std::abs(hits / double(T) - coin.mass()) <= 4 * sigma);
  }
  SUBCASE("ternary law, exhaustive") {
    const SourceSpec src({0.45, 0.35, 0.2});
    for (std::size_t L : {5u, 7u, 9u}) {
      const auto coin = build_coin_set_with_length(src, 0.16, 0.18, L);
      CHECK(coin.mass() > 0.16);
      CHECK(coin.mass() <= 0.18);
      CHECK(enumerate_mass(src, coin) == doctest::Approx(coin.mass()).epsilon(1e-12));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_coin_set(SourceSpec({1.0, 0.0}), 0.16, 0.18, 6), std::domain_error);
    CHECK_THROWS(build_coin_set_with_length(SourceSpec::bernoulli(0.5), 0.16, 0.18, 3));
    CHECK_THROWS(build_coin_set(SourceSpec::bernoulli(0.5), 0.16, 0.18, 6).contains(SequenceSample{0, 1}));
  }
}

TEST_CASE("wrapped trials") {
  const auto src = SourceSpec::uniform(2);
  const auto params = derive_params(1000, 0.2, 0.05);
  const ZeroInnerCode inner(params.nprime, 0.6);
  SUBCASE("forced H0 equals the inner code") {
    RandomStream a(4), b(4);
    const auto w = wrapped_trial(src, params, CoinSet::constant(false), inner, a);
    sample_block(src, 1, b);
    const auto payload = sample_block(src, params.nprime, b);
    const auto direct = inner.code(payload);
    CHECK_FALSE(w.h1);
    CHECK(w.record.tau == direct.tau);
    CHECK(w.record.index == direct.index);
    CHECK(w.record.distortion == direct.distortion);
  }
  SUBCASE("forced H1") {
    RandomStream rng(4);
    const auto w = wrapped_trial(src, params, CoinSet::constant(true), inner, rng);
    CHECK(w.h1);
    CHECK(w.record.tau == 2050);
    CHECK(w.record.index == 1);
    CHECK(w.record.excess);
  }
  SUBCASE("aggregate") {
    const auto coin = build_coin_set(src, params);
    const auto s = wrapped_stats(src, params, coin, inner, 100'000, 17);
    const double p = 11.0 / 64.0;
    CHECK(s.p == p);
    CHECK(std::abs(s.h1.rate - p) <= 3 * std::sqrt(p * (1 - p) / 100'000));
    const double expected_tau = p * 2050 + (1 - p) * 800;
    CHECK(s.tau_lo <= expected_tau);
    CHECK(s.tau_hi >= expected_tau);
    CHECK(s.mean_tau >= s.tau_lo);
    CHECK(s.mean_tau <= s.tau_hi);
    CHECK(s.rate == doctest::Approx((1 - 0.2) * s.lnM / params.nprime).epsilon(1e-15));
    CHECK(s.excess.rate <= params.beta + (1 - params.alpha) * s.inner_excess.rate + 2 * s.excess.radius());
    CHECK(expected_tau == doctest::Approx(1014.84375));
  }
  SUBCASE("block length mismatch") {
    RandomStream rng(1);
    const ZeroInnerCode wrong(10, 0.5);
    CHECK_THROWS(wrapped_trial(src, params, CoinSet::constant(false), wrong, rng));
  }
}
