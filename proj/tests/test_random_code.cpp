#include <cmath>

#include "doctest.h"
#include "vfsc/random_code.hpp"
#include "vfsc/rd_solver.hpp"

using namespace vfsc;

namespace {
TestChannel bsc(double crossover) {
  return TestChannel::from_conditional(SourceSpec::uniform(2), 2,
                                       {1 - crossover, crossover, crossover, 1 - crossover});
}
PsiConfig permissive(double D) {
  PsiConfig cfg;
  cfg.channel = bsc(0.2);
  cfg.D = D;
  cfg.iota_threshold_per_symbol = 1e9;
  return cfg;
}
}  // namespace

TEST_CASE("codebook generation") {
  SUBCASE("degenerate marginal") {
    const auto cb = Codebook::generate(3, 50, 8, {0.0, 1.0});
    for (std::size_t j = 1; j <= 50; ++j) CHECK(cb.row(j) == SequenceSample(8, 1));
  }
  SUBCASE("cell frequencies") {
    const auto cb = Codebook::generate(11, 10'000, 16, {0.5, 0.5});
    for (std::size_t k = 0; k < 16; ++k) {
      std::size_t ones = 0;
      for (std::size_t j = 1; j <= 10'000; ++j) ones += cb.row(j)[k];
      CHECK(std::abs(ones / 1e4 - 0.5) <= 0.015);
    }
  }
  SUBCASE("seeded and storage independent") {
    const auto a = Codebook::generate(77, 300, 9, {0.3, 0.7});
    const auto b = Codebook::generate(77, 300, 9, {0.3, 0.7});
    const auto lazy = Codebook::generate(77, 300, 9, {0.3, 0.7}, 0);
    const auto other = Codebook::generate(78, 300, 9, {0.3, 0.7});
    CHECK(a.stored());
    CHECK_FALSE(lazy.stored());
    bool differs = false;
    for (std::size_t j = 1; j <= 300; ++j) {
      CHECK(a.row(j) == b.row(j));
      CHECK(a.row(j) == lazy.row(j));
      differs = differs || a.row(j) != other.row(j);
    }
    CHECK(differs);
  }
  SUBCASE("index range") {
    const auto cb = Codebook::generate(1, 4, 3, {0.5, 0.5});
    CHECK_THROWS_AS(cb.row(0), std::out_of_range);
    CHECK_THROWS_AS(cb.row(5), std::out_of_range);
    CHECK_THROWS(Codebook::generate(1, 0, 3, {0.5, 0.5}));
  }
}

TEST_CASE("encoder picks the largest hit index") {
  const SequenceSample v{0, 1, 1, 0};
  PsiEvaluator psi(permissive(0.25));
  SUBCASE("no hit falls back to 1") {
    const auto cb = Codebook::from_rows(3, 4, {1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1});
    CHECK(encode(v, cb, psi) == 1);
    const auto rec = code_block(v, cb, psi);
    CHECK_FALSE(rec.psi_hit);
    CHECK(rec.excess);
    CHECK(rec.tau == 4);
  }
  SUBCASE("single hit") {
    const auto cb = Codebook::from_rows(3, 4, {1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1});
    CHECK(encode(v, cb, psi) == 2);
  }
  SUBCASE("two hits, larger index wins") {
    const auto cb = Codebook::from_rows(3, 4, {0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1});
    CHECK(encode(v, cb, psi) == 2);
    const auto rec = code_block(v, cb, psi);
    CHECK(rec.psi_hit);
    CHECK(rec.distortion == 0.25);
    CHECK_FALSE(rec.excess);
  }
}

TEST_CASE("decode") {
  const auto cb = Codebook::from_rows(2, 3, {1, 0, 1, 0, 0, 1});
  CHECK(decode(1, cb, 3) == SequenceSample{1, 0, 1});
  CHECK(decode(2, cb, 3) == SequenceSample{0, 0, 1});
  const auto big = Codebook::generate(5, 64, 10, {0.5, 0.5});
  const auto again = Codebook::generate(5, 64, 10, {0.5, 0.5}, 0);
  PsiEvaluator psi(permissive(0.3));
  RandomStream rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto v = sample_block(SourceSpec::uniform(2), 10, rng);
    const auto j = encode(v, big, psi);
    CHECK(decode(j, big, 10) == decode(j, again, 10));
    if (psi(v, decode(j, big, 10))) {
      CHECK(block_distortion(v, decode(j, big, 10), DistortionSpec::hamming(2)) <= 0.3 + 1e-12);
    }
  }
}

TEST_CASE("trials") {
  const auto src = SourceSpec::uniform(2);
  SUBCASE("generous budget has no excess") {
    const auto cb = Codebook::generate(4, 2000, 8, {0.5, 0.5});
    const auto agg = run_trials(src, PsiEvaluator(permissive(0.5)), cb, 2000, 9);
    CHECK(agg.excess.rate <= 0.01);
  }
  SUBCASE("single garbage codeword against brute force") {
    const std::size_t n = 4;
    const auto cb = Codebook::from_rows(1, n, {1, 1, 1, 1});
    const double D = 0.25;
    std::size_t bad = 0;
    for (unsigned x = 0; x < 16; ++x) {
      double d = 0;
      for (std::size_t k = 0; k < n; ++k) d += ((x >> k) & 1u) != 1u;
      bad += d / n > D;
    }
    const double exact = bad / 16.0;
    CHECK(exact == doctest::Approx(11.0 / 16.0));
    const std::size_t T = 40'000;
    const auto agg = run_trials(src, PsiEvaluator(permissive(D)), cb, T, 21);
    CHECK(std::abs(agg.excess.rate - exact) <= 3 * std::sqrt(exact * (1 - exact) / T));
  }
  SUBCASE("per codeword hit rate at n = 12") {
    PsiConfig cfg;
    cfg.channel = bsc(0.2);
    cfg.D = 0.25;
    cfg.iota_threshold_per_symbol = std::log(2.0) - (-0.2 * std::log(0.2) - 0.8 * std::log(0.8)) + 0.3;
    const auto cb = Codebook::generate(13, 370, 12, {0.5, 0.5});
    const auto agg = run_trials(src, PsiEvaluator(cfg), cb, 20'000, 14);
    const double q = 299.0 / 4096.0;
    CHECK(agg.per_codeword_rows == 370);
    CHECK(agg.per_codeword.lo <= q);
    CHECK(agg.per_codeword.hi >= q);
    CHECK(agg.psi_hit.rate > 0.99);
  }
  SUBCASE("reproducible") {
    const auto cb = Codebook::generate(4, 100, 8, {0.5, 0.5});
    const auto a = run_trials(src, PsiEvaluator(permissive(0.2)), cb, 500, 3);
    const auto b = run_trials(src, PsiEvaluator(permissive(0.2)), cb, 500, 3);
    CHECK(a.excess.successes == b.excess.successes);
    CHECK(a.mean_distortion == b.mean_distortion);
  }
}
