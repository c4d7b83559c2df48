#include <cmath>

#include "doctest.h"
#include "vfsc/rd_solver.hpp"

using namespace vfsc;

namespace {
double hb(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log(p) - (1 - p) * std::log1p(-p);
}
}  // namespace

TEST_CASE("zero slope is the zero-rate endpoint") {
  const auto src = SourceSpec::bernoulli(0.3);
  const auto pt = ba_fixed_slope(src, DistortionSpec::hamming(2), 0.0);
  CHECK(pt.rate == 0.0);
  CHECK(pt.distortion == doctest::Approx(0.3));
}

TEST_CASE("binary Hamming against h_b(p) - h_b(D)") {
  const auto ham = DistortionSpec::hamming(2);
  CHECK(rd_at(SourceSpec::uniform(2), ham, 0.1).rate == doctest::Approx(0.368064207278).epsilon(1e-9));
  CHECK(rd_at(SourceSpec::bernoulli(0.3), ham, 0.1).rate ==
        doctest::Approx(hb(0.3) - hb(0.1)).epsilon(1e-9));
  CHECK(std::abs(hb(0.3) - hb(0.1) - 0.285781) < 1e-6);
  CHECK(rd_at(SourceSpec::uniform(2), ham, 0.25).rate == doctest::Approx(0.130812036).epsilon(1e-8));
  for (double p : {0.05, 0.2, 0.4}) {
    for (double D : {0.01, p / 3, p / 2, 0.9 * p}) {
      const auto pt = rd_at(SourceSpec::bernoulli(p), ham, D);
      CHECK(std::abs(pt.rate - (hb(p) - hb(D))) < 1e-7);
      CHECK(std::abs(pt.achieved_distortion - D) < 1e-8);
    }
  }
}

TEST_CASE("ternary uniform Hamming closed form") {
  // R(D) = ln 3 - h_b(D) - D ln 2 for D <= 2/3.
  const auto src = SourceSpec::uniform(3);
  const auto ham = DistortionSpec::hamming(3);
  for (double D : {0.05, 0.2, 0.4, 0.6}) {
    const double expected = std::log(3.0) - hb(D) - D * std::log(2.0);
    CHECK(std::abs(rd_at(src, ham, D).rate - expected) < 1e-7);
  }
  CHECK(rd_at(src, ham, 2.0 / 3.0).rate == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("dispersion of the binary uniform source") {
  const double D = 0.1;
  const auto pt = rd_at(SourceSpec::uniform(2), DistortionSpec::hamming(2), D);
  const double closed = D * (1 - D) * std::pow(std::log((1 - D) / D), 2);
  CHECK(closed == doctest::Approx(0.434503).epsilon(1e-6));
  CHECK(pt.v_disp == doctest::Approx(closed).epsilon(1e-6));
  const auto moments = channel_moments(SourceSpec::uniform(2), DistortionSpec::hamming(2), pt.channel);
  CHECK(moments.iota_variance == doctest::Approx(pt.v_disp));
  CHECK(moments.mutual_information == doctest::Approx(pt.rate).epsilon(1e-9));
  CHECK(pt.d_var == doctest::Approx(D * (1 - D)).epsilon(1e-7));
}

TEST_CASE("endpoints and infeasibility") {
  const auto ham = DistortionSpec::hamming(2);
  const auto src = SourceSpec::bernoulli(0.3);
  const auto ext = d_extremes(src, ham);
  CHECK(ext.floor == 0.0);
  CHECK(ext.max == doctest::Approx(0.3));
  CHECK(d_extremes(SourceSpec::uniform(2), ham).max == doctest::Approx(0.5));
  CHECK(rd_at(src, ham, 0.3).rate == 0.0);
  CHECK(rd_at(src, ham, 0.8).rate == 0.0);
  CHECK_THROWS_AS(rd_at(src, ham, -0.1), std::domain_error);
  const DistortionSpec shifted(2, 2, {0.2, 1.0, 1.0, 0.2});
  CHECK(d_extremes(src, shifted).floor == doctest::Approx(0.2));
  CHECK_THROWS_AS(rd_at(src, shifted, 0.1), std::domain_error);
}

TEST_CASE("channel is a valid test channel") {
  const SourceSpec src({0.5, 0.3, 0.2});
  const DistortionSpec d(3, 3, {0, 1, 4, 1, 0, 1, 4, 1, 0});
  const auto pt = rd_at(src, d, 0.3);
  for (std::size_t v = 0; v < 3; ++v) {
    double row = 0;
    for (std::size_t w = 0; w < 3; ++w) row += pt.channel(static_cast<Symbol>(v), static_cast<Symbol>(w));
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t w = 0; w < 3; ++w) {
    double col = 0;
    for (std::size_t v = 0; v < 3; ++v) col += src.prob(static_cast<Symbol>(v)) * pt.channel(static_cast<Symbol>(v), static_cast<Symbol>(w));
    CHECK(col == doctest::Approx(pt.channel.marginal[w]).epsilon(1e-10));
  }
  CHECK(pt.achieved_distortion == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("rate is convex and non-increasing in D") {
  const SourceSpec src({0.5, 0.3, 0.2});
  const DistortionSpec d(3, 3, {0, 1, 4, 1, 0, 1, 4, 1, 0});
  std::vector<double> r;
  for (double D = 0.05; D < 0.8; D += 0.05) r.push_back(rd_at(src, d, D).rate);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] <= r[i - 1] + 1e-10);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) CHECK(r[i] <= 0.5 * (r[i - 1] + r[i + 1]) + 1e-9);
}

TEST_CASE("gaussian rd") {
  CHECK(gaussian_rd(1, 1) == 0.0);
  CHECK(gaussian_rd(1, 0.25) == doctest::Approx(0.5 * std::log(4.0)));
  CHECK(gaussian_rd(2, 4) == 0.0);
}
