#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vfsc/bounds.hpp"

using namespace vfsc;

namespace {

// Q(t) by composite Simpson quadrature of the normal density on [t, t + 12].
double q_quadrature(double t) {
  const int steps = 20000;
  const double h = 12.0 / steps;
  auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); };
  double s = pdf(t) + pdf(t + 12.0);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(t + i * h);
  return s * h / 3.0;
}

double q_inv_quadrature(double p) {
  double lo = -10, hi = 10;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_quadrature(mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Q function") {
  CHECK(q_func(0) == 0.5);
  CHECK(q_inv(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double t : {-2.0, -0.3, 0.7, 1.5, 3.0, 5.0}) {
    CHECK(q_func(t) == doctest::Approx(q_quadrature(t)).epsilon(1e-9));
  }
  CHECK(std::abs(q_inv(0.1) - q_inv_quadrature(0.1)) < 1e-8);
  CHECK(std::abs(q_inv(0.1) - 1.281552) < 1e-5);
  for (double p : {1e-6, 0.01, 0.3, 0.9}) CHECK(q_func(q_inv(p)) == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("converse") {
  const auto rd = rd_at(SourceSpec::uniform(2), DistortionSpec::hamming(2), 0.25);
  CHECK(converse_lnM(1000, 1.0, rd, 1.0) == 0.0);
  CHECK(converse_lnM(1000, 0.2, rd, 0.0) == doctest::Approx(104.650).epsilon(1e-5));
  CHECK(converse_lnM(1000, 0.2, rd, 2.0) == doctest::Approx(104.650 - 2 * std::sqrt(1000.0)).epsilon(1e-5));
  CHECK(converse_lnM(1000, 0.2, rd, 2.0) == doctest::Approx(41.404).epsilon(1e-4));
  CHECK(default_converse_constant(rd) == doctest::Approx(2 * std::sqrt(rd.v_disp)));
  CHECK_THROWS(converse_lnM(1000, 0.2, rd, -1.0));
}

TEST_CASE("dispersion approximation") {
  const auto rd = rd_at(SourceSpec::uniform(2), DistortionSpec::hamming(2), 0.1);
  const double v = fv_lnM_approx(1e4, 0.1, rd);
  const double z = q_inv_quadrature(0.1);
  const double oracle = 0.9 * 1e4 * rd.rate - std::sqrt(1e4 * rd.v_disp / (2 * std::numbers::pi)) * std::exp(-0.5 * z * z);
  CHECK(v == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(v == doctest::Approx(3301.01).epsilon(1e-5));
  CHECK(fv_lnM_approx(1e4, 0.5, rd.rate, rd.v_disp) ==
        doctest::Approx(0.5 * 1e4 * rd.rate - std::sqrt(1e4 * rd.v_disp / (2 * std::numbers::pi))));
  CHECK(fv_lnM_approx(1e4, 0.3, 0.2, 0.0) == 0.7 * 1e4 * 0.2);
}

TEST_CASE("lossless variable-length rate") {
  CHECK(koga_rate(SourceSpec::bernoulli(0.3), 0.0) == doctest::Approx(entropy(SourceSpec::bernoulli(0.3))));
  CHECK(koga_rate(SourceSpec::bernoulli(0.3), 0.2) == doctest::Approx(0.488692).epsilon(1e-6));
  CHECK(koga_rate(SourceSpec::bernoulli(0.3), 1 - 1e-12) < 1e-11);
}

TEST_CASE("report") {
  const auto src = SourceSpec::uniform(2);
  const auto rd = rd_at(src, DistortionSpec::hamming(2), 0.25);
  const auto r = bound_report(src, 1e5, 0.2, rd, 0.5);
  CHECK(r.B == 0.5);
  CHECK(r.theorem_rate == doctest::Approx(0.8 * rd.rate));
  CHECK(r.converse_lnM == converse_lnM(1e5, 0.2, rd, 0.5));
  CHECK(r.converse_lnM <= r.fv_lnM_approx);
}
