#include "vfsc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vfsc {

double q_func(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must lie in (0,1)");
  // Q is decreasing; Q(-40) = 1 and Q(40) = 0 in double precision.
  double lo = -40.0;
  double hi = 40.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (q_func(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double converse_lnM(double N, double epsilon, double rate, double B) {
  if (!(B >= 0.0)) throw std::invalid_argument("converse_lnM: B must be >= 0");
  return std::max(0.0, (1.0 - epsilon) * N * rate - B * std::sqrt(N));
}

double converse_lnM(double N, double epsilon, const RDPoint& rd, double B) {
  return converse_lnM(N, epsilon, rd.rate, B);
}

double default_converse_constant(const RDPoint& rd) { return 2.0 * std::sqrt(rd.v_disp); }

double fv_lnM_approx(double N, double epsilon, double rate, double v_disp) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::domain_error("fv_lnM_approx: epsilon in [0,1)");
  const double first = (1.0 - epsilon) * N * rate;
  if (epsilon == 0.0 || v_disp == 0.0) return first;
  const double z = q_inv(epsilon);
  return first - std::sqrt(N * v_disp / (2.0 * std::numbers::pi)) * std::exp(-0.5 * z * z);
}

double fv_lnM_approx(double N, double epsilon, const RDPoint& rd) {
  return fv_lnM_approx(N, epsilon, rd.rate, rd.v_disp);
}

double koga_rate(const SourceSpec& src, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::domain_error("koga_rate: epsilon in [0,1)");
  return (1.0 - epsilon) * entropy(src);
}

BoundReport bound_report(const SourceSpec& src, double N, double epsilon, const RDPoint& rd, double B) {
  BoundReport r;
  r.N = N;
  r.epsilon = epsilon;
  r.D = rd.D;
  r.B = B;
  r.converse_lnM = converse_lnM(N, epsilon, rd, B);
  r.fv_lnM_approx = fv_lnM_approx(N, epsilon, rd);
  r.koga_rate = koga_rate(src, epsilon);
  r.theorem_rate = (1.0 - epsilon) * rd.rate;
  return r;
}

}  // namespace vfsc
