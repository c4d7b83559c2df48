#pragma once

#include "vfsc/rd_solver.hpp"
#include "vfsc/source_model.hpp"

namespace vfsc {

/// Upper tail of the standard normal, Q(t) = P(Z > t).
double q_func(double t);
/// Inverse of Q on (0, 1) by bisection to 1e-12. Throws outside (0, 1).
double q_inv(double p);

/// Converse lower bound max(0, (1 - eps) N R(D) - B sqrt(N)).
double converse_lnM(double N, double epsilon, double rate, double B);
double converse_lnM(double N, double epsilon, const RDPoint& rd, double B);

/// Default constant for the converse's sqrt(N) term: 2 sqrt(V(D)).
double default_converse_constant(const RDPoint& rd);

/// Fixed-to-variable comparator without its O(ln N) remainder:
/// (1 - eps) N R(D) - sqrt(N V / (2 pi)) exp(-Q^-1(eps)^2 / 2).
/// V is RDPoint::v_disp, the variance of the information density.
double fv_lnM_approx(double N, double epsilon, double rate, double v_disp);
double fv_lnM_approx(double N, double epsilon, const RDPoint& rd);

/// Lossless fixed-to-variable limit (1 - eps) H(V).
double koga_rate(const SourceSpec& src, double epsilon);

struct BoundReport {
  double N = 0;
  double epsilon = 0;
  double D = 0;
  double B = 0;
  double converse_lnM = 0;
  double fv_lnM_approx = 0;
  double koga_rate = 0;
  double theorem_rate = 0;  ///< (1 - eps) R(D)
};

BoundReport bound_report(const SourceSpec& src, double N, double epsilon, const RDPoint& rd, double B);

}  // namespace vfsc
