#pragma once

#include <cstddef>
#include <span>

namespace vfsc {

/// Neumaier-compensated accumulator. Results do not depend on the
/// magnitude ordering of the inputs beyond ~1 ulp of the total.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

/// Accumulates log-domain terms: value() returns ln(sum exp(term)).
class LogSumExp {
 public:
  void add(double log_term);
  double value() const;

 private:
  double max_ = -1.0 / 0.0;
  CompensatedSum scaled_;
};

double log_sum_exp(std::span<const double> terms);

/// ln C(n, k).
double log_binomial(double n, double k);

/// ln of the multinomial coefficient n! / prod(counts!).
double log_multinomial(std::span<const unsigned> counts);

/// Tolerant comparison `total <= count * per_symbol` used by every clause
/// test. Absorbs accumulated rounding from summing `count` per-letter terms.
bool within_budget(double total, double count, double per_symbol);

/// Binomial proportion with a Clopper-Pearson interval.
struct BinomialEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double confidence = 0.99;

  double radius() const { return 0.5 * (hi - lo); }
};

BinomialEstimate binomial_estimate(std::size_t successes, std::size_t trials,
                                   double confidence = 0.99);

}  // namespace vfsc
