#include "vfsc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace vfsc {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

void LogSumExp::add(double log_term) {
  if (log_term == -std::numeric_limits<double>::infinity()) return;
  if (log_term > max_) {
    if (max_ != -std::numeric_limits<double>::infinity()) {
      const double rescale = std::exp(max_ - log_term);
      CompensatedSum rescaled;
      rescaled.add(scaled_.value() * rescale);
      scaled_ = rescaled;
    }
    max_ = log_term;
  }
  scaled_.add(std::exp(log_term - max_));
}

double LogSumExp::value() const {
  if (max_ == -std::numeric_limits<double>::infinity()) return max_;
  return max_ + std::log(scaled_.value());
}

double log_sum_exp(std::span<const double> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (top == -std::numeric_limits<double>::infinity()) return top;
  CompensatedSum s;
  for (double t : terms) s.add(std::exp(t - top));
  return top + std::log(s.value());
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double log_multinomial(std::span<const unsigned> counts) {
  double n = 0;
  double out = 0;
  for (unsigned c : counts) {
    n += c;
    out -= std::lgamma(static_cast<double>(c) + 1);
  }
  return out + std::lgamma(n + 1);
}

bool within_budget(double total, double count, double per_symbol) {
  if (per_symbol == std::numeric_limits<double>::infinity()) return true;
  if (total == -std::numeric_limits<double>::infinity()) return true;
  if (per_symbol == -std::numeric_limits<double>::infinity()) return false;
  const double limit = count * per_symbol;
  const double slack = 1e-12 * std::max(1.0, count) * std::max(1.0, std::abs(per_symbol));
  return total <= limit + slack;
}

BinomialEstimate binomial_estimate(std::size_t successes, std::size_t trials,
                                   double confidence) {
  if (trials == 0) throw std::invalid_argument("binomial_estimate: zero trials");
  if (successes > trials) throw std::invalid_argument("binomial_estimate: successes > trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("binomial_estimate: confidence must lie in (0,1)");
  }
  BinomialEstimate est;
  est.successes = successes;
  est.trials = trials;
  est.confidence = confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  est.rate = k / n;
  const double tail = 0.5 * (1.0 - confidence);
  est.lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1, tail);
  est.hi = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1, n - k, 1.0 - tail);
  return est;
}

}  // namespace vfsc
