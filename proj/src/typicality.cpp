#include "vfsc/typicality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vfsc/numeric.hpp"

namespace vfsc {

double gamma_of(double nprime) {
  if (!(nprime > 1.0)) throw std::domain_error("gamma_of: N' must exceed 1");
  return std::sqrt(std::log(nprime) / nprime);
}

double iota_single(Symbol v, Symbol w, const TestChannel& channel) {
  const double marginal = channel.marginal.at(w);
  if (!(marginal > 0.0)) throw std::domain_error("unreachable reproduction letter");
  const double c = channel(v, w);
  if (c <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(c / marginal);
}

double iota_multi(std::span<const Symbol> v, std::span<const Symbol> w, const TestChannel& channel) {
  if (v.size() != w.size()) throw std::invalid_argument("iota_multi: length mismatch");
  double sum = 0;
  for (std::size_t k = 0; k < v.size(); ++k) sum += iota_single(v[k], w[k], channel);
  return sum;
}

bool psi(std::span<const Symbol> v, std::span<const Symbol> w, const PsiConfig& cfg) {
  const double n = static_cast<double>(v.size());
  if (!within_budget(total_distortion(v, w, cfg.distortion), n, cfg.D)) return false;
  return within_budget(iota_multi(v, w, cfg.channel), n, cfg.iota_threshold_per_symbol);
}

PsiEvaluator::PsiEvaluator(const PsiConfig& cfg) : cfg_(cfg), cols_(cfg.channel.cols) {
  if (cfg.distortion.source_size() != cfg.channel.rows ||
      cfg.distortion.reproduction_size() != cfg.channel.cols) {
    throw std::invalid_argument("Psi: channel and distortion shapes differ");
  }
  const std::size_t rows = cfg.channel.rows;
  d_.resize(rows * cols_);
  iota_.resize(rows * cols_);
  for (std::size_t v = 0; v < rows; ++v) {
    for (std::size_t w = 0; w < cols_; ++w) {
      const auto sv = static_cast<Symbol>(v);
      const auto sw = static_cast<Symbol>(w);
      d_[v * cols_ + w] = cfg.distortion(sv, sw);
      // Letters the codebook can never emit get +inf so they always fail clause B.
      iota_[v * cols_ + w] = cfg.channel.marginal[w] > 0 ? iota_single(sv, sw, cfg.channel)
                                                         : std::numeric_limits<double>::infinity();
    }
  }
}

bool PsiEvaluator::operator()(std::span<const Symbol> v, std::span<const Symbol> w) const {
  if (v.size() != w.size()) throw std::invalid_argument("Psi: length mismatch");
  const double n = static_cast<double>(v.size());
  double d = 0;
  double iota = 0;
  const double d_limit = n * cfg_.D;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t cell = v[k] * cols_ + w[k];
    d += d_[cell];
    // d is non-decreasing, so the clause-A verdict is already final.
    if (d > d_limit && !within_budget(d, n, cfg_.D)) return false;
    iota += iota_[cell];
  }
  return within_budget(d, n, cfg_.D) && within_budget(iota, n, cfg_.iota_threshold_per_symbol);
}

SlackPolicy SlackPolicy::asymptotic(double nprime) {
  const double g = gamma_of(nprime);
  return SlackPolicy{g, g, true, false};
}

SlackPolicy SlackPolicy::override_pair(double shift, double clause_b_slack) {
  if (!(shift >= 0.0) || !std::isfinite(clause_b_slack)) {
    throw std::invalid_argument("slack override must be a finite pair with shift >= 0");
  }
  return SlackPolicy{shift, clause_b_slack, false, true};
}

double choose_lnM(double nprime, double shifted_rate, const SlackPolicy& slack) {
  double lnM = nprime * (shifted_rate + slack.clause_b_slack);
  if (slack.loglog_term) {
    if (!(nprime > std::exp(1.0))) throw std::domain_error("choose_lnM: N' must exceed e");
    lnM += std::log(std::log(nprime));
  }
  return lnM;
}

InnerCodePlan plan_inner_code(const SourceSpec& src, const DistortionSpec& dist, double D,
                              double nprime, const SlackPolicy& slack) {
  const auto ext = d_extremes(src, dist);
  const double shifted_D = D - slack.shift;
  if (!(shifted_D > ext.floor)) throw std::domain_error("slack exceeds distortion budget");
  InnerCodePlan plan;
  plan.nprime = nprime;
  plan.slack = slack;
  plan.shifted = rd_at(src, dist, shifted_D);
  plan.psi.D = D;
  plan.psi.iota_threshold_per_symbol = plan.shifted.rate + slack.clause_b_slack;
  plan.psi.channel = plan.shifted.channel;
  plan.psi.distortion = dist;
  plan.lnM = choose_lnM(nprime, plan.shifted.rate, slack);
  return plan;
}

}  // namespace vfsc
