#pragma once

#include <span>
#include <vector>

#include "vfsc/rd_solver.hpp"
#include "vfsc/source_model.hpp"

namespace vfsc {

/// sqrt(ln N' / N'). Requires N' > 1.
double gamma_of(double nprime);

/// ln(P(w|v) / P(w)); -inf when P(w|v) = 0. Throws if P(w) = 0.
double iota_single(Symbol v, Symbol w, const TestChannel& channel);

/// Sum of single-letter information densities.
double iota_multi(std::span<const Symbol> v, std::span<const Symbol> w, const TestChannel& channel);

/// Parameters of the joint distortion / information-density indicator.
struct PsiConfig {
  double D = 0;
  double iota_threshold_per_symbol = 0;
  TestChannel channel;
  DistortionSpec distortion = DistortionSpec::hamming(2);
};

/// 1 iff sum d <= n D (clause A) and sum iota <= n * threshold (clause B).
bool psi(std::span<const Symbol> v, std::span<const Symbol> w, const PsiConfig& cfg);

/// Table-driven Psi for hot loops (encoder, Monte Carlo). Same semantics as psi().
class PsiEvaluator {
 public:
  explicit PsiEvaluator(const PsiConfig& cfg);

  bool operator()(std::span<const Symbol> v, std::span<const Symbol> w) const;
  const PsiConfig& config() const { return cfg_; }
  double distortion(Symbol v, Symbol w) const { return d_[v * cols_ + w]; }
  double iota(Symbol v, Symbol w) const { return iota_[v * cols_ + w]; }

 private:
  PsiConfig cfg_;
  std::size_t cols_;
  std::vector<double> d_;
  std::vector<double> iota_;
};

/// Slack used in the inner random code.
///  - shift: the test channel is solved at D - shift;
///  - clause_b_slack: added to R(D - shift) to form the clause-B threshold;
///  - loglog_term: whether ln ln N' is added to ln M'.
/// The asymptotic construction uses shift = clause_b_slack = gamma_of(N')
/// with the ln ln N' term; an override pair drops that term.
struct SlackPolicy {
  double shift = 0;
  double clause_b_slack = 0;
  bool loglog_term = true;
  bool overridden = false;

  static SlackPolicy asymptotic(double nprime);
  static SlackPolicy override_pair(double shift, double clause_b_slack);
};

/// ln M' = N' (R(D - shift) + clause_b_slack) [+ ln ln N'].
double choose_lnM(double nprime, double shifted_rate, const SlackPolicy& slack);

/// Everything the inner code at block length N' needs.
struct InnerCodePlan {
  double nprime = 0;
  SlackPolicy slack;
  RDPoint shifted;  ///< R(D - shift) and its test channel
  PsiConfig psi;
  double lnM = 0;
};

/// Solves the shifted test channel and forms the Psi configuration and ln M'.
/// Throws std::domain_error("slack exceeds distortion budget") when
/// D - shift <= D_floor.
InnerCodePlan plan_inner_code(const SourceSpec& src, const DistortionSpec& dist, double D,
                              double nprime, const SlackPolicy& slack);

}  // namespace vfsc
