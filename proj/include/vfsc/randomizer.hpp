#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vfsc/numeric.hpp"
#include "vfsc/random_code.hpp"
#include "vfsc/source_model.hpp"

namespace vfsc {

/// Scalars of the randomised stopping-time wrapper.
struct WrapperParams {
  double N = 0;
  double epsilon = 0;
  double delta = 0;
  std::size_t nprime = 0;  ///< round((1 - epsilon) N)
  double gamma = 0;        ///< long-branch stretch factor, > 1
  double alpha = 0;
  double beta = 0;
  double f_delta = 0;      ///< (gamma beta + 1 - beta)(1 - epsilon) - 1
  std::size_t L_baseline = 0;  ///< floor(ln N')

  /// ceil(gamma N'), the stopping time of the H1 branch.
  std::size_t long_branch() const;
};

WrapperParams derive_params(double N, double epsilon, double delta);

/// A set H1 of length-L source blocks with P(V^L in H1) = p in (alpha, beta].
class CoinSet {
 public:
  std::size_t block_length() const { return L_; }
  double mass() const { return p_; }
  bool contains(std::span<const Symbol> block) const;

  /// Test double: every block (heads) or no block (!heads) is in H1.
  static CoinSet constant(bool heads);

 private:
  friend CoinSet build_coin_set_with_length(const SourceSpec&, double, double, std::size_t);

  enum class Rule { kConstant, kIndexThreshold, kTypeRank };
  Rule rule_ = Rule::kConstant;
  std::size_t L_ = 1;
  double p_ = 0;
  bool heads_ = false;
  std::size_t base_ = 2;
  std::uint64_t index_limit_ = 0;
  /// Type-class counts -> number of its members (in lexicographic rank order)
  /// that belong to H1.
  std::map<std::vector<unsigned>, std::uint64_t> class_limits_;
};

/// Greedy construction at L = max(L_baseline, ceil(ln(beta - alpha) / ln p_max), 1).
/// Every length-L atom then has mass <= beta - alpha, so adding atoms in
/// decreasing-probability order until the total exceeds alpha lands in
/// (alpha, beta]. Uniform sources use the lexicographic index-threshold rule.
/// Throws std::domain_error for a source with a probability-one letter.
CoinSet build_coin_set(const SourceSpec& src, const WrapperParams& params);
CoinSet build_coin_set(const SourceSpec& src, double alpha, double beta, std::size_t L_baseline);

/// Greedy construction at a fixed block length L.
CoinSet build_coin_set_with_length(const SourceSpec& src, double alpha, double beta, std::size_t L);

/// Single-symbol partition of the alphabet (L = 1). Applicable when every
/// letter has mass <= beta - alpha, e.g. uniform sources over large alphabets.
CoinSet build_single_symbol_coin_set(const SourceSpec& src, double alpha, double beta);

/// Fixed-length code used inside the wrapper.
class InnerCode {
 public:
  virtual ~InnerCode() = default;
  virtual std::size_t block_length() const = 0;
  virtual double ln_codebook_size() const = 0;
  virtual TrialRecord code(std::span<const Symbol> block) const = 0;
  virtual SequenceSample reconstruct(std::size_t index) const = 0;
  virtual const DistortionSpec& distortion() const = 0;
};

class RandomInnerCode final : public InnerCode {
 public:
  RandomInnerCode(Codebook codebook, PsiEvaluator psi, double lnM)
      : codebook_(std::move(codebook)), psi_(std::move(psi)), lnM_(lnM) {}

  std::size_t block_length() const override { return codebook_.block_length(); }
  double ln_codebook_size() const override { return lnM_; }
  TrialRecord code(std::span<const Symbol> block) const override;
  SequenceSample reconstruct(std::size_t index) const override;
  const DistortionSpec& distortion() const override { return psi_.config().distortion; }

 private:
  Codebook codebook_;
  PsiEvaluator psi_;
  double lnM_;
};

struct WrappedTrial {
  TrialRecord record;
  bool h1 = false;
  std::size_t coin_symbols = 0;
};

/// Reads L coin symbols, then N' payload symbols. H1: tau = ceil(gamma N'),
/// index 1, and the trial is counted as an excess-distortion event. H0:
/// tau = N' and the inner code runs as is.
WrappedTrial wrapped_trial(const SourceSpec& src, const WrapperParams& params, const CoinSet& coin,
                           const InnerCode& inner, RandomStream& rng);

struct WrappedStats {
  std::size_t trials = 0;
  std::size_t L = 0;
  double p = 0;
  BinomialEstimate h1;
  BinomialEstimate excess;
  BinomialEstimate inner_excess;  ///< among H0 trials (trials = 0 if none)
  double mean_tau = 0;
  double tau_lo = 0;
  double tau_hi = 0;
  double lnM = 0;
  double rate = 0;  ///< lnM / N
};

WrappedStats wrapped_stats(const SourceSpec& src, const WrapperParams& params, const CoinSet& coin,
                           const InnerCode& inner, std::size_t trials, std::uint64_t seed,
                           double confidence = 0.99);

}  // namespace vfsc
