#include "vfsc/randomizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vfsc/exact_analysis.hpp"

namespace vfsc {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::size_t kMaxCoinClasses = 5'000'000;

u128 binomial_u128(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    const unsigned factor = n - k + i;
    if (r > std::numeric_limits<u128>::max() / factor) {
      throw std::overflow_error("coin set: class size overflows");
    }
    r = r * factor / i;
  }
  return r;
}

/// Number of distinct arrangements of a multiset with these counts.
u128 arrangements(std::span<const unsigned> counts) {
  u128 total = 1;
  unsigned running = 0;
  for (unsigned c : counts) {
    running += c;
    const u128 b = binomial_u128(running, c);
    if (b != 0 && total > std::numeric_limits<u128>::max() / b) {
      throw std::overflow_error("coin set: class size overflows");
    }
    total *= b;
  }
  return total;
}

/// Lexicographic rank of `block` among the arrangements of its own multiset.
u128 rank_in_class(std::span<const Symbol> block, std::vector<unsigned> counts) {
  u128 rank = 0;
  for (Symbol s : block) {
    for (std::size_t c = 0; c < s; ++c) {
      if (counts[c] == 0) continue;
      --counts[c];
      rank += arrangements(counts);
      ++counts[c];
    }
    --counts[s];
  }
  return rank;
}

std::size_t required_length(const SourceSpec& src, double alpha, double beta, std::size_t baseline) {
  const double p_max = src.max_prob();
  if (p_max >= 1.0) throw std::domain_error("degenerate source cannot randomize");
  if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0)) {
    throw std::invalid_argument("coin set: need 0 <= alpha < beta <= 1");
  }
  const double granular = std::ceil(std::log(beta - alpha) / std::log(p_max));
  return std::max<std::size_t>({baseline, static_cast<std::size_t>(std::max(0.0, granular)), 1});
}

}  // namespace

std::size_t WrapperParams::long_branch() const {
  return static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(nprime)));
}

WrapperParams derive_params(double N, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  WrapperParams p;
  p.N = N;
  p.epsilon = epsilon;
  p.delta = delta;
  const double nprime = std::round((1.0 - epsilon) * N);
  if (!(nprime > std::exp(1.0))) throw std::domain_error("N too small: need (1 - epsilon) N > e");
  p.nprime = static_cast<std::size_t>(nprime);
  p.gamma = 1.0 + (epsilon + delta) / ((1.0 - epsilon) * epsilon);
  p.alpha = epsilon * epsilon / (epsilon + delta);
  p.beta = 0.5 * (epsilon + p.alpha);
  p.f_delta = (p.gamma * p.beta + 1.0 - p.beta) * (1.0 - epsilon) - 1.0;
  p.L_baseline = static_cast<std::size_t>(std::floor(std::log(nprime)));
  return p;
}

bool CoinSet::contains(std::span<const Symbol> block) const {
  if (block.size() != L_) throw std::invalid_argument("coin block has wrong length");
  switch (rule_) {
    case Rule::kConstant:
      return heads_;
    case Rule::kIndexThreshold: {
      std::uint64_t index = 0;
      for (Symbol s : block) index = index * base_ + s;
      return index < index_limit_;
    }
    case Rule::kTypeRank: {
      std::vector<unsigned> counts(base_, 0);
      for (Symbol s : block) ++counts.at(s);
      const auto it = class_limits_.find(counts);
      if (it == class_limits_.end()) return false;
      if (it->second == std::numeric_limits<std::uint64_t>::max()) return true;
      return rank_in_class(block, counts) < it->second;
    }
  }
  return false;
}

CoinSet CoinSet::constant(bool heads) {
  CoinSet c;
  c.rule_ = Rule::kConstant;
  c.heads_ = heads;
  c.p_ = heads ? 1.0 : 0.0;
  return c;
}

CoinSet build_coin_set(const SourceSpec& src, const WrapperParams& params) {
  return build_coin_set(src, params.alpha, params.beta, params.L_baseline);
}

CoinSet build_coin_set(const SourceSpec& src, double alpha, double beta, std::size_t L_baseline) {
  return build_coin_set_with_length(src, alpha, beta, required_length(src, alpha, beta, L_baseline));
}

CoinSet build_coin_set_with_length(const SourceSpec& src, double alpha, double beta, std::size_t L) {
  if (src.max_prob() >= 1.0) throw std::domain_error("degenerate source cannot randomize");
  if (std::pow(src.max_prob(), static_cast<double>(L)) > beta - alpha) {
    throw std::domain_error("coin set: block length too short for (alpha, beta]");
  }
  CoinSet coin;
  coin.L_ = L;
  coin.base_ = src.alphabet_size();

  if (src.is_uniform()) {
    const double atoms = std::pow(static_cast<double>(coin.base_), static_cast<double>(L));
    if (atoms > 0x1.0p62) throw std::overflow_error("coin set: alphabet^L too large");
    const double atom = 1.0 / atoms;
    coin.rule_ = CoinSet::Rule::kIndexThreshold;
    coin.index_limit_ = static_cast<std::uint64_t>(std::floor(alpha / atom)) + 1;
    coin.p_ = static_cast<double>(coin.index_limit_) * atom;
  } else {
    std::size_t live = 0;
    for (double p : src.pmf()) live += p > 0 ? 1 : 0;
    if (count_types(live, L) > static_cast<double>(kMaxCoinClasses)) {
      throw std::overflow_error("coin set: too many type classes");
    }
    struct Class {
      std::vector<unsigned> counts;
      double ln_atom;
      double mass;
    };
    std::vector<Class> classes;
    for_each_type(src, L, [&](const TypeClass& t) {
      double ln_atom = 0;
      for (std::size_t v = 0; v < t.counts.size(); ++v) {
        if (t.counts[v] > 0) ln_atom += t.counts[v] * std::log(src.pmf()[v]);
      }
      classes.push_back({t.counts, ln_atom, std::exp(t.log_prob)});
    });
    std::sort(classes.begin(), classes.end(), [](const Class& a, const Class& b) {
      return a.ln_atom != b.ln_atom ? a.ln_atom > b.ln_atom : a.counts < b.counts;
    });
    CompensatedSum total;
    coin.rule_ = CoinSet::Rule::kTypeRank;
    for (const auto& c : classes) {
      if (total.value() + c.mass <= alpha) {
        total.add(c.mass);
        coin.class_limits_[c.counts] = std::numeric_limits<std::uint64_t>::max();
        continue;
      }
      const double atom = std::exp(c.ln_atom);
      const auto take = static_cast<std::uint64_t>(std::floor((alpha - total.value()) / atom)) + 1;
      coin.class_limits_[c.counts] = take;
      total.add(static_cast<double>(take) * atom);
      break;
    }
    coin.p_ = total.value();
  }
  if (!(coin.p_ > alpha && coin.p_ <= beta + 1e-15)) {
    throw std::logic_error("coin set: mass fell outside (alpha, beta]");
  }
  return coin;
}

CoinSet build_single_symbol_coin_set(const SourceSpec& src, double alpha, double beta) {
  return build_coin_set_with_length(src, alpha, beta, 1);
}

TrialRecord RandomInnerCode::code(std::span<const Symbol> block) const {
  return code_block(block, codebook_, psi_);
}

SequenceSample RandomInnerCode::reconstruct(std::size_t index) const {
  return decode(index, codebook_, codebook_.block_length());
}

WrappedTrial wrapped_trial(const SourceSpec& src, const WrapperParams& params, const CoinSet& coin,
                           const InnerCode& inner, RandomStream& rng) {
  if (inner.block_length() != params.nprime) {
    throw std::invalid_argument("wrapped_trial: inner code block length must equal N'");
  }
  WrappedTrial out;
  out.coin_symbols = coin.block_length();
  const auto coin_block = sample_block(src, coin.block_length(), rng);
  const auto payload = sample_block(src, params.nprime, rng);
  out.h1 = coin.contains(coin_block);
  if (!out.h1) {
    out.record = inner.code(payload);
    return out;
  }
  out.record.tau = params.long_branch();
  out.record.index = 1;
  out.record.distortion = block_distortion(payload, inner.reconstruct(1), inner.distortion());
  out.record.psi_hit = false;
  out.record.excess = true;
  return out;
}

WrappedStats wrapped_stats(const SourceSpec& src, const WrapperParams& params, const CoinSet& coin,
                           const InnerCode& inner, std::size_t trials, std::uint64_t seed,
                           double confidence) {
  if (trials == 0) throw std::invalid_argument("wrapped_stats: T must be >= 1");
  std::size_t h1 = 0;
  std::size_t excess = 0;
  std::size_t inner_excess = 0;
  CompensatedSum tau;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng(derive_seed(seed, t));
    const auto w = wrapped_trial(src, params, coin, inner, rng);
    h1 += w.h1 ? 1 : 0;
    excess += w.record.excess ? 1 : 0;
    if (!w.h1) inner_excess += w.record.excess ? 1 : 0;
    tau.add(static_cast<double>(w.record.tau));
  }
  WrappedStats s;
  s.trials = trials;
  s.L = coin.block_length();
  s.p = coin.mass();
  s.h1 = binomial_estimate(h1, trials, confidence);
  s.excess = binomial_estimate(excess, trials, confidence);
  if (trials > h1) s.inner_excess = binomial_estimate(inner_excess, trials - h1, confidence);
  s.mean_tau = tau.value() / static_cast<double>(trials);
  // tau takes only the values N' and ceil(gamma N'), so its mean is an
  // affine image of the H1 frequency.
  const double short_tau = static_cast<double>(params.nprime);
  const double spread = static_cast<double>(params.long_branch()) - short_tau;
  s.tau_lo = short_tau + spread * s.h1.lo;
  s.tau_hi = short_tau + spread * s.h1.hi;
  s.lnM = inner.ln_codebook_size();
  s.rate = s.lnM / params.N;
  return s;
}

}  // namespace vfsc
