#include "vfsc/exact_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "vfsc/numeric.hpp"

namespace vfsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kNegInfIndex = std::numeric_limits<std::int64_t>::min();

struct Atom {
  double d;
  double iota;
  double prob;
};

/// Law of (d(v, C), iota(v, C)) for C ~ marginal, atoms merged and sorted.
std::vector<Atom> letter_law(Symbol v, const PsiConfig& cfg) {
  std::vector<Atom> atoms;
  for (std::size_t w = 0; w < cfg.channel.cols; ++w) {
    const double pw = cfg.channel.marginal[w];
    if (pw <= 0) continue;
    const auto sw = static_cast<Symbol>(w);
    atoms.push_back({cfg.distortion(v, sw), iota_single(v, sw, cfg.channel), pw});
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.d != b.d ? a.d < b.d : a.iota < b.iota;
  });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().d == a.d && merged.back().iota == a.iota) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

bool close(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool same_law(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i].d, b[i].d) || !close(a[i].iota, b[i].iota) || !close(a[i].prob, b[i].prob)) {
      return false;
    }
  }
  return true;
}

/// count * value with 0 * (-inf) = 0.
double scaled(double count, double value) { return count == 0 ? 0.0 : count * value; }

bool clauses_hold(double total_d, double total_iota, double n, const PsiConfig& cfg) {
  return within_budget(total_d, n, cfg.D) &&
         within_budget(total_iota, n, cfg.iota_threshold_per_symbol);
}

HitProbInterval exact_interval(double ln_q) {
  HitProbInterval out;
  out.ln_q_lo = out.ln_q_hi = std::min(0.0, ln_q);
  out.q_lo = out.q_hi = std::exp(out.ln_q_lo);
  out.closed_form = true;
  return out;
}

/// K ~ Bin(n, p_b) copies of atom b, the rest atom a.
double binomial_ln_q(std::size_t n, const Atom& a, const Atom& b, const PsiConfig& cfg) {
  const double nd = static_cast<double>(n);
  // Small n: exact integer binomial coefficients keep dyadic answers exact.
  if (n <= 50) {
    CompensatedSum q;
    double coeff = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double td = scaled(nd - kd, a.d) + scaled(kd, b.d);
      const double ti = scaled(nd - kd, a.iota) + scaled(kd, b.iota);
      if (clauses_hold(td, ti, nd, cfg)) {
        q.add(coeff * std::pow(b.prob, kd) * std::pow(a.prob, nd - kd));
      }
      coeff = coeff * (nd - kd) / (kd + 1);
    }
    return q.value() > 0 ? std::log(q.value()) : -kInf;
  }
  const double ln_a = std::log(a.prob);
  const double ln_b = std::log(b.prob);
  LogSumExp q;
  for (std::size_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double td = scaled(nd - kd, a.d) + scaled(kd, b.d);
    const double ti = scaled(nd - kd, a.iota) + scaled(kd, b.iota);
    if (clauses_hold(td, ti, nd, cfg)) {
      q.add(log_binomial(nd, kd) + scaled(kd, ln_b) + scaled(nd - kd, ln_a));
    }
  }
  return q.value();
}

enum class Rounding { kDown, kUp };

std::int64_t grid_index(double x, double step, Rounding r) {
  if (x == -kInf) return kNegInfIndex;
  const double scaled_x = x / step;
  return static_cast<std::int64_t>(r == Rounding::kDown ? std::floor(scaled_x) : std::ceil(scaled_x));
}

std::int64_t add_index(std::int64_t a, std::int64_t b) {
  return (a == kNegInfIndex || b == kNegInfIndex) ? kNegInfIndex : a + b;
}

struct GridAtom {
  std::int64_t d;
  std::int64_t iota;
  double ln_prob;
};

/// Sparse log-domain convolution over the (d, iota) grid.
double dp_ln_q(const TypeClass& type, const std::vector<std::vector<Atom>>& laws,
               const PsiConfig& cfg, double eta, double d_step, Rounding r) {
  const double n = static_cast<double>(type.length());
  using Key = std::pair<std::int64_t, std::int64_t>;
  std::map<Key, LogSumExp> states;
  states[{0, 0}].add(0.0);
  // d only grows, so a state already past the clause-A budget is dropped.
  const auto d_alive = [&](std::int64_t d_idx) {
    return within_budget(static_cast<double>(d_idx) * d_step, n, cfg.D);
  };

  for (std::size_t v = 0; v < type.counts.size(); ++v) {
    if (type.counts[v] == 0) continue;
    std::vector<GridAtom> atoms;
    for (const auto& a : laws[v]) {
      atoms.push_back({grid_index(a.d, d_step, r), grid_index(a.iota, eta, r), std::log(a.prob)});
    }
    for (unsigned rep = 0; rep < type.counts[v]; ++rep) {
      std::map<Key, LogSumExp> next;
      for (const auto& [key, acc] : states) {
        const double lp = acc.value();
        for (const auto& a : atoms) {
          const std::int64_t d_idx = key.first + a.d;
          if (!d_alive(d_idx)) continue;
          next[{d_idx, add_index(key.second, a.iota)}].add(lp + a.ln_prob);
        }
      }
      states.swap(next);
    }
  }

  LogSumExp q;
  for (const auto& [key, acc] : states) {
    const double total_d = static_cast<double>(key.first) * d_step;
    const double total_iota = key.second == kNegInfIndex ? -kInf : static_cast<double>(key.second) * eta;
    if (clauses_hold(total_d, total_iota, n, cfg)) q.add(acc.value());
  }
  return q.value();
}

double log_neg_log1m(double ln_q) {
  if (ln_q == -kInf) return -kInf;
  if (ln_q >= 0) return kInf;
  const double q = std::exp(ln_q);
  if (q < 1e-8) return ln_q + std::log1p(q / 2 + q * q / 3);
  return std::log(-std::log1p(-q));
}

}  // namespace

std::size_t TypeClass::length() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double count_types(std::size_t letters, std::size_t n) {
  if (letters == 0) return 0;
  return std::round(std::exp(log_binomial(static_cast<double>(n + letters - 1),
                                          static_cast<double>(letters - 1))));
}

void for_each_type(const SourceSpec& src, std::size_t n,
                   const std::function<void(const TypeClass&)>& fn) {
  std::vector<std::size_t> live;
  for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
    if (src.pmf()[v] > 0) live.push_back(v);
  }
  TypeClass type;
  type.counts.assign(src.alphabet_size(), 0);
  std::vector<double> ln_p(src.alphabet_size(), 0);
  for (auto v : live) ln_p[v] = std::log(src.pmf()[v]);

  const std::size_t k = live.size();
  std::vector<unsigned> parts(k, 0);
  const auto emit = [&] {
    double lp = log_multinomial(parts);
    for (std::size_t i = 0; i < k; ++i) {
      type.counts[live[i]] = parts[i];
      lp += scaled(parts[i], ln_p[live[i]]);
    }
    type.log_prob = lp;
    fn(type);
  };
  // Compositions of n into the live letters, first part varying slowest.
  const std::function<void(std::size_t, unsigned)> fill = [&](std::size_t i, unsigned remaining) {
    if (i + 1 == k) {
      parts[i] = remaining;
      emit();
      return;
    }
    for (unsigned c = 0; c <= remaining; ++c) {
      parts[i] = c;
      fill(i + 1, remaining - c);
    }
  };
  fill(0, static_cast<unsigned>(n));
}

std::vector<TypeClass> enumerate_types(const SourceSpec& src, std::size_t n) {
  std::vector<TypeClass> out;
  for_each_type(src, n, [&](const TypeClass& t) { out.push_back(t); });
  return out;
}

TypeClass type_of(const SourceSpec& src, std::span<const Symbol> v) {
  TypeClass t;
  t.counts.assign(src.alphabet_size(), 0);
  for (auto s : v) ++t.counts.at(s);
  t.log_prob = log_multinomial(t.counts);
  for (std::size_t a = 0; a < t.counts.size(); ++a) {
    t.log_prob += scaled(t.counts[a], std::log(src.pmf()[a]));
  }
  return t;
}

HitProbInterval hit_prob(const TypeClass& type, const PsiConfig& cfg, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("hit_prob: eta must be > 0");
  if (type.counts.size() != cfg.channel.rows) {
    throw std::invalid_argument("hit_prob: type alphabet does not match the channel");
  }
  const std::size_t n = type.length();
  if (n == 0) throw std::invalid_argument("hit_prob: empty type");

  std::vector<std::vector<Atom>> laws(type.counts.size());
  const std::vector<Atom>* common = nullptr;
  bool shared = true;
  for (std::size_t v = 0; v < type.counts.size(); ++v) {
    if (type.counts[v] == 0) continue;
    laws[v] = letter_law(static_cast<Symbol>(v), cfg);
    if (common == nullptr) {
      common = &laws[v];
    } else if (!same_law(*common, laws[v])) {
      shared = false;
    }
  }

  if (shared && common->size() == 1) {
    const auto& a = common->front();
    const double nd = static_cast<double>(n);
    return exact_interval(clauses_hold(scaled(nd, a.d), scaled(nd, a.iota), nd, cfg) ? 0.0 : -kInf);
  }
  if (shared && common->size() == 2) {
    return exact_interval(binomial_ln_q(n, (*common)[0], (*common)[1], cfg));
  }

  const bool integral_d = cfg.distortion.integral();
  const double d_step = integral_d ? 1.0 : eta;
  HitProbInterval out;
  out.ln_q_hi = std::min(0.0, dp_ln_q(type, laws, cfg, eta, d_step, Rounding::kDown));
  out.ln_q_lo = std::min(out.ln_q_hi, dp_ln_q(type, laws, cfg, eta, d_step, Rounding::kUp));
  out.q_hi = std::exp(out.ln_q_hi);
  out.q_lo = std::exp(out.ln_q_lo);
  return out;
}

bool hit_prob_type_independent(const SourceSpec& src, const PsiConfig& cfg) {
  const std::vector<Atom>* first = nullptr;
  std::vector<std::vector<Atom>> laws(src.alphabet_size());
  for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
    if (src.pmf()[v] <= 0) continue;
    laws[v] = letter_law(static_cast<Symbol>(v), cfg);
    if (first == nullptr) {
      first = &laws[v];
    } else if (!same_law(*first, laws[v])) {
      return false;
    }
  }
  return true;
}

double no_hit_term(double ln_q, double lnM) {
  const double exponent = std::max(0.0, lnM) + log_neg_log1m(ln_q);
  if (exponent == -kInf) return 1.0;
  return std::exp(-std::exp(exponent));
}

NoHitInterval no_hit_bound(const SourceSpec& src, const PsiConfig& cfg, std::size_t n, double lnM,
                           double eta, const NoHitOptions& opts) {
  if (std::isnan(lnM) || lnM == kInf) throw std::invalid_argument("no_hit_bound: lnM must be finite");
  if (n == 0) throw std::invalid_argument("no_hit_bound: n must be >= 1");
  if (src.alphabet_size() != cfg.channel.rows) {
    throw std::invalid_argument("no_hit_bound: source alphabet does not match the channel");
  }
  NoHitInterval out;

  if (hit_prob_type_independent(src, cfg)) {
    TypeClass rep;
    rep.counts.assign(src.alphabet_size(), 0);
    for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
      if (src.pmf()[v] > 0) {
        rep.counts[v] = static_cast<unsigned>(n);
        break;
      }
    }
    const auto q = hit_prob(rep, cfg, eta);
    out.lo = no_hit_term(q.ln_q_hi, lnM);
    out.hi = no_hit_term(q.ln_q_lo, lnM);
    out.mean_q_lo = q.q_lo;
    out.mean_q_hi = q.q_hi;
    out.ln_mean_q_lo = q.ln_q_lo;
    out.ln_mean_q_hi = q.ln_q_hi;
    out.types_evaluated = 1;
    return out;
  }

  std::size_t live = 0;
  for (double p : src.pmf()) live += p > 0 ? 1 : 0;

  if (count_types(live, n) <= static_cast<double>(opts.type_cap)) {
    CompensatedSum lo;
    CompensatedSum hi;
    LogSumExp mean_lo;
    LogSumExp mean_hi;
    for_each_type(src, n, [&](const TypeClass& t) {
      const auto q = hit_prob(t, cfg, eta);
      const double w = std::exp(t.log_prob);
      lo.add(w * no_hit_term(q.ln_q_hi, lnM));
      hi.add(w * no_hit_term(q.ln_q_lo, lnM));
      mean_lo.add(t.log_prob + q.ln_q_lo);
      mean_hi.add(t.log_prob + q.ln_q_hi);
      ++out.types_evaluated;
    });
    out.lo = std::clamp(lo.value(), 0.0, 1.0);
    out.hi = std::clamp(hi.value(), 0.0, 1.0);
    out.ln_mean_q_lo = std::min(0.0, mean_lo.value());
    out.ln_mean_q_hi = std::min(0.0, mean_hi.value());
    out.mean_q_lo = std::exp(out.ln_mean_q_lo);
    out.mean_q_hi = std::exp(out.ln_mean_q_hi);
    return out;
  }

  // Too many classes: sample types through the source itself.
  if (opts.samples < 2) throw std::invalid_argument("no_hit_bound: need >= 2 type samples");
  std::map<std::vector<unsigned>, HitProbInterval> cache;
  CompensatedSum lo;
  CompensatedSum hi;
  CompensatedSum hi_sq;
  CompensatedSum q_lo;
  CompensatedSum q_hi;
  for (std::size_t s = 0; s < opts.samples; ++s) {
    RandomStream rng(derive_seed(opts.seed, s));
    const auto t = type_of(src, sample_block(src, n, rng));
    auto it = cache.find(t.counts);
    if (it == cache.end()) it = cache.emplace(t.counts, hit_prob(t, cfg, eta)).first;
    const double a = no_hit_term(it->second.ln_q_hi, lnM);
    const double b = no_hit_term(it->second.ln_q_lo, lnM);
    lo.add(a);
    hi.add(b);
    hi_sq.add(b * b);
    q_lo.add(it->second.q_lo);
    q_hi.add(it->second.q_hi);
  }
  const double m = static_cast<double>(opts.samples);
  out.sampled = true;
  out.types_evaluated = cache.size();
  out.lo = lo.value() / m;
  out.hi = hi.value() / m;
  const double var = std::max(0.0, hi_sq.value() / m - out.hi * out.hi) * m / (m - 1);
  out.std_error = std::sqrt(var / m);
  out.mean_q_lo = q_lo.value() / m;
  out.mean_q_hi = q_hi.value() / m;
  out.ln_mean_q_lo = std::log(out.mean_q_lo);
  out.ln_mean_q_hi = std::log(out.mean_q_hi);
  return out;
}

double achievable_error_bound(const RDPoint& shifted, double nprime, double lnM,
                              double threshold_per_symbol) {
  if (!(nprime > std::exp(1.0))) throw std::domain_error("achievable_error_bound: N' must exceed e");
  const double ln_n = std::log(nprime);
  const double chebyshev = (shifted.d_var + 1.0) / ln_n + (shifted.v_disp + 1.0) / ln_n;
  return chebyshev + std::exp(-std::exp(lnM - nprime * threshold_per_symbol));
}

double achievable_error_bound(const InnerCodePlan& plan) {
  return achievable_error_bound(plan.shifted, plan.nprime, plan.lnM,
                                plan.psi.iota_threshold_per_symbol);
}

}  // namespace vfsc
