#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vfsc/source_model.hpp"
#include "vfsc/typicality.hpp"

namespace vfsc {

/// Occupation counts of a source block and ln P(V^n lies in the class).
struct TypeClass {
  std::vector<unsigned> counts;
  double log_prob = 0;

  std::size_t length() const;
};

/// Number of type classes of length n over an alphabet of k letters with
/// positive mass, C(n + k - 1, k - 1), as a double.
double count_types(std::size_t letters, std::size_t n);

/// Calls `fn` for every type class of length n whose letters all carry mass.
void for_each_type(const SourceSpec& src, std::size_t n,
                   const std::function<void(const TypeClass&)>& fn);
std::vector<TypeClass> enumerate_types(const SourceSpec& src, std::size_t n);

TypeClass type_of(const SourceSpec& src, std::span<const Symbol> v);

/// Bracket on q = P(Psi(v^n, C) = 1), C i.i.d. from the channel marginal, for
/// any v^n of the given type. Log-domain copies survive underflow.
struct HitProbInterval {
  double q_lo = 0;
  double q_hi = 0;
  double ln_q_lo = 0;
  double ln_q_hi = 0;
  bool closed_form = false;
};

inline constexpr double kDefaultEta = 1e-4;

/// Per-letter convolution of the (d, iota) law. iota is floored (q_hi) or
/// ceiled (q_lo) to multiples of eta; d likewise unless every distortion
/// entry is an integer. When all letters present in the type share one
/// two-point (d, iota) law, the count of the second atom is binomial and the
/// result is exact (q_lo == q_hi).
HitProbInterval hit_prob(const TypeClass& type, const PsiConfig& cfg, double eta = kDefaultEta);

/// True when the per-letter (d, iota) law is the same for every letter with
/// positive mass, i.e. q does not depend on the type.
bool hit_prob_type_independent(const SourceSpec& src, const PsiConfig& cfg);

struct NoHitOptions {
  std::size_t type_cap = 5'000'000;
  std::size_t samples = 20'000;  ///< used only above type_cap
  std::uint64_t seed = 0;
};

/// Bracket on sum_types P(type) (1 - q)^M' with M' = exp(lnM) (clamped to
/// M' >= 1), plus the codebook-averaged hit probability E[q].
struct NoHitInterval {
  double lo = 0;
  double hi = 0;
  double mean_q_lo = 0;
  double mean_q_hi = 0;
  double ln_mean_q_lo = 0;
  double ln_mean_q_hi = 0;
  bool sampled = false;
  double std_error = 0;  ///< of `hi` when sampled; 0 otherwise
  std::size_t types_evaluated = 0;
};

NoHitInterval no_hit_bound(const SourceSpec& src, const PsiConfig& cfg, std::size_t n, double lnM,
                           double eta = kDefaultEta, const NoHitOptions& opts = {});

/// (1 - q)^M' for one type, evaluated as exp(-exp(lnM + ln(-ln(1 - q)))).
double no_hit_term(double ln_q, double lnM);

/// Chebyshev bound on the inner-code error at n = N':
/// (Vt + 1)/ln N' + (V + 1)/ln N' + exp(-exp(lnM - N' * threshold)).
/// `shifted` carries V and Vt of the test channel actually used.
double achievable_error_bound(const RDPoint& shifted, double nprime, double lnM,
                              double threshold_per_symbol);
double achievable_error_bound(const InnerCodePlan& plan);

}  // namespace vfsc
