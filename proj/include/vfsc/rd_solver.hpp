#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vfsc/source_model.hpp"

namespace vfsc {

/// Conditional P_{V^|V} (row-major, |V| x |V^|) with its output marginal P_{V^}.
struct TestChannel {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> cond;
  std::vector<double> marginal;

  double operator()(Symbol v, Symbol w) const { return cond[v * cols + w]; }

  /// Builds a channel from a conditional grid, computing the marginal.
  static TestChannel from_conditional(const SourceSpec& src, std::size_t cols,
                                      std::vector<double> cond);
  /// Product channel: every row equals `marginal`.
  static TestChannel product(const SourceSpec& src, std::vector<double> marginal);
};

/// One point of the R(D) curve at a fixed Lagrange slope.
struct SlopePoint {
  double slope = 0;
  double rate = 0;
  double distortion = 0;
  TestChannel channel;
  int iterations = 0;
};

struct RDPoint {
  double D = 0;
  double rate = 0;
  TestChannel channel;
  double v_disp = 0;  ///< Var[iota(V; V^)]
  double d_var = 0;   ///< Var[d(V, V^)]
  double achieved_distortion = 0;
  double slope = 0;
};

struct DistortionExtremes {
  double floor = 0;  ///< E_V[min_w d(V, w)]
  double max = 0;    ///< min_w E_V[d(V, w)]
};

struct BlahutArimotoOptions {
  double tol = 1e-12;
  int max_iter = 1'000'000;
};

/// Raised when Blahut-Arimoto exhausts its iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, SlopePoint last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const SlopePoint& last_iterate() const { return last_; }

 private:
  SlopePoint last_;
};

/// Blahut-Arimoto alternating minimisation at slope s <= 0 (nats).
/// `warm_marginal`, when non-empty, seeds the output marginal.
SlopePoint ba_fixed_slope(const SourceSpec& src, const DistortionSpec& dist, double s,
                          const BlahutArimotoOptions& opts = {},
                          const std::vector<double>& warm_marginal = {});

/// R(D) with its optimal test channel and the second moments of iota and d.
/// The achieved distortion lies in [D - tol, D]. For D >= D_max the result is
/// the zero-rate product channel; D <= D_floor throws std::domain_error.
RDPoint rd_at(const SourceSpec& src, const DistortionSpec& dist, double D, double tol = 1e-10);

DistortionExtremes d_extremes(const SourceSpec& src, const DistortionSpec& dist);

/// Closed-form Gaussian R(D) under squared error, clamped at zero.
double gaussian_rd(double variance, double D);

/// Moments of iota and d under P_V x channel. Letters with zero marginal are
/// pruned (they carry no joint mass).
struct ChannelMoments {
  double mutual_information = 0;
  double iota_variance = 0;
  double distortion_mean = 0;
  double distortion_variance = 0;
};
ChannelMoments channel_moments(const SourceSpec& src, const DistortionSpec& dist,
                               const TestChannel& channel);

}  // namespace vfsc
