#include "vfsc/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vfsc/numeric.hpp"

namespace vfsc {

namespace {

void check_shapes(const SourceSpec& src, const DistortionSpec& dist) {
  if (src.alphabet_size() != dist.source_size()) {
    throw std::invalid_argument("distortion matrix rows do not match the source alphabet");
  }
}

std::vector<double> expected_distortion_per_column(const SourceSpec& src,
                                                   const DistortionSpec& dist) {
  std::vector<double> col(dist.reproduction_size());
  for (std::size_t w = 0; w < col.size(); ++w) {
    CompensatedSum s;
    for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
      s.add(src.pmf()[v] * dist(static_cast<Symbol>(v), static_cast<Symbol>(w)));
    }
    col[w] = s.value();
  }
  return col;
}

TestChannel zero_rate_channel(const SourceSpec& src, const DistortionSpec& dist) {
  const auto col = expected_distortion_per_column(src, dist);
  const auto best = static_cast<std::size_t>(std::min_element(col.begin(), col.end()) - col.begin());
  std::vector<double> marginal(dist.reproduction_size(), 0.0);
  marginal[best] = 1.0;
  return TestChannel::product(src, std::move(marginal));
}

RDPoint make_point(const SourceSpec& src, const DistortionSpec& dist, double D,
                   TestChannel channel, double slope) {
  const auto m = channel_moments(src, dist, channel);
  RDPoint pt;
  pt.D = D;
  pt.rate = std::max(0.0, m.mutual_information);
  pt.channel = std::move(channel);
  pt.v_disp = m.iota_variance;
  pt.d_var = m.distortion_variance;
  pt.achieved_distortion = m.distortion_mean;
  pt.slope = slope;
  return pt;
}

}  // namespace

TestChannel TestChannel::from_conditional(const SourceSpec& src, std::size_t cols,
                                          std::vector<double> cond) {
  TestChannel ch;
  ch.rows = src.alphabet_size();
  ch.cols = cols;
  if (cond.size() != ch.rows * cols) throw std::invalid_argument("channel grid has wrong size");
  ch.cond = std::move(cond);
  ch.marginal.assign(cols, 0.0);
  for (std::size_t w = 0; w < cols; ++w) {
    CompensatedSum s;
    for (std::size_t v = 0; v < ch.rows; ++v) s.add(src.pmf()[v] * ch.cond[v * cols + w]);
    ch.marginal[w] = s.value();
  }
  return ch;
}

TestChannel TestChannel::product(const SourceSpec& src, std::vector<double> marginal) {
  TestChannel ch;
  ch.rows = src.alphabet_size();
  ch.cols = marginal.size();
  ch.cond.reserve(ch.rows * ch.cols);
  for (std::size_t v = 0; v < ch.rows; ++v) ch.cond.insert(ch.cond.end(), marginal.begin(), marginal.end());
  ch.marginal = std::move(marginal);
  return ch;
}

SlopePoint ba_fixed_slope(const SourceSpec& src, const DistortionSpec& dist, double s,
                          const BlahutArimotoOptions& opts,
                          const std::vector<double>& warm_marginal) {
  check_shapes(src, dist);
  if (!(s <= 0.0)) throw std::invalid_argument("ba_fixed_slope: slope must be <= 0");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("ba_fixed_slope: tol must be > 0");

  const std::size_t nv = src.alphabet_size();
  const std::size_t nw = dist.reproduction_size();
  const auto pmf = src.pmf();

  if (s == 0.0) {
    SlopePoint pt;
    pt.channel = zero_rate_channel(src, dist);
    pt.distortion = d_extremes(src, dist).max;
    return pt;
  }

  std::vector<double> q = warm_marginal.size() == nw
                              ? warm_marginal
                              : std::vector<double>(nw, 1.0 / static_cast<double>(nw));
  // Row-shifted kernel exp(s (d(v,w) - min_w d(v,w))) avoids underflow at steep slopes.
  std::vector<double> kernel(nv * nw);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto row = dist.row(static_cast<Symbol>(v));
    const double dmin = *std::min_element(row.begin(), row.end());
    for (std::size_t w = 0; w < nw; ++w) kernel[v * nw + w] = std::exp(s * (row[w] - dmin));
  }

  std::vector<double> cond(nv * nw);
  std::vector<double> q_next(nw);
  std::vector<double> z(nv);
  double prev_rate = std::numeric_limits<double>::infinity();
  SlopePoint pt;
  pt.slope = s;

  for (int it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t v = 0; v < nv; ++v) {
      double zv = 0;
      for (std::size_t w = 0; w < nw; ++w) {
        cond[v * nw + w] = q[w] * kernel[v * nw + w];
        zv += cond[v * nw + w];
      }
      z[v] = zv;
      for (std::size_t w = 0; w < nw; ++w) cond[v * nw + w] /= zv;
    }
    // KKT residual: max_w ln sum_v p(v) k(v,w) / z(v) is 0 at the fixed point.
    double kkt = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < nw; ++w) {
      CompensatedSum c;
      CompensatedSum m;
      for (std::size_t v = 0; v < nv; ++v) {
        if (pmf[v] == 0) continue;
        c.add(pmf[v] * kernel[v * nw + w] / z[v]);
        m.add(pmf[v] * cond[v * nw + w]);
      }
      kkt = std::max(kkt, std::log(c.value()));
      q_next[w] = m.value();
    }
    CompensatedSum rate;
    CompensatedSum distortion;
    for (std::size_t v = 0; v < nv; ++v) {
      if (pmf[v] == 0) continue;
      for (std::size_t w = 0; w < nw; ++w) {
        const double c = cond[v * nw + w];
        if (c <= 0 || q_next[w] <= 0) continue;
        rate.add(pmf[v] * c * std::log(c / q_next[w]));
        distortion.add(pmf[v] * c * dist(static_cast<Symbol>(v), static_cast<Symbol>(w)));
      }
    }
    pt.rate = std::max(0.0, rate.value());
    pt.distortion = distortion.value();
    pt.iterations = it;
    const bool settled = std::abs(pt.rate - prev_rate) < opts.tol && kkt < 1e3 * opts.tol;
    prev_rate = pt.rate;
    q.swap(q_next);
    if (settled) {
      pt.channel = TestChannel::from_conditional(src, nw, cond);
      return pt;
    }
  }
  pt.channel = TestChannel::from_conditional(src, nw, cond);
  throw NonConvergenceError("Blahut-Arimoto did not converge within " +
                                std::to_string(opts.max_iter) + " iterations at slope " +
                                std::to_string(s),
                            std::move(pt));
}

RDPoint rd_at(const SourceSpec& src, const DistortionSpec& dist, double D, double tol) {
  check_shapes(src, dist);
  if (!(tol > 0.0)) throw std::invalid_argument("rd_at: tol must be > 0");
  const auto ext = d_extremes(src, dist);
  if (D >= ext.max) return make_point(src, dist, D, zero_rate_channel(src, dist), 0.0);
  if (!(D > ext.floor)) throw std::domain_error("infeasible distortion");

  BlahutArimotoOptions opts;
  std::vector<double> warm;

  // Bracket: D(s) increases with s; D(0) = D_max > D.
  double s_hi = 0.0;
  double s_lo = -1.0;
  SlopePoint lo = ba_fixed_slope(src, dist, s_lo, opts, warm);
  while (lo.distortion > D) {
    s_hi = s_lo;
    s_lo *= 2.0;
    if (s_lo < -1e6) throw std::domain_error("infeasible distortion");
    lo = ba_fixed_slope(src, dist, s_lo, opts, lo.channel.marginal);
  }
  if (lo.distortion >= D - tol) return make_point(src, dist, D, std::move(lo.channel), s_lo);

  SlopePoint hi = ba_fixed_slope(src, dist, s_hi, opts, lo.channel.marginal);
  warm = lo.channel.marginal;
  for (int step = 0; step < 200; ++step) {
    const double s_mid = 0.5 * (s_lo + s_hi);
    if (!(s_mid > s_lo && s_mid < s_hi)) break;
    SlopePoint mid = ba_fixed_slope(src, dist, s_mid, opts, warm);
    warm = mid.channel.marginal;
    if (mid.distortion > D) {
      s_hi = s_mid;
      hi = std::move(mid);
    } else if (mid.distortion < D - tol) {
      s_lo = s_mid;
      lo = std::move(mid);
    } else {
      return make_point(src, dist, D, std::move(mid.channel), s_mid);
    }
  }
  // R(D) is linear between the bracket ends (D(s) jumps here); mixing the two
  // end channels is optimal on that segment.
  const double target = D - 0.5 * tol;
  const double lambda = (hi.distortion - target) / (hi.distortion - lo.distortion);
  std::vector<double> cond(lo.channel.cond.size());
  for (std::size_t i = 0; i < cond.size(); ++i) {
    cond[i] = lambda * lo.channel.cond[i] + (1.0 - lambda) * hi.channel.cond[i];
  }
  return make_point(src, dist, D,
                    TestChannel::from_conditional(src, dist.reproduction_size(), std::move(cond)),
                    s_lo);
}

DistortionExtremes d_extremes(const SourceSpec& src, const DistortionSpec& dist) {
  check_shapes(src, dist);
  DistortionExtremes ext;
  CompensatedSum floor;
  for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
    const auto row = dist.row(static_cast<Symbol>(v));
    floor.add(src.pmf()[v] * *std::min_element(row.begin(), row.end()));
  }
  ext.floor = floor.value();
  const auto col = expected_distortion_per_column(src, dist);
  ext.max = *std::min_element(col.begin(), col.end());
  return ext;
}

double gaussian_rd(double variance, double D) {
  if (!(variance > 0.0) || !(D > 0.0)) {
    throw std::invalid_argument("gaussian_rd: variance and D must be positive");
  }
  return std::max(0.0, 0.5 * std::log(variance / D));
}

ChannelMoments channel_moments(const SourceSpec& src, const DistortionSpec& dist,
                               const TestChannel& channel) {
  const std::size_t nw = channel.cols;
  ChannelMoments m;
  CompensatedSum iota_mean;
  CompensatedSum d_mean;
  for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
    for (std::size_t w = 0; w < nw; ++w) {
      const double joint = src.pmf()[v] * channel.cond[v * nw + w];
      if (joint <= 0 || channel.marginal[w] <= 0) continue;
      iota_mean.add(joint * std::log(channel.cond[v * nw + w] / channel.marginal[w]));
      d_mean.add(joint * dist(static_cast<Symbol>(v), static_cast<Symbol>(w)));
    }
  }
  m.mutual_information = iota_mean.value();
  m.distortion_mean = d_mean.value();
  CompensatedSum iota_var;
  CompensatedSum d_var;
  for (std::size_t v = 0; v < src.alphabet_size(); ++v) {
    for (std::size_t w = 0; w < nw; ++w) {
      const double joint = src.pmf()[v] * channel.cond[v * nw + w];
      if (joint <= 0 || channel.marginal[w] <= 0) continue;
      const double di = std::log(channel.cond[v * nw + w] / channel.marginal[w]) - m.mutual_information;
      const double dd = dist(static_cast<Symbol>(v), static_cast<Symbol>(w)) - m.distortion_mean;
      iota_var.add(joint * di * di);
      d_var.add(joint * dd * dd);
    }
  }
  m.iota_variance = iota_var.value();
  m.distortion_variance = d_var.value();
  return m;
}

}  // namespace vfsc
