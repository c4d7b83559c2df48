#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vfsc/rng.hpp"

namespace vfsc {

/// Finite-alphabet memoryless source P_V.
class SourceSpec {
 public:
  /// Throws std::invalid_argument unless `pmf` is a probability vector
  /// (non-negative, sums to 1 within 1e-12).
  explicit SourceSpec(std::vector<double> pmf);

  std::size_t alphabet_size() const { return pmf_.size(); }
  std::span<const double> pmf() const { return pmf_; }
  std::span<const double> cdf() const { return cdf_; }
  double prob(Symbol v) const { return pmf_[v]; }
  double max_prob() const;
  bool is_uniform() const;

  static SourceSpec uniform(std::size_t k);
  static SourceSpec bernoulli(double p_one);

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// Single-letter distortion d(v, w) >= 0 on a |V| x |V^| grid.
class DistortionSpec {
 public:
  DistortionSpec(std::size_t source_size, std::size_t reproduction_size,
                 std::vector<double> row_major);

  std::size_t source_size() const { return rows_; }
  std::size_t reproduction_size() const { return cols_; }
  double operator()(Symbol v, Symbol w) const { return d_[v * cols_ + w]; }
  std::span<const double> row(Symbol v) const {
    return std::span<const double>(d_).subspan(v * cols_, cols_);
  }
  double max_entry() const;
  bool integral() const;

  static DistortionSpec hamming(std::size_t k);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> d_;
};

using SequenceSample = std::vector<Symbol>;

/// H(V) in nats.
double entropy(const SourceSpec& src);

SequenceSample sample_block(const SourceSpec& src, std::size_t n, RandomStream& rng);

/// Sum over k of d(v_k, w_k).
double total_distortion(std::span<const Symbol> v, std::span<const Symbol> w,
                        const DistortionSpec& dist);

/// Per-letter distortion (1/n) sum d(v_k, w_k). Throws on length mismatch.
double block_distortion(std::span<const Symbol> v, std::span<const Symbol> w,
                        const DistortionSpec& dist);

/// `pmf = ...` value: whitespace-separated probabilities.
SourceSpec parse_pmf(std::string_view text);

/// `dist = ...` value: whitespace-separated rows, rows separated by ';'.
DistortionSpec parse_distortion(std::string_view text);

}  // namespace vfsc
