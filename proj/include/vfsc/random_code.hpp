#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vfsc/numeric.hpp"
#include "vfsc/source_model.hpp"
#include "vfsc/typicality.hpp"

namespace vfsc {

/// M i.i.d. codewords of length n drawn from the reproduction marginal.
///
/// Cell (j, k) is a pure function of (seed, j, k): it is the inverse-CDF image
/// of a counter-based hash, so a codebook can be stored or regenerated row by
/// row with bit-identical contents. Rows are 1-based to match the index set
/// {1, ..., M}.
class Codebook {
 public:
  static constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 26;

  static Codebook generate(std::uint64_t seed, std::size_t M, std::size_t n,
                           std::vector<double> marginal,
                           std::size_t memory_budget_cells = kDefaultMemoryBudget);
  /// Explicit rows (row-major, M x n). Used for hand-built codebooks.
  static Codebook from_rows(std::size_t M, std::size_t n, std::vector<Symbol> cells);

  std::size_t size() const { return M_; }
  std::size_t block_length() const { return n_; }
  bool stored() const { return !cells_.empty(); }

  /// Writes row j (1-based) into `out` (length n).
  void row(std::size_t j, std::span<Symbol> out) const;
  SequenceSample row(std::size_t j) const;

 private:
  Codebook() = default;
  Symbol cell(std::size_t j, std::size_t k) const;

  std::uint64_t seed_ = 0;
  std::size_t M_ = 0;
  std::size_t n_ = 0;
  std::vector<double> cdf_;
  std::vector<Symbol> cells_;
};

/// max{ j : Psi(v, C_j) = 1 }, or 1 when no codeword qualifies.
/// Scans j = M, M-1, ... and stops at the first hit.
std::size_t encode(std::span<const Symbol> v, const Codebook& cb, const PsiEvaluator& psi);

/// First n symbols of codeword `index`.
SequenceSample decode(std::size_t index, const Codebook& cb, std::size_t n);

struct TrialRecord {
  std::size_t tau = 0;
  std::size_t index = 1;
  double distortion = 0;
  bool psi_hit = false;
  bool excess = false;
};

/// Encodes and decodes one block with a fixed stopping time tau = |v|.
TrialRecord code_block(std::span<const Symbol> v, const Codebook& cb, const PsiEvaluator& psi);

struct TrialOptions {
  double confidence = 0.99;
  /// Codewords (the first ones) whose Psi is evaluated on every trial to
  /// estimate the per-codeword hit probability.
  std::size_t per_codeword_rows = 1024;
};

struct TrialAggregate {
  std::size_t trials = 0;
  BinomialEstimate excess;
  BinomialEstimate psi_hit;
  BinomialEstimate per_codeword;  ///< pooled over trials x rows; CI uses trials only
  std::size_t per_codeword_rows = 0;
  double mean_distortion = 0;
};

/// T fresh source blocks against one fixed codebook. Trial t draws its block
/// from substream derive_seed(seed, t).
TrialAggregate run_trials(const SourceSpec& src, const PsiEvaluator& psi, const Codebook& cb,
                          std::size_t trials, std::uint64_t seed, const TrialOptions& opts = {});

}  // namespace vfsc
