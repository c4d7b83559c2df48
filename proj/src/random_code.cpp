#include "vfsc/random_code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfsc {

Codebook Codebook::generate(std::uint64_t seed, std::size_t M, std::size_t n,
                            std::vector<double> marginal, std::size_t memory_budget_cells) {
  if (M == 0 || n == 0) throw std::invalid_argument("codebook: M and n must be >= 1");
  Codebook cb;
  cb.seed_ = seed;
  cb.M_ = M;
  cb.n_ = n;
  // Reuse the source machinery to validate and accumulate the marginal.
  const SourceSpec law(std::move(marginal));
  cb.cdf_.assign(law.cdf().begin(), law.cdf().end());
  if (M <= memory_budget_cells / n) {
    cb.cells_.resize(M * n);
    for (std::size_t j = 1; j <= M; ++j) {
      for (std::size_t k = 0; k < n; ++k) cb.cells_[(j - 1) * n + k] = cb.cell(j, k);
    }
  }
  return cb;
}

Codebook Codebook::from_rows(std::size_t M, std::size_t n, std::vector<Symbol> cells) {
  if (M == 0 || n == 0) throw std::invalid_argument("codebook: M and n must be >= 1");
  if (cells.size() != M * n) throw std::invalid_argument("codebook: cell count != M * n");
  Codebook cb;
  cb.M_ = M;
  cb.n_ = n;
  cb.cells_ = std::move(cells);
  return cb;
}

Symbol Codebook::cell(std::size_t j, std::size_t k) const {
  const std::uint64_t counter = (static_cast<std::uint64_t>(j - 1) * n_) + k;
  return sample_from_cdf(cdf_, unit_from_bits(derive_seed(seed_, counter)));
}

void Codebook::row(std::size_t j, std::span<Symbol> out) const {
  if (j < 1 || j > M_) throw std::out_of_range("codebook index out of range");
  if (out.size() != n_) throw std::invalid_argument("codebook row buffer has wrong length");
  if (stored()) {
    std::copy_n(cells_.begin() + static_cast<std::ptrdiff_t>((j - 1) * n_), n_, out.begin());
  } else {
    for (std::size_t k = 0; k < n_; ++k) out[k] = cell(j, k);
  }
}

SequenceSample Codebook::row(std::size_t j) const {
  SequenceSample out(n_);
  row(j, out);
  return out;
}

std::size_t encode(std::span<const Symbol> v, const Codebook& cb, const PsiEvaluator& psi) {
  if (v.size() != cb.block_length()) throw std::invalid_argument("encode: block length mismatch");
  SequenceSample buf(cb.block_length());
  for (std::size_t j = cb.size(); j >= 1; --j) {
    cb.row(j, buf);
    if (psi(v, buf)) return j;
  }
  return 1;
}

SequenceSample decode(std::size_t index, const Codebook& cb, std::size_t n) {
  if (index < 1 || index > cb.size()) throw std::out_of_range("decode: index out of range");
  if (n > cb.block_length()) throw std::invalid_argument("decode: n exceeds codeword length");
  auto row = cb.row(index);
  row.resize(n);
  return row;
}

TrialRecord code_block(std::span<const Symbol> v, const Codebook& cb, const PsiEvaluator& psi) {
  TrialRecord rec;
  rec.tau = v.size();
  rec.index = encode(v, cb, psi);
  const auto reconstruction = decode(rec.index, cb, v.size());
  rec.psi_hit = psi(v, reconstruction);
  const double total = total_distortion(v, reconstruction, psi.config().distortion);
  rec.distortion = total / static_cast<double>(v.size());
  rec.excess = !within_budget(total, static_cast<double>(v.size()), psi.config().D);
  return rec;
}

TrialAggregate run_trials(const SourceSpec& src, const PsiEvaluator& psi, const Codebook& cb,
                          std::size_t trials, std::uint64_t seed, const TrialOptions& opts) {
  if (trials == 0) throw std::invalid_argument("run_trials: T must be >= 1");
  const std::size_t n = cb.block_length();
  const std::size_t probe_rows = std::min(opts.per_codeword_rows, cb.size());

  std::vector<SequenceSample> probes;
  probes.reserve(probe_rows);
  for (std::size_t j = 1; j <= probe_rows; ++j) probes.push_back(cb.row(j));

  std::size_t excess = 0;
  std::size_t hits = 0;
  std::size_t probe_hits = 0;
  CompensatedSum distortion;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rng(derive_seed(seed, t));
    const auto v = sample_block(src, n, rng);
    const auto rec = code_block(v, cb, psi);
    excess += rec.excess ? 1 : 0;
    hits += rec.psi_hit ? 1 : 0;
    distortion.add(rec.distortion);
    for (const auto& row : probes) probe_hits += psi(v, row) ? 1 : 0;
  }

  TrialAggregate agg;
  agg.trials = trials;
  agg.excess = binomial_estimate(excess, trials, opts.confidence);
  agg.psi_hit = binomial_estimate(hits, trials, opts.confidence);
  agg.mean_distortion = distortion.value() / static_cast<double>(trials);
  agg.per_codeword_rows = probe_rows;
  if (probe_rows > 0) {
    // Psi values of one trial are correlated through the shared source block,
    // so the interval is sized as if each trial contributed one observation.
    const double pooled = static_cast<double>(probe_hits) / static_cast<double>(trials * probe_rows);
    const auto as_trials = static_cast<std::size_t>(std::llround(pooled * static_cast<double>(trials)));
    agg.per_codeword = binomial_estimate(as_trials, trials, opts.confidence);
    agg.per_codeword.successes = probe_hits;
    agg.per_codeword.trials = trials * probe_rows;
    agg.per_codeword.rate = pooled;
  }
  return agg;
}

}  // namespace vfsc
