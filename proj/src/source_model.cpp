#include "vfsc/source_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vfsc/numeric.hpp"

namespace vfsc {

namespace {

constexpr std::size_t kMaxAlphabet = 65535;

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
    double x = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, x);
    if (ec != std::errc() || ptr != text.data() + j) {
      throw std::invalid_argument("not a number: '" + std::string(text.substr(i, j - i)) + "'");
    }
    out.push_back(x);
    i = j;
  }
  return out;
}

}  // namespace

SourceSpec::SourceSpec(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw std::invalid_argument("source pmf is empty");
  if (pmf_.size() > kMaxAlphabet) throw std::invalid_argument("source alphabet too large");
  CompensatedSum total;
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("source pmf entries must be finite and non-negative");
    }
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw std::invalid_argument("source pmf must sum to 1 (within 1e-12)");
  }
  cdf_.resize(pmf_.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    running.add(pmf_[i]);
    cdf_[i] = running.value();
  }
  // Pin the cdf to exactly 1 from the last letter with mass onward.
  std::size_t last = pmf_.size() - 1;
  while (pmf_[last] == 0.0) --last;
  for (std::size_t i = last; i < cdf_.size(); ++i) cdf_[i] = 1.0;
}

double SourceSpec::max_prob() const { return *std::max_element(pmf_.begin(), pmf_.end()); }

bool SourceSpec::is_uniform() const {
  return std::all_of(pmf_.begin(), pmf_.end(), [&](double p) { return p == pmf_.front(); });
}

SourceSpec SourceSpec::uniform(std::size_t k) {
  return SourceSpec(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

SourceSpec SourceSpec::bernoulli(double p_one) { return SourceSpec({1.0 - p_one, p_one}); }

DistortionSpec::DistortionSpec(std::size_t source_size, std::size_t reproduction_size,
                               std::vector<double> row_major)
    : rows_(source_size), cols_(reproduction_size), d_(std::move(row_major)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("distortion matrix is empty");
  if (cols_ > kMaxAlphabet) throw std::invalid_argument("reproduction alphabet too large");
  if (d_.size() != rows_ * cols_) {
    throw std::invalid_argument("distortion matrix size does not match its shape");
  }
  for (double x : d_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("distortion entries must be finite and non-negative");
    }
  }
}

double DistortionSpec::max_entry() const { return *std::max_element(d_.begin(), d_.end()); }

bool DistortionSpec::integral() const {
  return std::all_of(d_.begin(), d_.end(), [](double x) { return x == std::floor(x); });
}

DistortionSpec DistortionSpec::hamming(std::size_t k) {
  std::vector<double> d(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) d[i * k + i] = 0.0;
  return DistortionSpec(k, k, std::move(d));
}

double entropy(const SourceSpec& src) {
  CompensatedSum h;
  for (double p : src.pmf()) {
    if (p > 0) h.add(-p * std::log(p));
  }
  return h.value();
}

SequenceSample sample_block(const SourceSpec& src, std::size_t n, RandomStream& rng) {
  if (n == 0) throw std::invalid_argument("sample_block: n must be >= 1");
  SequenceSample out(n);
  const auto cdf = src.cdf();
  for (auto& s : out) s = sample_from_cdf(cdf, rng.uniform());
  return out;
}

double total_distortion(std::span<const Symbol> v, std::span<const Symbol> w,
                        const DistortionSpec& dist) {
  if (v.size() != w.size()) throw std::invalid_argument("block_distortion: length mismatch");
  double sum = 0;
  for (std::size_t k = 0; k < v.size(); ++k) sum += dist(v[k], w[k]);
  return sum;
}

double block_distortion(std::span<const Symbol> v, std::span<const Symbol> w,
                        const DistortionSpec& dist) {
  if (v.empty()) throw std::invalid_argument("block_distortion: empty block");
  return total_distortion(v, w, dist) / static_cast<double>(v.size());
}

SourceSpec parse_pmf(std::string_view text) { return SourceSpec(parse_reals(text)); }

DistortionSpec parse_distortion(std::string_view text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto row = parse_reals(text.substr(start, end - start));
    if (!row.empty()) {
      if (rows == 0) {
        cols = row.size();
      } else if (row.size() != cols) {
        throw std::invalid_argument("distortion rows have different lengths");
      }
      values.insert(values.end(), row.begin(), row.end());
      ++rows;
    }
    start = end + 1;
  }
  return DistortionSpec(rows, cols, std::move(values));
}

}  // namespace vfsc
