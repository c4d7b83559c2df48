#include "vfsc/rng.hpp"

#include <algorithm>

namespace vfsc {

Symbol sample_from_cdf(std::span<const double> cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) {
    // u landed on the rounding gap above cdf.back(); take the last letter
    // that carries mass.
    it = std::lower_bound(cdf.begin(), cdf.end(), cdf.back());
  }
  return static_cast<Symbol>(it - cdf.begin());
}

}  // namespace vfsc
