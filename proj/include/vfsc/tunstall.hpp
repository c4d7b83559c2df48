#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vfsc/source_model.hpp"

namespace vfsc {

/// Complete |V|-ary parse tree with M leaves (the dictionary words).
class ParseTree {
 public:
  struct Node {
    std::int32_t first_child = -1;  ///< children are contiguous; -1 for a leaf
    std::int32_t leaf = -1;         ///< index into leaves() for a leaf
  };

  std::size_t alphabet_size() const { return alphabet_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<SequenceSample>& leaves() const { return leaves_; }
  const std::vector<double>& leaf_probs() const { return leaf_probs_; }
  /// Probability of reaching each node (root = 1).
  const std::vector<double>& node_probs() const { return node_probs_; }

  /// sum over leaves of prob * depth.
  double expected_length() const;
  /// ln M / E[length], nats per source symbol.
  double rate() const;

 private:
  friend ParseTree build_tree(const SourceSpec& src, std::size_t M);

  std::size_t alphabet_ = 0;
  std::vector<Node> nodes_;
  std::vector<double> node_probs_;
  std::vector<SequenceSample> leaves_;
  std::vector<double> leaf_probs_;
};

/// Tunstall's greedy construction: repeatedly split the most probable leaf
/// (ties to the lexicographically smallest word) until M leaves exist.
/// Requires M >= |V|, M = 1 mod (|V| - 1), and no zero-probability letter.
ParseTree build_tree(const SourceSpec& src, std::size_t M);

/// Feasible leaf count (1 mod k-1, at least k) closest to M; ties round up.
std::size_t nearest_feasible_leaves(std::size_t k, std::size_t M);

struct ParseStats {
  std::size_t words = 0;
  std::size_t symbols_parsed = 0;  ///< excludes the discarded tail
  double mean_length = 0;
  double ci_radius = 0;  ///< 3 standard errors
  double rate = 0;       ///< ln M / mean_length
};

/// Parses `stream_symbols` i.i.d. symbols with the tree. A trailing partial
/// word is dropped.
ParseStats parse_stream(const ParseTree& tree, const SourceSpec& src, std::size_t stream_symbols,
                        std::uint64_t seed);

}  // namespace vfsc
