#include "vfsc/tunstall.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "vfsc/numeric.hpp"

namespace vfsc {

std::size_t nearest_feasible_leaves(std::size_t k, std::size_t M) {
  if (k < 2) return 1;
  if (M <= k) return k;
  const std::size_t step = k - 1;
  const std::size_t below = 1 + ((M - 1) / step) * step;
  const std::size_t above = below == M ? M : below + step;
  return M - below < above - M ? below : above;
}

double ParseTree::expected_length() const {
  CompensatedSum e;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    e.add(leaf_probs_[i] * static_cast<double>(leaves_[i].size()));
  }
  return e.value();
}

double ParseTree::rate() const {
  return std::log(static_cast<double>(leaves_.size())) / expected_length();
}

ParseTree build_tree(const SourceSpec& src, std::size_t M) {
  const std::size_t k = src.alphabet_size();
  if (k < 2) throw std::invalid_argument("tunstall: need at least two letters");
  for (double p : src.pmf()) {
    if (p <= 0) throw std::invalid_argument("tunstall: source has a zero-probability letter");
  }
  if (M < k || (M - 1) % (k - 1) != 0) {
    throw std::invalid_argument("tunstall: infeasible leaf count " + std::to_string(M) +
                                "; nearest feasible is " +
                                std::to_string(nearest_feasible_leaves(k, M)));
  }

  struct Entry {
    double prob;
    std::int32_t node;
    SequenceSample word;
  };
  // Max-heap on probability; equal probabilities pop the smaller word first.
  const auto later = [](const Entry& a, const Entry& b) {
    return a.prob != b.prob ? a.prob < b.prob : a.word > b.word;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> frontier(later);

  ParseTree tree;
  tree.alphabet_ = k;
  tree.nodes_.push_back({});
  tree.node_probs_.push_back(1.0);
  frontier.push({1.0, 0, {}});
  std::size_t leaves = 1;
  while (leaves < M) {
    Entry top = frontier.top();
    frontier.pop();
    const auto first = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_[static_cast<std::size_t>(top.node)].first_child = first;
    for (std::size_t a = 0; a < k; ++a) {
      tree.nodes_.push_back({});
      const double p = top.prob * src.pmf()[a];
      tree.node_probs_.push_back(p);
      SequenceSample word = top.word;
      word.push_back(static_cast<Symbol>(a));
      frontier.push({p, first + static_cast<std::int32_t>(a), std::move(word)});
    }
    leaves += k - 1;
  }
  // Leaves in heap order: most probable first.
  while (!frontier.empty()) {
    Entry e = frontier.top();
    frontier.pop();
    tree.nodes_[static_cast<std::size_t>(e.node)].leaf = static_cast<std::int32_t>(tree.leaves_.size());
    tree.leaves_.push_back(std::move(e.word));
    tree.leaf_probs_.push_back(e.prob);
  }
  return tree;
}

ParseStats parse_stream(const ParseTree& tree, const SourceSpec& src, std::size_t stream_symbols,
                        std::uint64_t seed) {
  if (tree.alphabet_size() != src.alphabet_size()) {
    throw std::invalid_argument("parse_stream: tree and source alphabets differ");
  }
  RandomStream rng(seed);
  const auto cdf = src.cdf();
  const auto& nodes = tree.nodes();
  ParseStats stats;
  CompensatedSum len_sum;
  CompensatedSum len_sq;
  std::size_t node = 0;
  std::size_t depth = 0;
  for (std::size_t i = 0; i < stream_symbols; ++i) {
    const Symbol s = sample_from_cdf(cdf, rng.uniform());
    node = static_cast<std::size_t>(nodes[node].first_child) + s;
    ++depth;
    if (nodes[node].first_child < 0) {
      ++stats.words;
      stats.symbols_parsed += depth;
      len_sum.add(static_cast<double>(depth));
      len_sq.add(static_cast<double>(depth * depth));
      node = 0;
      depth = 0;
    }
  }
  if (stats.words == 0) throw std::invalid_argument("parse_stream: stream too short for one word");
  const double w = static_cast<double>(stats.words);
  stats.mean_length = len_sum.value() / w;
  const double var = std::max(0.0, len_sq.value() / w - stats.mean_length * stats.mean_length);
  stats.ci_radius = 3.0 * std::sqrt(var / w);
  stats.rate = std::log(static_cast<double>(tree.leaf_count())) / stats.mean_length;
  return stats;
}

}  // namespace vfsc
