#ifndef TREECOVER_ALIAS_TABLE_HPP
#define TREECOVER_ALIAS_TABLE_HPP

// Walker/Vose alias tables: O(k) construction, O(1) sampling from one 64-bit
// draw (high half picks the column, low half the coin).

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "treecover/error.hpp"

namespace treecover {

/// Fills prob/alias (same length as weights) for sampling proportional to weights.
inline void build_alias(std::span<const double> weights, std::span<double> prob,
                        std::span<std::uint32_t> alias) {
  const std::size_t k = weights.size();
  if (k == 0) return;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("alias table needs positive total weight");
  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = weights[i] * static_cast<double>(k) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob[s] = scaled[s];
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) {
    prob[i] = 1.0;
    alias[i] = i;
  }
  for (auto i : small) {  // round-off leftovers
    prob[i] = 1.0;
    alias[i] = i;
  }
}

/// Column in [0, k) and acceptance test from one 64-bit word.
inline std::uint32_t alias_draw(std::uint64_t bits, std::span<const double> prob,
                                std::span<const std::uint32_t> alias) {
  const auto k = static_cast<std::uint64_t>(prob.size());
  const auto column = static_cast<std::uint32_t>(((bits >> 32) * k) >> 32);
  const double coin = static_cast<double>(bits & 0xFFFFFFFFull) * 0x1.0p-32;
  return coin < prob[column] ? column : alias[column];
}

class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights)
      : prob_(weights.size()), alias_(weights.size()) {
    build_alias(weights, prob_, alias_);
  }

  std::size_t size() const { return prob_.size(); }

  template <class Engine>
  std::uint32_t operator()(Engine& engine) const {
    return alias_draw(engine(), prob_, alias_);
  }

  /// Probability of outcome i implied by the table.
  double probability(std::size_t i) const {
    const double k = static_cast<double>(prob_.size());
    double p = prob_[i] / k;
    for (std::size_t j = 0; j < prob_.size(); ++j) {
      if (alias_[j] == i && j != i) p += (1.0 - prob_[j]) / k;
    }
    return p;
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace treecover

#endif  // TREECOVER_ALIAS_TABLE_HPP
