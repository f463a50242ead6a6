#ifndef TREECOVER_LIMIT_PROCESS_HPP
#define TREECOVER_LIMIT_PROCESS_HPP

// Discrete approximations of the boundary jump process: the leaf chain
// X-tilde^n, nested ladder cover times, and the cover-time normalisations.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "treecover/error.hpp"
#include "treecover/network.hpp"
#include "treecover/parallel.hpp"
#include "treecover/rng.hpp"
#include "treecover/tree_core.hpp"
#include "treecover/walk_sim.hpp"

namespace treecover {

inline constexpr int kTildeDenseCap = 12;

/// How leaf representatives are joined. `none` traces T_n onto its leaves;
/// `with_tails` first hangs the infinite zero-tail below every leaf (a single
/// edge of resistance lambda^n/(1-lambda), so lambda < 1 is required).
enum class TailMode { none, with_tails };

/// X-tilde^n: T_n traced onto its 2^n leaves with measure 2^{-n} each. The
/// returned vertices are the depth-n leaves in word order.
inline Network build_tilde_chain(const Params& p, TailMode tails = TailMode::none,
                                 int cap = kTildeDenseCap) {
  const int n = p.depth();
  if (n > cap) throw CapacityError("tilde chain depth " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  const auto leaves = level_vertices(static_cast<std::uint32_t>(n));
  const std::vector<double> measure(leaves.size(), std::ldexp(1.0, -n));
  if (n == 0) return Network({Vertex::root()}, {}, measure);
  const auto tree = build_tree_network(p);
  if (tails == TailMode::none) {
    std::vector<std::size_t> keep;
    keep.reserve(leaves.size());
    for (const auto& v : leaves) keep.push_back(tree.index_of(v));
    return trace_network(tree, keep, measure);
  }
  if (!(p.lambda() < 1.0)) throw DomainError("zero tails need lambda < 1");
  auto edges = tree.triplets();
  auto labels = tree.vertices();
  std::vector<double> tree_measure(tree.measure().begin(), tree.measure().end());
  const double tail_conductance = (1.0 - p.lambda()) / p.edge_length(static_cast<std::uint32_t>(n));
  std::vector<std::size_t> keep;
  for (const auto& v : leaves) {
    const auto idx = static_cast<std::uint32_t>(labels.size());
    labels.push_back(v.child(0).child(0));  // stand-in label for the tail end
    tree_measure.push_back(tail_conductance);
    edges.push_back({static_cast<std::uint32_t>(tree.index_of(v)), idx, tail_conductance});
    keep.push_back(idx);
  }
  const Network extended(labels, edges, tree_measure);
  const auto traced = trace_network(extended, keep, measure);
  // Relabel tail ends by their leaf.
  auto traced_edges = traced.triplets();
  return Network(leaves, traced_edges, measure);
}

/// Jump chain of X-tilde^n exploiting its symmetry: the conductance between
/// two leaves depends only on the depth of their common ancestor, so a jump
/// picks that depth and then a uniform leaf of the opposite subtree.
class LeafChainSampler {
 public:
  explicit LeafChainSampler(const Network& tilde) : n_(0) {
    const std::size_t count = tilde.size();
    if (!std::has_single_bit(count)) throw DomainError("leaf chain needs 2^n states");
    n_ = std::countr_zero(count);
    for (std::size_t k = 0; k < count; ++k) {
      const auto v = tilde.vertex(k);
      if (v.depth != static_cast<std::uint32_t>(n_) || v.word != k) {
        throw DomainError("leaf chain expects leaves listed in word order");
      }
    }
    if (n_ == 0) return;
    std::vector<double> weight(static_cast<std::size_t>(n_));
    double total = 0.0;
    for (int k = 0; k < n_; ++k) {
      const std::size_t partner = std::size_t{1} << (n_ - k - 1);
      weight[static_cast<std::size_t>(k)] = tilde.conductance(0, partner) * static_cast<double>(partner);
      total += weight[static_cast<std::size_t>(k)];
    }
    rate_ = total / tilde.measure(0);
    level_ = AliasTable(weight);
  }

  int depth() const { return n_; }
  double rate() const { return rate_; }

  std::uint32_t jump(std::uint32_t x, Stream& s) const {
    const int k = static_cast<int>(level_(s));
    const int low = n_ - k - 1;
    const std::uint32_t mask = (std::uint32_t{1} << low) - 1u;
    return (x ^ (std::uint32_t{1} << low) ^ static_cast<std::uint32_t>(s() & mask));
  }

 private:
  int n_;
  double rate_ = 0.0;
  AliasTable level_;
};

/// Ladder of representative sets: level m keeps the leaves whose last n-m
/// bits vanish, i.e. the zero-padded words of the depth-m prefixes.
struct LadderSpec {
  double lambda = 0.5;
  int n = 0;
  std::vector<int> levels;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  /// Every even m in [4, n].
  static std::vector<int> default_levels(int n) {
    std::vector<int> out;
    for (int m = 4; m <= n; m += 2) out.push_back(m);
    return out;
  }

  void validate() const {
    if (levels.empty()) throw DomainError("ladder needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] < 0 || levels[i] > n) throw DomainError("ladder level outside [0, n]");
      if (i > 0 && levels[i] <= levels[i - 1]) throw DomainError("ladder levels must increase");
    }
  }
};

/// Padded depth-n word of a depth-m prefix.
inline std::uint32_t padded_word(const Vertex& prefix, int n) {
  if (static_cast<int>(prefix.depth) > n) throw DomainError("prefix deeper than the ladder top");
  return prefix.word << (static_cast<std::uint32_t>(n) - prefix.depth);
}

struct LadderResult {
  std::vector<int> levels;
  /// tau[i][s]: cover time of level levels[i] on path s.
  std::vector<std::vector<double>> tau;

  std::vector<double> means() const {
    std::vector<double> out;
    for (const auto& col : tau) {
      double m = 0.0;
      for (double t : col) m += t;
      out.push_back(col.empty() ? 0.0 : m / static_cast<double>(col.size()));
    }
    return out;
  }

  /// Differences of successive level means.
  std::vector<double> mean_increments() const {
    const auto m = means();
    std::vector<double> out;
    for (std::size_t i = 1; i < m.size(); ++i) out.push_back(m[i] - m[i - 1]);
    return out;
  }
};

struct LadderPath {
  std::vector<double> times;
  std::uint64_t jumps = 0;
};

/// Nested cover times along one path of X-tilde^n started at leaf 0. Times
/// at successive levels are built by adding independent Gamma increments to
/// the jump counts, which gives their exact joint law.
inline LadderPath ladder_path(const LeafChainSampler& chain, std::span<const int> levels, Stream& s) {
  const int n = chain.depth();
  const std::size_t L = levels.size();
  std::vector<std::uint64_t> remaining(L);
  std::vector<std::uint64_t> hit(L, 0);
  std::size_t open = 0;
  for (std::size_t i = 0; i < L; ++i) {
    remaining[i] = (std::uint64_t{1} << levels[i]) - 1;  // leaf 0 is already visited
    if (remaining[i] > 0) ++open;
  }
  std::vector<std::uint8_t> seen(std::size_t{1} << n, 0);
  seen[0] = 1;
  std::uint32_t x = 0;
  std::uint64_t jumps = 0;
  while (open > 0) {
    x = chain.jump(x, s);
    ++jumps;
    if (seen[x]) continue;
    seen[x] = 1;
    const int tz = x == 0 ? n : std::countr_zero(x);
    for (std::size_t i = 0; i < L; ++i) {
      if (n - levels[i] <= tz && remaining[i] > 0 && --remaining[i] == 0) {
        hit[i] = jumps;
        --open;
      }
    }
  }
  std::vector<double> times(L);
  double t = 0.0;
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < L; ++i) {
    t += s.gamma(static_cast<double>(hit[i] - prev), chain.rate());
    prev = hit[i];
    times[i] = t;
    if (i > 0 && times[i] < times[i - 1]) throw Error("ladder cover times decreased along a path");
  }
  return {std::move(times), jumps};
}

inline LadderResult sample_limit_cover(const LadderSpec& spec, unsigned workers = 0) {
  spec.validate();
  const Params p(spec.lambda, spec.n);
  const LeafChainSampler chain(build_tilde_chain(p));
  LadderResult out;
  out.levels = spec.levels;
  out.tau.assign(spec.levels.size(), std::vector<double>(spec.samples));
  parallel_for(spec.samples, workers, [&](std::size_t i) {
    Stream s(spec.seed, i);
    const auto t = ladder_path(chain, spec.levels, s).times;
    for (std::size_t k = 0; k < t.size(); ++k) out.tau[k][i] = t[k];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Normalisation

struct RescaledSample {
  double tau = 0.0;
  /// (2-lambda)/(4 lambda) (lambda/2)^n tau, or tau itself for the tilde family.
  double rescaled = 0.0;
  /// tau / b_n, or tau itself for the tilde family.
  double rescaled_bn = 0.0;
  Family family = Family::raw;
  int n = 0;
};

inline double theorem_scale(const Params& p) {
  const double l = p.lambda();
  if (!(l < 2.0)) throw DomainError("cover-time rescaling needs lambda < 2");
  return (2.0 - l) / (4.0 * l) * std::pow(l / 2.0, p.depth());
}

inline RescaledSample rescale_cover(double tau, Family family, const Params& p) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("cover time must be finite and nonnegative");
  RescaledSample out{tau, tau, tau, family, p.depth()};
  if (family == Family::tilde) return out;
  out.rescaled = theorem_scale(p) * tau;
  out.rescaled_bn = p.depth() >= 1 ? tau / b_n(p) : out.rescaled;
  return out;
}

// ---------------------------------------------------------------------------
// Batch samplers; sample i always uses Stream(seed, i).

inline std::vector<RunRecord> sample_raw_cover(const Params& p, std::size_t samples,
                                               std::uint64_t seed, unsigned workers = 0) {
  std::vector<RunRecord> out(samples);
  if (p.depth() == 0) {
    for (auto& r : out) r = RunRecord{Family::raw, p.lambda(), 0, seed, 0.0, 0, {}};
    return out;
  }
  const TreeCoverSampler sampler(p);
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream s(seed, i);
    const auto c = sampler.sample(s);
    out[i] = RunRecord{Family::raw, p.lambda(), p.depth(), seed,
                       s.gamma(static_cast<double>(c.jumps), 1.0), c.jumps, {}};
  });
  return out;
}

inline std::vector<RunRecord> sample_tilde_cover(const Params& p, std::size_t samples,
                                                 std::uint64_t seed, unsigned workers = 0) {
  const LeafChainSampler chain(build_tilde_chain(p));
  const int top[] = {p.depth()};
  std::vector<RunRecord> out(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream s(seed, i);
    const auto t = ladder_path(chain, top, s);
    out[i] = RunRecord{Family::tilde, p.lambda(), p.depth(), seed, t.times[0], t.jumps, {}};
  });
  return out;
}

/// X-bar^n simulated directly on its traced network from the vertex
/// (level, 0...0).
inline std::vector<RunRecord> sample_bar_cover(const Params& p, std::size_t samples,
                                               std::uint64_t seed, unsigned workers = 0,
                                               std::optional<int> level = std::nullopt) {
  const int lv = level.value_or(bar_level(p.depth()));
  const auto net = build_bar_network(p, lv);
  const JumpChainEngine engine(net);
  const auto start = net.index_of(Vertex(static_cast<std::uint32_t>(lv), 0));
  std::vector<RunRecord> out(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream s(seed, i);
    auto c = simulate_cover(engine, start, s);
    out[i] = RunRecord{Family::bar, p.lambda(), p.depth(), seed, c.tau, c.jumps, {}};
  });
  return out;
}

/// Cover times of X^n and of its excision to Sigma-bar_n along one path.
struct CoupledCover {
  double tau_raw = 0.0;
  double tau_bar = 0.0;
};

/// Holding intervals at depth >= level carry the excised path; the rest is an
/// independent Gamma remainder, so the pair has the exact joint law of the
/// coupled cover times.
inline std::vector<CoupledCover> sample_coupled_bar(const Params& p, std::size_t samples,
                                                    std::uint64_t seed, unsigned workers = 0,
                                                    std::optional<int> level = std::nullopt) {
  const int lv = level.value_or(bar_level(p.depth()));
  const TreeCoverSampler sampler(p, lv);
  std::vector<CoupledCover> out(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream s(seed, i);
    const auto c = sampler.sample(s);
    const double bar = s.gamma(static_cast<double>(c.deep_holds), 1.0);
    const double outside = s.gamma(static_cast<double>(c.jumps - c.deep_holds), 1.0);
    out[i] = CoupledCover{bar + outside, bar};
  });
  return out;
}

}  // namespace treecover

#endif  // TREECOVER_LIMIT_PROCESS_HPP
