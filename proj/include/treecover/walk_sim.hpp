#ifndef TREECOVER_WALK_SIM_HPP
#define TREECOVER_WALK_SIM_HPP

// Event-driven simulation of continuous-time chains built from a Network:
// jump chain with per-vertex alias tables, holding rate r(x) = sum_y c(x,y)/nu({x}).
//
// Cover times can be assembled two ways. simulate_cover runs only the jump
// chain and then draws sum_x Gamma(visits(x), r(x)); this is exact in law
// because holding times at x are i.i.d. Exp(r(x)) and independent of the jump
// chain. simulate_until draws one exponential per event so that local times,
// recorded paths and excision are pathwise exact.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treecover/alias_table.hpp"
#include "treecover/error.hpp"
#include "treecover/network.hpp"
#include "treecover/rng.hpp"
#include "treecover/tree_core.hpp"

namespace treecover {

enum class Family { raw, bar, tilde };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::raw: return "raw";
    case Family::bar: return "bar";
    case Family::tilde: return "tilde";
  }
  return "raw";
}

inline Family parse_family(std::string_view s) {
  if (s == "raw") return Family::raw;
  if (s == "bar") return Family::bar;
  if (s == "tilde") return Family::tilde;
  throw SchemaError("unknown process family '" + std::string(s) + "'");
}

class JumpChainEngine {
 public:
  explicit JumpChainEngine(const Network& net)
      : row_(net.size() + 1, 0), rate_(net.size()), measure_(net.measure()) {
    const std::size_t n = net.size();
    for (std::size_t x = 0; x < n; ++x) row_[x + 1] = row_[x] + net.neighbors(x).size();
    col_.resize(row_[n]);
    prob_.resize(row_[n]);
    alias_.resize(row_[n]);
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const auto nb = net.neighbors(x);
      std::copy(nb.begin(), nb.end(), col_.begin() + static_cast<std::ptrdiff_t>(row_[x]));
      if (!nb.empty()) {
        build_alias(net.conductances(x), std::span(prob_).subspan(row_[x], nb.size()),
                    std::span(alias_).subspan(row_[x], nb.size()));
      }
      rate_[x] = net.row_sum(x) / net.measure(x);
      if (!std::isfinite(rate_[x])) throw DomainError("non-finite holding rate");
      rmin = std::min(rmin, rate_[x]);
      rmax = std::max(rmax, rate_[x]);
    }
    uniform_rate_ = n > 0 && rmax - rmin <= 1e-12 * rmax;
  }

  std::size_t size() const { return rate_.size(); }
  double rate(std::size_t x) const { return rate_[x]; }
  std::size_t degree(std::size_t x) const { return row_[x + 1] - row_[x]; }
  const std::vector<double>& measure() const { return measure_; }
  bool uniform_rate() const { return uniform_rate_; }

  /// Next state of the jump chain from x.
  std::uint32_t jump(std::size_t x, Stream& s) const {
    const std::size_t k = row_[x + 1] - row_[x];
    if (k == 0) throw DomainError("jump from an isolated vertex");
    const auto slot = alias_draw(s(), std::span(prob_).subspan(row_[x], k),
                                 std::span(alias_).subspan(row_[x], k));
    return col_[row_[x] + slot];
  }

 private:
  std::vector<std::size_t> row_;
  std::vector<std::uint32_t> col_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<double> rate_;
  std::vector<double> measure_;
  bool uniform_rate_ = false;
};

/// One cover-time sample with its provenance.
struct RunRecord {
  Family family = Family::raw;
  double lambda = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  std::uint64_t jumps = 0;
  std::vector<std::uint64_t> visits;
};

struct CoverResult {
  double tau = 0.0;
  std::uint64_t jumps = 0;
  /// Holding intervals spent at each vertex before the covering arrival.
  std::vector<std::uint64_t> visits;
};

/// Runs the jump chain from `start` until every vertex is visited; tau is the
/// arrival time at the last new vertex, assembled from Gamma draws.
inline CoverResult simulate_cover(const JumpChainEngine& engine, std::size_t start, Stream& s) {
  const std::size_t n = engine.size();
  if (start >= n) throw DomainError("start vertex out of range");
  CoverResult out;
  out.visits.assign(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  seen[start] = 1;
  std::size_t remaining = n - 1;
  std::size_t x = start;
  while (remaining > 0) {
    ++out.visits[x];
    ++out.jumps;
    x = engine.jump(x, s);
    if (!seen[x]) {
      seen[x] = 1;
      --remaining;
    }
  }
  if (engine.uniform_rate() && n > 0) {
    out.tau = s.gamma(static_cast<double>(out.jumps), engine.rate(start));
  } else {
    for (std::size_t v = 0; v < n; ++v) {
      if (out.visits[v] > 0) out.tau += s.gamma(static_cast<double>(out.visits[v]), engine.rate(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-event simulation, ledgers and recorded paths

struct HitVertex {
  std::size_t vertex = 0;
};
struct HitSet {
  std::vector<std::size_t> vertices;
};
struct CoverSet {
  std::vector<std::size_t> vertices;
};
struct TimeHorizon {
  double t = 0.0;
};
using StopRule = std::variant<HitVertex, HitSet, CoverSet, TimeHorizon>;

/// Occupied time per vertex; local time is occupied time over the vertex measure.
struct LocalTimeLedger {
  std::vector<double> occupied;
  std::vector<double> measure;
  double elapsed = 0.0;

  double local_time(std::size_t x) const { return occupied[x] / measure[x]; }
};

/// (vertex, holding time) pairs in path order. The last event of a stopped
/// run has the arrival vertex with the holding time accrued before stopping.
struct Event {
  std::uint32_t vertex = 0;
  double holding = 0.0;
};

struct Trajectory {
  std::vector<Event> events;

  double duration() const {
    double t = 0.0;
    for (const auto& e : events) t += e.holding;
    return t;
  }
};

struct UntilResult {
  double time = 0.0;
  std::uint64_t jumps = 0;
  LocalTimeLedger ledger;
};

inline UntilResult simulate_until(const JumpChainEngine& engine, std::size_t start,
                                  const StopRule& rule, Stream& s, Trajectory* path = nullptr) {
  const std::size_t n = engine.size();
  if (start >= n) throw DomainError("start vertex out of range");
  UntilResult out;
  out.ledger.occupied.assign(n, 0.0);
  out.ledger.measure = engine.measure();

  std::vector<std::uint8_t> target(n, 0);
  std::size_t remaining = 0;
  double horizon = std::numeric_limits<double>::infinity();
  enum class Mode { hit, cover, horizon } mode = Mode::hit;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        auto mark = [&](std::size_t v) {
          if (v >= n) throw DomainError("stop-rule vertex out of range");
          if (!target[v]) {
            target[v] = 1;
            ++remaining;
          }
        };
        if constexpr (std::is_same_v<R, HitVertex>) {
          mark(r.vertex);
          mode = Mode::hit;
        } else if constexpr (std::is_same_v<R, HitSet>) {
          for (auto v : r.vertices) mark(v);
          mode = Mode::hit;
        } else if constexpr (std::is_same_v<R, CoverSet>) {
          for (auto v : r.vertices) mark(v);
          mode = Mode::cover;
        } else {
          if (!(r.t >= 0.0)) throw DomainError("time horizon must be nonnegative");
          horizon = r.t;
          mode = Mode::horizon;
        }
      },
      rule);

  std::size_t x = start;
  auto arrive = [&](std::size_t v) -> bool {
    if (mode == Mode::hit) return target[v] != 0;
    if (mode == Mode::cover && target[v]) {
      target[v] = 0;
      return --remaining == 0;
    }
    return false;
  };
  bool done = mode == Mode::horizon ? horizon == 0.0 : (remaining == 0 || arrive(x));
  double t = 0.0;
  while (!done) {
    const double rate = engine.rate(x);
    if (rate <= 0.0) {
      if (mode != Mode::horizon) throw DomainError("chain is stuck at an isolated vertex");
      out.ledger.occupied[x] += horizon - t;
      if (path) path->events.push_back({static_cast<std::uint32_t>(x), horizon - t});
      t = horizon;
      break;
    }
    double hold = s.exponential(rate);
    if (mode == Mode::horizon && t + hold >= horizon) {
      hold = horizon - t;
      out.ledger.occupied[x] += hold;
      if (path) path->events.push_back({static_cast<std::uint32_t>(x), hold});
      t = horizon;
      break;
    }
    out.ledger.occupied[x] += hold;
    if (path) path->events.push_back({static_cast<std::uint32_t>(x), hold});
    t += hold;
    x = engine.jump(x, s);
    ++out.jumps;
    done = arrive(x);
  }
  if (mode != Mode::horizon && path) path->events.push_back({static_cast<std::uint32_t>(x), 0.0});
  out.time = t;
  out.ledger.elapsed = t;
  return out;
}

/// Relative gap between sum_x f(x) o(x) and sum_x f(x) L(x) nu({x}).
inline double occupation_identity_check(const LocalTimeLedger& ledger, std::span<const double> f) {
  double direct = 0.0;
  double via_local = 0.0;
  for (std::size_t x = 0; x < ledger.occupied.size(); ++x) {
    direct += f[x] * ledger.occupied[x];
    via_local += f[x] * ledger.local_time(x) * ledger.measure[x];
  }
  return std::abs(direct - via_local) / std::max(1.0, std::abs(direct));
}

/// A_t = sum_x L_t(x) w({x}); weights are zero off the chosen subset.
inline double additive_functional(const LocalTimeLedger& ledger, std::span<const double> weights) {
  double a = 0.0;
  for (std::size_t x = 0; x < ledger.occupied.size(); ++x) {
    if (weights[x] != 0.0) a += ledger.local_time(x) * weights[x];
  }
  return a;
}

/// The additive functional A_t = sum_x L_t(x) w({x}) evaluated along a
/// recorded path, as a piecewise-linear function of time.
class AdditiveClock {
 public:
  AdditiveClock(const Trajectory& path, std::span<const double> measure,
                std::span<const double> weights) {
    times_.push_back(0.0);
    values_.push_back(0.0);
    for (const auto& e : path.events) {
      const double slope = weights[e.vertex] / measure[e.vertex];
      times_.push_back(times_.back() + e.holding);
      values_.push_back(values_.back() + slope * e.holding);
    }
  }

  double value(double t) const {
    if (t <= 0.0) return 0.0;
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return values_.back();
    const auto k = static_cast<std::size_t>(it - times_.begin());
    const double dt = times_[k] - times_[k - 1];
    if (dt <= 0.0) return values_[k];
    return values_[k - 1] + (values_[k] - values_[k - 1]) * (t - times_[k - 1]) / dt;
  }

  /// Right-continuous inverse inf{s >= 0 : A_s > a}; infinity past the path.
  double inverse(double a) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), a);
    if (it == values_.end()) return std::numeric_limits<double>::infinity();
    const auto k = static_cast<std::size_t>(it - values_.begin());
    if (k == 0) return 0.0;
    const double dv = values_[k] - values_[k - 1];
    return times_[k - 1] + (times_[k] - times_[k - 1]) * (a - values_[k - 1]) / dv;
  }

  double total() const { return values_.back(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Arrival time at the last vertex of `set` to be visited, if the path covers it.
inline std::optional<double> cover_time(const Trajectory& path, std::span<const std::uint8_t> set) {
  std::size_t remaining = static_cast<std::size_t>(std::count(set.begin(), set.end(), std::uint8_t{1}));
  if (remaining == 0) return 0.0;
  std::vector<std::uint8_t> seen(set.size(), 0);
  double t = 0.0;
  for (const auto& e : path.events) {
    if (set[e.vertex] && !seen[e.vertex]) {
      seen[e.vertex] = 1;
      if (--remaining == 0) return t;
    }
    t += e.holding;
  }
  return std::nullopt;
}

struct ExcisionResult {
  Trajectory path;
  /// Cover time of the kept set by the excised path, when it is covered.
  std::optional<double> cover_time;
  std::uint64_t jumps = 0;
};

/// Deletes the holding intervals spent outside `keep` and concatenates the
/// rest; consecutive intervals at one vertex merge into a single holding.
inline ExcisionResult excise_time_change(const Trajectory& path, std::span<const std::uint8_t> keep) {
  ExcisionResult out;
  for (const auto& e : path.events) {
    if (e.vertex >= keep.size()) throw DomainError("trajectory vertex outside keep mask");
    if (!keep[e.vertex]) continue;
    if (!out.path.events.empty() && out.path.events.back().vertex == e.vertex) {
      out.path.events.back().holding += e.holding;
    } else {
      out.path.events.push_back(e);
    }
  }
  if (out.path.events.empty()) throw DomainError("trajectory never enters the kept set");
  out.cover_time = cover_time(out.path, keep);
  if (out.cover_time) {
    std::size_t remaining = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), std::uint8_t{1}));
    std::vector<std::uint8_t> seen(keep.size(), 0);
    for (std::size_t k = 0; k < out.path.events.size(); ++k) {
      const auto v = out.path.events[k].vertex;
      if (!seen[v]) {
        seen[v] = 1;
        if (--remaining == 0) {
          out.jumps = k;
          break;
        }
      }
    }
  }
  return out;
}

/// Little-endian (uint32 vertex, float64 holding) records.
inline void write_events(std::ostream& os, const Trajectory& path) {
  static_assert(std::endian::native == std::endian::little, "event format assumes little-endian host");
  for (const auto& e : path.events) {
    os.write(reinterpret_cast<const char*>(&e.vertex), sizeof(std::uint32_t));
    os.write(reinterpret_cast<const char*>(&e.holding), sizeof(double));
  }
}

inline Trajectory read_events(std::istream& is) {
  Trajectory path;
  for (;;) {
    Event e;
    if (!is.read(reinterpret_cast<char*>(&e.vertex), sizeof(std::uint32_t))) break;
    if (!is.read(reinterpret_cast<char*>(&e.holding), sizeof(double))) {
      throw SchemaError("truncated event record");
    }
    path.events.push_back(e);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Specialised sampler for the canonical walk on T_n

/// Holding intervals before the covering arrival for the walk on T_n started
/// at the root. Every holding rate of canonical T_n is 1, so the cover time is
/// Gamma(jumps, 1), and the part of it spent at depth >= split is
/// Gamma(deep_holds, 1), independent of the remainder.
struct TreeCoverCounts {
  std::uint64_t jumps = 0;
  std::uint64_t deep_holds = 0;
};

/// Law of the number of jumps L_h of an excursion into a fully visited
/// subtree of height h, from the jump onto its top vertex until the return to
/// the parent. L_0 = 1 and L_h = (G+1) + sum_{i<=G} L_{h-1}^{(i)} with G
/// geometric (failures) of success probability p_up; pmfs are obtained from
/// that recursion and truncated where the tail mass drops below 1e-14.
class ExcursionLaw {
 public:
  ExcursionLaw(double p_up, int max_height, std::size_t support_cap = std::size_t{1} << 15) {
    const double q = 1.0 - p_up;
    std::vector<double> prev{0.0, 1.0};  // pmf of L_0 indexed by jump count
    double mean = 1.0;
    tables_.emplace_back();  // height 0 is the constant 1
    for (int h = 1; h <= max_height; ++h) {
      mean = (1.0 + q * mean) / p_up;
      if (mean * 40.0 > static_cast<double>(support_cap)) break;
      std::vector<double> f(support_cap + 1, 0.0);
      double mass = 0.0;
      std::size_t top = 0;
      for (std::size_t k = 1; k <= support_cap; ++k) {
        double v = k == 1 ? p_up : 0.0;
        if (k >= 3) {
          double conv = 0.0;
          const std::size_t jmax = std::min(prev.size() - 1, k - 2);
          for (std::size_t j = 1; j <= jmax; ++j) conv += prev[j] * f[k - 1 - j];
          v += q * conv;
        }
        f[k] = v;
        mass += v;
        top = k;
        if (1.0 - mass < 1e-14 && k > 2) break;
      }
      if (1.0 - mass > 1e-12) break;
      f.resize(top + 1);
      tables_.emplace_back(std::span<const double>(f).subspan(1));
      prev = std::move(f);
    }
  }

  /// Largest height with a tabulated law.
  int max_height() const { return static_cast<int>(tables_.size()) - 1; }

  std::uint64_t draw(int height, Stream& s) const {
    if (height == 0) return 1;
    return std::uint64_t{tables_[static_cast<std::size_t>(height)](s)} + 1;
  }

 private:
  std::vector<AliasTable> tables_;
};

/// Jump chain of the lambda-biased walk on T_n (child 1/(2+lambda), parent
/// lambda/(2+lambda), root children 1/2), run from the root until cover.
/// A step onto a child whose subtree is already fully visited is replaced by
/// one draw of the excursion law of that subtree when its height is tabulated
/// and the child sits at depth >= split, so deep_holds stays exact.
class TreeCoverSampler {
 public:
  /// compress_height < 0 disables excursion compression.
  explicit TreeCoverSampler(const Params& p, int split = 0, int compress_height = 8)
      : n_(p.depth()),
        split_(split),
        p_up_(p.lambda() / (2.0 + p.lambda())),
        p_child_(1.0 / (2.0 + p.lambda())),
        law_(p_up_, std::min(std::max(compress_height, 0), std::max(p.depth() - 1, 0))),
        compress_(compress_height >= 0 ? std::min(compress_height, law_.max_height()) : -1) {
    if (n_ < 1) throw DomainError("TreeCoverSampler needs depth >= 1");
    if (split < 0 || split > n_) throw DomainError("split level outside [0, depth]");
  }

  int depth() const { return n_; }
  int split() const { return split_; }
  int compressed_height() const { return compress_; }

  TreeCoverCounts sample(Stream& s) const {
    TreeCoverCounts out;
    const std::uint32_t count = (std::uint32_t{2} << n_) - 1u;
    // Unvisited vertices in each subtree, by heap index.
    std::vector<std::uint32_t> unseen(count);
    for (std::uint32_t v = 0; v < count; ++v) {
      const int d = std::bit_width(v + 1u) - 1;
      unseen[v] = (std::uint32_t{2} << (n_ - d)) - 1u;
    }
    auto visit = [&](std::uint32_t v) {
      for (;;) {
        --unseen[v];
        if (v == 0) break;
        v = (v - 1u) >> 1;
      }
    };
    visit(0);
    std::uint32_t id = 0;
    int d = 0;
    for (;;) {
      ++out.jumps;
      if (d >= split_) ++out.deep_holds;
      std::uint32_t next;
      if (d == 0) {
        next = 1u + static_cast<std::uint32_t>(s() >> 63);
      } else if (d == n_) {
        next = (id - 1u) >> 1;
      } else {
        const double u = s.uniform();
        if (u < p_up_) {
          next = (id - 1u) >> 1;
        } else {
          next = 2 * id + (u < p_up_ + p_child_ ? 1u : 2u);
        }
      }
      if (next > id) {  // child step
        const int h = n_ - d - 1;
        if (unseen[next] == 0 && h <= compress_ && d + 1 >= split_) {
          const std::uint64_t len = law_.draw(h, s);
          out.jumps += len;
          out.deep_holds += len;
          continue;
        }
        id = next;
        ++d;
      } else {
        id = next;
        --d;
      }
      if (unseen[id] == (std::uint32_t{2} << (n_ - d)) - 1u) {
        visit(id);
        if (unseen[0] == 0) break;
      }
    }
    return out;
  }

 private:
  int n_;
  int split_;
  double p_up_;
  double p_child_;
  ExcursionLaw law_;
  int compress_;
};

}  // namespace treecover

#endif  // TREECOVER_WALK_SIM_HPP
