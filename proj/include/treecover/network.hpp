#ifndef TREECOVER_NETWORK_HPP
#define TREECOVER_NETWORK_HPP

// Finite electrical networks on labelled vertex sets: the canonical
// conductances on T_n, effective resistance, trace onto vertex subsets by
// sequential star-mesh elimination, and exact linear-algebra oracles for the
// continuous-time chain with generator
//   (Delta f)(x) = sum_y c(x,y) / nu({x}) (f(y) - f(x)).

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treecover/error.hpp"
#include "treecover/tree_core.hpp"

namespace treecover {

struct Triplet {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double value = 0.0;
};

/// Symmetric nonnegative conductances on labelled vertices plus a strictly
/// positive vertex measure. Immutable after construction; rows are stored in
/// CSR form with both directions present and columns sorted.
class Network {
 public:
  Network() = default;

  Network(std::vector<Vertex> vertices, std::span<const Triplet> edges,
          std::vector<double> measure)
      : vertices_(std::move(vertices)), measure_(std::move(measure)) {
    const std::size_t n = vertices_.size();
    if (n == 0) throw DomainError("network needs at least one vertex");
    if (n >= std::numeric_limits<std::uint32_t>::max()) throw CapacityError("network too large");
    if (measure_.size() != n) throw DomainError("measure size does not match vertex count");
    for (double m : measure_) {
      if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("vertex measure must be positive");
    }
    index_.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k) {
      if (!index_.emplace(vertices_[k], k).second) throw DomainError("duplicate vertex label");
    }

    std::vector<std::uint64_t> degree(n + 1, 0);
    for (const auto& t : edges) {
      if (t.i >= n || t.j >= n) throw DomainError("edge endpoint out of range");
      if (t.i == t.j) throw DomainError("self-loop in conductance list");
      if (!(t.value >= 0.0) || !std::isfinite(t.value)) {
        throw DomainError("conductance must be finite and nonnegative");
      }
      if (t.value == 0.0) continue;
      ++degree[t.i + 1];
      ++degree[t.j + 1];
    }
    std::partial_sum(degree.begin(), degree.end(), degree.begin());
    std::vector<std::pair<std::uint32_t, double>> slots(degree[n]);
    std::vector<std::uint64_t> fill(degree.begin(), degree.end() - 1);
    for (const auto& t : edges) {
      if (t.value == 0.0) continue;
      slots[fill[t.i]++] = {t.j, t.value};
      slots[fill[t.j]++] = {t.i, t.value};
    }

    row_.assign(n + 1, 0);
    col_.reserve(slots.size());
    val_.reserve(slots.size());
    row_sum_.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      auto first = slots.begin() + static_cast<std::ptrdiff_t>(degree[x]);
      auto last = slots.begin() + static_cast<std::ptrdiff_t>(degree[x + 1]);
      std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto it = first; it != last; ++it) {
        if (!col_.empty() && col_.size() > row_[x] && col_.back() == it->first) {
          val_.back() += it->second;
        } else {
          col_.push_back(it->first);
          val_.push_back(it->second);
        }
      }
      row_[x + 1] = col_.size();
      double s = 0.0;
      for (std::size_t k = row_[x]; k < row_[x + 1]; ++k) s += val_[k];
      row_sum_[x] = s;
    }
  }

  std::size_t size() const { return vertices_.size(); }
  std::size_t edge_count() const { return col_.size() / 2; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_[i]; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {col_.data() + row_[i], col_.data() + row_[i + 1]};
  }
  std::span<const double> conductances(std::size_t i) const {
    return {val_.data() + row_[i], val_.data() + row_[i + 1]};
  }

  double conductance(std::size_t i, std::size_t j) const {
    const auto nb = neighbors(i);
    const auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
    if (it == nb.end() || *it != j) return 0.0;
    return val_[row_[i] + static_cast<std::size_t>(it - nb.begin())];
  }

  double row_sum(std::size_t i) const { return row_sum_[i]; }
  double measure(std::size_t i) const { return measure_[i]; }
  const std::vector<double>& measure() const { return measure_; }

  double total_measure() const {
    return std::accumulate(measure_.begin(), measure_.end(), 0.0);
  }

  std::optional<std::size_t> find(const Vertex& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const Vertex& v) const {
    if (auto k = find(v)) return *k;
    throw DomainError("vertex " + to_string(v) + " is not in the network");
  }

  /// Upper-triangle edge list (i < j).
  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(edge_count());
    for (std::uint32_t i = 0; i < size(); ++i) {
      const auto nb = neighbors(i);
      const auto cs = conductances(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (nb[k] > i) out.push_back({i, nb[k], cs[k]});
      }
    }
    return out;
  }

  /// Connected components of the positive-conductance graph.
  std::vector<std::uint32_t> component_labels() const {
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(size(), unset);
    std::uint32_t next = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < size(); ++s) {
      if (label[s] != unset) continue;
      label[s] = next;
      stack.push_back(s);
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto y : neighbors(x)) {
          if (label[y] == unset) {
            label[y] = next;
            stack.push_back(y);
          }
        }
      }
      ++next;
    }
    return label;
  }

  bool connected() const {
    const auto labels = component_labels();
    return std::all_of(labels.begin(), labels.end(), [](auto l) { return l == 0; });
  }

  /// True when measure({x}) equals the conductance row sum for every x.
  bool measure_is_row_sum(double rel_tol = 1e-12) const {
    for (std::size_t x = 0; x < size(); ++x) {
      if (std::abs(measure_[x] - row_sum_[x]) > rel_tol * std::max(measure_[x], row_sum_[x])) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<double> measure_;
  std::unordered_map<Vertex, std::uint32_t> index_;
  std::vector<std::uint64_t> row_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
  std::vector<double> row_sum_;
};

/// T_n with c(i, ij) = lambda^{-m} for i at depth m and measure mu_n. Vertex k
/// is the vertex with heap index k.
inline Network build_tree_network(const Params& p) {
  if (p.depth() < 1) throw DomainError("build_tree_network needs depth >= 1");
  auto vertices = tree_vertices(p.depth());
  std::vector<Triplet> edges;
  edges.reserve(vertices.size() - 1);
  std::vector<double> measure(vertices.size());
  for (const auto& v : vertices) {
    measure[v.heap_index()] = mu_n_vertex(v, p);
    if (!v.is_root()) {
      edges.push_back({v.parent().heap_index(), v.heap_index(),
                       p.edge_conductance(v.depth - 1)});
    }
  }
  return Network(std::move(vertices), edges, std::move(measure));
}

/// First level of Sigma-bar_n = union of Sigma_m for m from this level to n:
/// max(0, n - ceil(log(n))) in the natural log.
inline int bar_level(int n) {
  if (n <= 1) return n;
  return std::max(0, n - static_cast<int>(std::ceil(std::log(static_cast<double>(n)))));
}

/// Vertices of Sigma-bar_n in heap order, starting at `level`.
inline std::vector<Vertex> bar_sigma(int n, int level) {
  std::vector<Vertex> out;
  for (int m = level; m <= n; ++m) {
    auto lv = level_vertices(static_cast<std::uint32_t>(m));
    out.insert(out.end(), lv.begin(), lv.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Effective resistance

/// Grounded-Laplacian factorization answering effective-resistance queries.
class ResistanceSolver {
 public:
  explicit ResistanceSolver(const Network& net, std::size_t ground = 0)
      : n_(net.size()), ground_(ground) {
    if (!net.connected()) throw DisconnectedError("effective resistance needs a connected network");
    if (n_ == 1) return;
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t x = 0; x < n_; ++x) {
      if (x == ground_) continue;
      const auto rx = reduced(x);
      entries.emplace_back(rx, rx, net.row_sum(x));
      const auto nb = net.neighbors(x);
      const auto cs = net.conductances(x);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (nb[k] == ground_) continue;
        entries.emplace_back(rx, reduced(nb[k]), -cs[k]);
      }
    }
    Eigen::SparseMatrix<double> lap(static_cast<Eigen::Index>(n_ - 1),
                                    static_cast<Eigen::Index>(n_ - 1));
    lap.setFromTriplets(entries.begin(), entries.end());
    solver_.compute(lap);
    if (solver_.info() != Eigen::Success) throw Error("Laplacian factorization failed");
  }

  double resistance(std::size_t x, std::size_t y) const {
    if (x == y) return 0.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_ - 1));
    if (x != ground_) rhs[reduced(x)] += 1.0;
    if (y != ground_) rhs[reduced(y)] -= 1.0;
    const Eigen::VectorXd v = solver_.solve(rhs);
    const double vx = x == ground_ ? 0.0 : v[reduced(x)];
    const double vy = y == ground_ ? 0.0 : v[reduced(y)];
    return vx - vy;
  }

 private:
  Eigen::Index reduced(std::size_t x) const {
    return static_cast<Eigen::Index>(x < ground_ ? x : x - 1);
  }

  std::size_t n_;
  std::size_t ground_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

/// R(x, y) by a Laplacian solve with unit current injected at x and drawn at y.
inline double effective_resistance(const Network& net, std::size_t x, std::size_t y) {
  if (x == y) return 0.0;
  return ResistanceSolver(net, y).resistance(x, y);
}

inline double effective_resistance(const Network& net, const Vertex& x, const Vertex& y) {
  return effective_resistance(net, net.index_of(x), net.index_of(y));
}

/// R(x, y) on a network whose edges are the parent-child pairs of a tree:
/// the sum of edge resistances along the labelled tree path.
inline double tree_path_resistance(const Network& net, const Vertex& x, const Vertex& y) {
  const Vertex top = lca(x, y);
  double r = 0.0;
  for (Vertex v : {x, y}) {
    while (v.depth > top.depth) {
      const Vertex up = v.parent();
      const double c = net.conductance(net.index_of(v), net.index_of(up));
      if (c <= 0.0) throw DomainError("tree_path_resistance: missing tree edge");
      r += 1.0 / c;
      v = up;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Trace (Schur complement) onto a vertex subset

struct ReductionReport {
  std::vector<Vertex> kept;
  std::size_t eliminated = 0;
  std::size_t max_fill = 0;
  double residual_asymmetry = 0.0;
};

struct TraceOptions {
  /// Kept sets up to this size accumulate into a dense matrix.
  std::size_t dense_threshold = std::size_t{1} << 12;
  /// Conductances below clamp * max are dropped after reduction.
  double clamp = 1e-15;
};

/// The network on `keep` whose effective resistances equal those of `net`
/// between kept vertices. Non-kept vertices are eliminated deepest-first;
/// the result carries `new_measure` (indexed like `keep`) and lists vertices
/// in the order of `keep`.
inline Network trace_network(const Network& net, std::span<const std::size_t> keep,
                             std::vector<double> new_measure,
                             ReductionReport* report = nullptr,
                             const TraceOptions& options = {}) {
  const std::size_t n = net.size();
  const std::size_t kc = keep.size();
  if (kc == 0) throw DomainError("trace_network: keep set is empty");
  if (new_measure.size() != kc) throw DomainError("trace_network: measure size mismatch");

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> slot(n, none);
  for (std::size_t k = 0; k < kc; ++k) {
    if (keep[k] >= n) throw DomainError("trace_network: kept vertex out of range");
    if (slot[keep[k]] != none) throw DomainError("trace_network: duplicate kept vertex");
    slot[keep[k]] = static_cast<std::uint32_t>(k);
  }
  {
    const auto labels = net.component_labels();
    for (std::size_t k = 1; k < kc; ++k) {
      if (labels[keep[k]] != labels[keep[0]]) {
        throw DisconnectedError("trace_network: kept vertices span several components");
      }
    }
  }

  const bool dense = kc <= options.dense_threshold;
  std::vector<double> kk_dense;
  std::vector<std::unordered_map<std::uint32_t, double>> kk_sparse;
  if (dense) {
    kk_dense.assign(kc * kc, 0.0);
  } else {
    kk_sparse.resize(kc);
  }
  auto add_kept = [&](std::uint32_t a, std::uint32_t b, double w) {
    if (dense) {
      kk_dense[std::size_t{a} * kc + b] += w;
      kk_dense[std::size_t{b} * kc + a] += w;
    } else {
      kk_sparse[a][b] += w;
      kk_sparse[b][a] += w;
    }
  };

  // Rows of vertices still to be eliminated, keyed by original index.
  std::vector<std::unordered_map<std::uint32_t, double>> rows(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    const auto nb = net.neighbors(x);
    const auto cs = net.conductances(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto y = nb[k];
      if (slot[x] != none && slot[y] != none) {
        if (x < y) add_kept(slot[x], slot[y], cs[k]);
      } else if (slot[x] == none) {
        rows[x][y] += cs[k];
      }
    }
  }

  std::vector<std::uint32_t> order;
  order.reserve(n - kc);
  for (std::uint32_t x = 0; x < n; ++x) {
    if (slot[x] == none) order.push_back(x);
  }
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return net.vertex(a).depth > net.vertex(b).depth;
  });

  std::size_t max_fill = 0;
  std::vector<std::pair<std::uint32_t, double>> star;
  for (const auto v : order) {
    star.assign(rows[v].begin(), rows[v].end());
    std::sort(star.begin(), star.end());
    rows[v].clear();
    max_fill = std::max(max_fill, star.size());
    double total = 0.0;
    for (const auto& [u, c] : star) total += c;
    for (const auto& [u, c] : star) {
      if (slot[u] == none) rows[u].erase(v);
    }
    if (total <= 0.0) continue;
    for (std::size_t a = 0; a < star.size(); ++a) {
      const auto [ua, ca] = star[a];
      for (std::size_t b = a + 1; b < star.size(); ++b) {
        const auto [ub, cb] = star[b];
        const double w = ca * cb / total;
        if (slot[ua] != none && slot[ub] != none) {
          add_kept(slot[ua], slot[ub], w);
        } else {
          if (slot[ua] == none) rows[ua][ub] += w;
          if (slot[ub] == none) rows[ub][ua] += w;
        }
      }
    }
  }

  std::vector<Triplet> edges;
  double cmax = 0.0;
  double asym = 0.0;
  if (dense) {
    for (std::size_t a = 0; a < kc; ++a) {
      for (std::size_t b = a + 1; b < kc; ++b) {
        const double cab = kk_dense[a * kc + b];
        const double cba = kk_dense[b * kc + a];
        cmax = std::max(cmax, std::max(cab, cba));
        asym = std::max(asym, std::abs(cab - cba));
      }
    }
    for (std::size_t a = 0; a < kc; ++a) {
      for (std::size_t b = a + 1; b < kc; ++b) {
        const double c = 0.5 * (kk_dense[a * kc + b] + kk_dense[b * kc + a]);
        if (c > options.clamp * cmax) {
          edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), c});
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < kc; ++a) {
      for (const auto& [b, c] : kk_sparse[a]) {
        cmax = std::max(cmax, c);
        const auto it = kk_sparse[b].find(static_cast<std::uint32_t>(a));
        const double back = it == kk_sparse[b].end() ? 0.0 : it->second;
        asym = std::max(asym, std::abs(c - back));
      }
    }
    for (std::size_t a = 0; a < kc; ++a) {
      for (const auto& [b, c] : kk_sparse[a]) {
        if (b <= a) continue;
        const double sym = 0.5 * (c + kk_sparse[b].at(static_cast<std::uint32_t>(a)));
        if (sym > options.clamp * cmax) edges.push_back({static_cast<std::uint32_t>(a), b, sym});
      }
    }
  }

  std::vector<Vertex> labels;
  labels.reserve(kc);
  for (auto k : keep) labels.push_back(net.vertex(k));
  if (report != nullptr) {
    report->kept = labels;
    report->eliminated = n - kc;
    report->max_fill = max_fill;
    report->residual_asymmetry = cmax > 0.0 ? asym / cmax : 0.0;
  }
  return Network(std::move(labels), edges, std::move(new_measure));
}

/// Trace onto labelled vertices, restricting the measure of `net`.
inline Network trace_network(const Network& net, std::span<const Vertex> keep,
                             ReductionReport* report = nullptr) {
  std::vector<std::size_t> idx;
  std::vector<double> measure;
  idx.reserve(keep.size());
  for (const auto& v : keep) {
    idx.push_back(net.index_of(v));
    measure.push_back(net.measure(idx.back()));
  }
  return trace_network(net, idx, std::move(measure), report);
}

/// The chain X-bar^n: T_n traced onto Sigma-bar_n with mu_n restricted.
inline Network build_bar_network(const Params& p, std::optional<int> level = std::nullopt) {
  const auto tree = build_tree_network(p);
  const auto keep = bar_sigma(p.depth(), level.value_or(bar_level(p.depth())));
  return trace_network(tree, keep);
}

// ---------------------------------------------------------------------------
// Exact oracles for the continuous-time chain

/// Expected hitting times E_x tau_target for every x, from the linear system
/// sum_y c(x,y) (h(x) - h(y)) = nu({x}) off the target, h(target) = 0.
inline std::vector<double> expected_hitting_times(const Network& net, std::size_t target) {
  const std::size_t n = net.size();
  if (target >= n) throw DomainError("hitting target out of range");
  if (!net.connected()) throw DisconnectedError("hitting times need a connected network");
  std::vector<double> h(n, 0.0);
  if (n == 1) return h;
  auto red = [&](std::size_t x) { return static_cast<Eigen::Index>(x < target ? x : x - 1); };
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n - 1));
  for (std::size_t x = 0; x < n; ++x) {
    if (x == target) continue;
    entries.emplace_back(red(x), red(x), net.row_sum(x));
    const auto nb = net.neighbors(x);
    const auto cs = net.conductances(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] != target) entries.emplace_back(red(x), red(nb[k]), -cs[k]);
    }
    rhs[red(x)] = net.measure(x);
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1));
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) throw Error("hitting-time system is singular");
  const Eigen::VectorXd sol = solver.solve(rhs);
  for (std::size_t x = 0; x < n; ++x) {
    if (x != target) h[x] = sol[red(x)];
  }
  return h;
}

inline double expected_hitting_time(const Network& net, std::size_t start, std::size_t target) {
  if (start == target) return 0.0;
  return expected_hitting_times(net, target)[start];
}

/// Max relative deviation from E_x tau_y + E_y tau_x = R(x,y) nu(V) over the
/// given pairs. Requires nu to be the conductance row sums.
inline double commute_identity_check(const Network& net,
                                     std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (!net.measure_is_row_sum()) {
    throw DomainError("commute identity needs measure equal to conductance row sums");
  }
  const double total = net.total_measure();
  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    if (x == y) continue;
    const double commute = expected_hitting_time(net, x, y) + expected_hitting_time(net, y, x);
    const double rhs = effective_resistance(net, x, y) * total;
    worst = std::max(worst, std::abs(commute - rhs) / rhs);
  }
  return worst;
}

inline constexpr std::size_t kExactCoverCap = 16;

/// Exact E tau_cov from `start`, by solving one linear system per visited set
/// (in decreasing order of the set) over states (current vertex, visited set).
inline double exact_expected_cover_time(const Network& net, std::size_t start,
                                        std::size_t cap = kExactCoverCap) {
  const std::size_t n = net.size();
  if (n > cap || n > 20) {
    throw CapacityError("exact cover time is limited to " + std::to_string(std::min<std::size_t>(cap, 20)) +
                        " vertices; use Monte Carlo for larger networks");
  }
  if (start >= n) throw DomainError("start vertex out of range");
  if (n == 1) return 0.0;
  if (!net.connected()) throw DisconnectedError("cover time needs a connected network");

  Eigen::MatrixXd jump = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> mean_hold(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto nb = net.neighbors(x);
    const auto cs = net.conductances(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      jump(static_cast<Eigen::Index>(x), nb[k]) = cs[k] / net.row_sum(x);
    }
    mean_hold[x] = net.measure(x) / net.row_sum(x);
  }

  const std::uint32_t full = (std::uint32_t{1} << n) - 1u;
  // value[S * n + v]: expected remaining time at v having visited S.
  std::vector<double> value(std::size_t{full + 1} * n, 0.0);
  std::vector<std::size_t> members;
  for (std::uint32_t s = full - 1; s >= 1; --s) {
    members.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (s & (1u << v)) members.push_back(v);
    }
    const auto k = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd b(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto v = members[static_cast<std::size_t>(r)];
      double rhs = mean_hold[v];
      for (std::size_t u = 0; u < n; ++u) {
        const double p = jump(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
        if (p == 0.0) continue;
        if (s & (1u << u)) {
          const auto c = std::find(members.begin(), members.end(), u) - members.begin();
          a(r, c) -= p;
        } else {
          rhs += p * value[std::size_t{s | (1u << u)} * n + u];
        }
      }
      b[r] = rhs;
    }
    const Eigen::VectorXd sol = a.partialPivLu().solve(b);
    for (Eigen::Index r = 0; r < k; ++r) {
      value[std::size_t{s} * n + members[static_cast<std::size_t>(r)]] = sol[r];
    }
  }
  return value[(std::size_t{1} << start) * n + start];
}

}  // namespace treecover

#endif  // TREECOVER_NETWORK_HPP
