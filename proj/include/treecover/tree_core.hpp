#ifndef TREECOVER_TREE_CORE_HPP
#define TREECOVER_TREE_CORE_HPP

// Binary-word addressing for the vertices of the infinite binary tree, the
// edge-length metric d (edge below depth m has length lambda^m), the
// eventually-zero boundary points, and the vertex/boundary measures used by
// the walks on T_n.

#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treecover/error.hpp"

namespace treecover {

inline constexpr int kDefaultMaxDepth = 30;

/// A vertex of the binary tree: the word (i_1,...,i_m) packed with i_1 as the
/// most significant of `depth` bits. The root is (0, 0).
struct Vertex {
  std::uint32_t depth = 0;
  std::uint32_t word = 0;

  constexpr Vertex() = default;
  constexpr Vertex(std::uint32_t d, std::uint32_t w) : depth(d), word(w) {
    if (d > 31 || (d < 32 && w >= (std::uint64_t{1} << d))) {
      throw DomainError("Vertex word does not fit in its depth");
    }
  }

  static constexpr Vertex root() { return {}; }

  constexpr bool is_root() const { return depth == 0; }

  constexpr Vertex parent() const {
    if (depth == 0) throw DomainError("root has no parent");
    return {depth - 1, word >> 1};
  }

  constexpr Vertex child(unsigned bit) const {
    return {depth + 1, (word << 1) | (bit & 1u)};
  }

  /// Bit i_k for k in [1, depth].
  constexpr unsigned bit(std::uint32_t k) const {
    return (word >> (depth - k)) & 1u;
  }

  /// Ancestor at depth m <= depth.
  constexpr Vertex ancestor(std::uint32_t m) const {
    if (m > depth) throw DomainError("ancestor deeper than vertex");
    return {m, m == 0 ? 0u : word >> (depth - m)};
  }

  /// Breadth-first (heap) index: 2^depth - 1 + word.
  constexpr std::uint32_t heap_index() const {
    return ((std::uint32_t{1} << depth) - 1u) + word;
  }

  static constexpr Vertex from_heap_index(std::uint32_t id) {
    const auto d = static_cast<std::uint32_t>(std::bit_width(id + 1u) - 1);
    return {d, id + 1u - (std::uint32_t{1} << d)};
  }

  constexpr bool is_ancestor_of(const Vertex& other) const {
    return depth <= other.depth && other.ancestor(depth).word == word;
  }

  friend constexpr bool operator==(const Vertex&, const Vertex&) = default;
  friend constexpr auto operator<=>(const Vertex& a, const Vertex& b) {
    if (auto c = a.depth <=> b.depth; c != 0) return c;
    return a.word <=> b.word;
  }
};

/// A boundary point i(0,0,0,...) represented by its finite prefix i.
struct LeafAddress {
  Vertex prefix;

  /// The same boundary point written with a prefix of depth m >= prefix depth.
  constexpr Vertex padded(std::uint32_t m) const {
    if (m < prefix.depth) throw DomainError("padding depth below prefix depth");
    if (m > 31) throw DomainError("padding depth too large");
    return {m, prefix.word << (m - prefix.depth)};
  }

  /// Shortest prefix that names the same boundary point.
  constexpr LeafAddress canonical() const {
    Vertex v = prefix;
    while (v.depth > 0 && (v.word & 1u) == 0) v = v.parent();
    return {v};
  }

  friend constexpr bool operator==(const LeafAddress& a, const LeafAddress& b) {
    const auto ca = a.canonical().prefix;
    const auto cb = b.canonical().prefix;
    return ca == cb;
  }
};

/// Edge-length parameter lambda and tree depth n, with cached powers of
/// lambda up to the configured maximum depth.
class Params {
 public:
  Params(double lambda, int depth, int max_depth = kDefaultMaxDepth)
      : lambda_(lambda), depth_(depth), max_depth_(max_depth) {
    if (!std::isfinite(lambda) || lambda <= 0.0) {
      throw DomainError("lambda must be finite and positive");
    }
    if (max_depth < 0 || max_depth > 30) {
      throw DomainError("max_depth must lie in [0, 30]");
    }
    if (depth < 0 || depth > max_depth) {
      throw DomainError("depth must lie in [0, max_depth]");
    }
    powers_.resize(static_cast<std::size_t>(max_depth) + 2);
    powers_[0] = 1.0;
    for (std::size_t m = 1; m < powers_.size(); ++m) powers_[m] = powers_[m - 1] * lambda;
  }

  double lambda() const { return lambda_; }
  int depth() const { return depth_; }
  int max_depth() const { return max_depth_; }

  /// lambda^m, the length of an edge from depth m to depth m+1.
  double edge_length(std::uint32_t m) const {
    if (m < powers_.size()) return powers_[m];
    return std::pow(lambda_, static_cast<double>(m));
  }

  /// lambda^{-m}, the conductance of an edge from depth m to depth m+1.
  double edge_conductance(std::uint32_t m) const { return 1.0 / edge_length(m); }

  Params with_depth(int n) const { return Params(lambda_, n, max_depth_); }

 private:
  double lambda_;
  int depth_;
  int max_depth_;
  std::vector<double> powers_;
};

/// Deepest common ancestor.
constexpr Vertex lca(Vertex x, Vertex y) {
  if (x.depth > y.depth) std::swap(x, y);
  const std::uint32_t m = x.depth;
  const std::uint32_t a = x.word;
  const std::uint32_t b = m == 0 ? 0u : (y.word >> (y.depth - m));
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return {m, a};
  const auto w = static_cast<std::uint32_t>(std::bit_width(diff));
  return {m - w, a >> w};
}

/// Sum of lambda^j for j in [from, to), accumulated from the small end.
inline double edge_length_sum(const Params& p, std::uint32_t from, std::uint32_t to) {
  double s = 0.0;
  for (std::uint32_t j = to; j > from; --j) s += p.edge_length(j - 1);
  return s;
}

/// Length of the tree path x -> lca -> y.
inline double metric_d(const Vertex& x, const Vertex& y, const Params& p) {
  const Vertex a = lca(x, y);
  return edge_length_sum(p, a.depth, x.depth) + edge_length_sum(p, a.depth, y.depth);
}

/// lambda^n / (1 - lambda): bounds d(x, y) for every y below a depth-n vertex x.
inline double boundary_distance_bound(std::uint32_t n, const Params& p) {
  if (p.lambda() >= 1.0) throw DomainError("boundary_distance_bound needs lambda < 1");
  return p.edge_length(n) / (1.0 - p.lambda());
}

inline double boundary_distance_bound(const Vertex& x, const Params& p) {
  return boundary_distance_bound(x.depth, p);
}

/// mu_n({x}): the sum of conductances of edges of T_n incident to x.
inline double mu_n_vertex(const Vertex& x, const Params& p) {
  const auto n = static_cast<std::uint32_t>(p.depth());
  if (x.depth > n) throw DomainError("mu_n_vertex: vertex deeper than n");
  if (n == 0) return 0.0;
  if (x.depth == 0) return 2.0;
  if (x.depth == n) return p.edge_conductance(n - 1);
  return p.edge_conductance(x.depth - 1) + 2.0 * p.edge_conductance(x.depth);
}

/// b_n = mu_n(T_n) in closed form, 4 lambda / (2 - lambda) ((2/lambda)^n - 1).
inline double b_n(const Params& p) {
  const double l = p.lambda();
  if (l == 2.0) throw DomainError("b_n closed form is singular at lambda = 2");
  const double n = static_cast<double>(p.depth());
  return 4.0 * l / (2.0 - l) * (std::pow(2.0 / l, n) - 1.0);
}

/// mu_n(T_n) by direct summation, valid for every lambda > 0.
inline double total_conductance(const Params& p) {
  double s = 0.0;
  for (int m = p.depth(); m >= 1; --m) {
    s += std::ldexp(p.edge_conductance(static_cast<std::uint32_t>(m - 1)), m);
  }
  return 2.0 * s;
}

/// mu_Sigma(Sigma(i)) = 2^{-depth(i)}.
inline double mu_sigma_cylinder(const Vertex& i) {
  return std::ldexp(1.0, -static_cast<int>(i.depth));
}

/// Mass of mu_T carried by one edge from depth m to m+1.
inline double mu_t_edge_mass(std::uint32_t m, const Params& p) {
  const double l = p.lambda();
  return (1.0 / l - 1.0) * std::pow(2.0 / l, -static_cast<double>(m) - 1.0);
}

/// Closed interval [lo, hi] of the middle-thirds Cantor set.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Image of a boundary point under i -> lim psi_{i_1} o ... o psi_{i_m}(0):
/// the ternary expansion with digits 2 i_k.
inline double cantor_embed(const LeafAddress& a) {
  double x = 0.0;
  double scale = 1.0 / 3.0;
  for (std::uint32_t k = 1; k <= a.prefix.depth; ++k) {
    if (a.prefix.bit(k) != 0u) x += 2.0 * scale;
    scale /= 3.0;
  }
  return x;
}

/// Image of the cylinder Sigma(i): an interval of length 3^{-depth(i)}.
inline Interval cantor_embed(const Vertex& prefix) {
  const double lo = cantor_embed(LeafAddress{prefix});
  return {lo, lo + std::pow(3.0, -static_cast<double>(prefix.depth))};
}

/// Exponent c = -log(2/lambda)/log(lambda) of the covering-number bound.
inline double covering_exponent(const Params& p) {
  const double l = p.lambda();
  if (l >= 1.0) throw DomainError("covering_exponent needs lambda < 1");
  return -std::log(2.0 / l) / std::log(l);
}

/// Depth used by covering_bound: the smallest n with lambda^n/(1-lambda) <= eps.
inline std::uint32_t covering_depth(double eps, const Params& p) {
  if (!(eps > 0.0)) throw DomainError("covering_bound needs eps > 0");
  std::uint32_t n = 0;
  while (boundary_distance_bound(n, p) > eps) {
    ++n;
    if (n > 1023) throw DomainError("covering_bound: eps too small");
  }
  return n;
}

/// Number of eps-balls sufficient to cover (T, d): 2^n (lambda^{-n} + 2) at
/// the covering depth n.
inline double covering_bound(double eps, const Params& p) {
  const std::uint32_t n = covering_depth(eps, p);
  const double dn = static_cast<double>(n);
  return std::pow(2.0, dn) * (std::pow(p.lambda(), -dn) + 2.0);
}

/// All vertices of T_n in heap order.
inline std::vector<Vertex> tree_vertices(int n) {
  std::vector<Vertex> out;
  out.reserve((std::size_t{1} << (n + 1)) - 1);
  for (std::uint32_t d = 0; d <= static_cast<std::uint32_t>(n); ++d) {
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << d); ++w) out.emplace_back(d, w);
  }
  return out;
}

/// Sigma_m: the vertices at depth m.
inline std::vector<Vertex> level_vertices(std::uint32_t m) {
  std::vector<Vertex> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << m); ++w) out.emplace_back(m, w);
  return out;
}

inline std::string to_string(const Vertex& v) {
  if (v.depth == 0) return "\xE2\x88\x85";  // U+2205 EMPTY SET
  std::string s(v.depth, '0');
  for (std::uint32_t k = 1; k <= v.depth; ++k) s[k - 1] = v.bit(k) ? '1' : '0';
  return s;
}

inline std::string to_string(const LeafAddress& a) { return to_string(a.prefix) + "|0*"; }

inline Vertex parse_vertex(std::string_view s) {
  if (s == "e" || s == "\xE2\x88\x85") return Vertex::root();
  if (s.empty() || s.size() > 30) throw SchemaError("bad vertex text: '" + std::string(s) + "'");
  std::uint32_t w = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw SchemaError("bad vertex text: '" + std::string(s) + "'");
    w = (w << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return {static_cast<std::uint32_t>(s.size()), w};
}

inline LeafAddress parse_leaf_address(std::string_view s) {
  constexpr std::string_view tail = "|0*";
  if (s.size() < tail.size() || s.substr(s.size() - tail.size()) != tail) {
    throw SchemaError("bad leaf address text: '" + std::string(s) + "'");
  }
  return {parse_vertex(s.substr(0, s.size() - tail.size()))};
}

}  // namespace treecover

template <>
struct std::hash<treecover::Vertex> {
  std::size_t operator()(const treecover::Vertex& v) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{v.depth} << 32) | v.word);
  }
};

#endif  // TREECOVER_TREE_CORE_HPP
