#ifndef TREECOVER_GAUSSIAN_HPP
#define TREECOVER_GAUSSIAN_HPP

// Centred Gaussian field on T_n with E(eta(x)-eta(y))^2 = d(x,y), its
// expected supremum, a chaining upper bound for gamma_2(T_n, sqrt d), and
// exponential tail fits for rescaled cover times.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "treecover/error.hpp"
#include "treecover/parallel.hpp"
#include "treecover/rng.hpp"
#include "treecover/tree_core.hpp"

namespace treecover {

/// Field values indexed by heap index; eta(root) = 0.
struct FieldSample {
  int n = 0;
  std::vector<double> values;

  double operator()(const Vertex& v) const { return values[v.heap_index()]; }
};

/// One N(0, lambda^m) increment per depth-m edge, accumulated in heap order.
/// Draws are consumed level by level, so the field on T_n is the restriction
/// of the field on T_{n+1} drawn from the same stream.
inline FieldSample sample_field(const Params& p, Stream& s) {
  const int n = p.depth();
  FieldSample f{n, std::vector<double>((std::size_t{2} << n) - 1, 0.0)};
  std::normal_distribution<double> normal;
  for (std::size_t id = 1; id < f.values.size(); ++id) {
    const auto d = static_cast<std::uint32_t>(std::bit_width(id + 1) - 1);
    f.values[id] = f.values[(id - 1) >> 1] + std::sqrt(p.edge_length(d - 1)) * normal(s);
  }
  return f;
}

struct Estimate {
  double lambda = 0.0;
  int n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// E sup_{T_m} eta for every m in `depths`, all read off the same fields (one
/// field on the deepest tree per sample), so estimates are pathwise monotone.
inline std::vector<Estimate> estimate_esup(double lambda, std::span<const int> depths,
                                           std::size_t samples, std::uint64_t seed,
                                           unsigned workers = 0) {
  if (samples < 100) throw DomainError("E sup estimation needs at least 100 samples");
  if (depths.empty()) return {};
  const int top = *std::max_element(depths.begin(), depths.end());
  const Params p(lambda, top);
  std::vector<std::vector<double>> sup(depths.size(), std::vector<double>(samples));
  parallel_for(samples, workers, [&](std::size_t i) {
    Stream s(seed, i);
    const auto f = sample_field(p, s);
    // Running maximum over T_m, level by level.
    std::vector<double> by_depth(static_cast<std::size_t>(top) + 1);
    double running = 0.0;
    for (int m = 0; m <= top; ++m) {
      const std::size_t lo = (std::size_t{1} << m) - 1;
      const std::size_t hi = (std::size_t{2} << m) - 1;
      for (std::size_t id = lo; id < hi; ++id) running = std::max(running, f.values[id]);
      by_depth[static_cast<std::size_t>(m)] = running;
    }
    for (std::size_t k = 0; k < depths.size(); ++k) {
      sup[k][i] = by_depth[static_cast<std::size_t>(depths[k])];
    }
  });
  std::vector<Estimate> out;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    double mean = 0.0;
    for (double v : sup[k]) mean += v;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double v : sup[k]) var += (v - mean) * (v - mean);
    var /= static_cast<double>(samples - 1);
    out.push_back({lambda, depths[k], mean, std::sqrt(var / static_cast<double>(samples)), samples, seed});
  }
  return out;
}

inline Estimate estimate_esup(const Params& p, std::size_t samples, std::uint64_t seed,
                              unsigned workers = 0) {
  const int depth[] = {p.depth()};
  return estimate_esup(p.lambda(), depth, samples, seed, workers).front();
}

// ---------------------------------------------------------------------------
// Chaining

/// Allowed size of C_k.
using NetBudget = std::function<double(int k)>;

inline double default_net_budget(int k) { return std::exp2(std::exp2(static_cast<double>(k))); }

/// Depths m_k of the nets C_k = T_{m_k}: C_0 is the root, and for k >= 1,
/// m_k is the deepest level with |T_m| = 2^{m+1}-1 within the budget, capped
/// at n. The sequence stops at the first k with m_k = n.
inline std::vector<int> net_depths(int n, const NetBudget& budget = default_net_budget) {
  std::vector<int> out{0};
  if (n == 0) return out;
  for (int k = 1; out.back() < n; ++k) {
    const double b = budget(k);
    int m = out.back();
    while (m < n && std::exp2(m + 2) - 1.0 <= b) ++m;
    out.push_back(m);
    if (k > 4096) throw DomainError("net budget does not grow");
  }
  return out;
}

/// sup_x sum_k 2^{k/2} sqrt(d(x, C_k)) for the nets of net_depths. The
/// supremum sits at any leaf, where d(x, T_m) = sum_{j=m}^{n-1} lambda^j.
inline double gamma2_upper(const Params& p, const NetBudget& budget = default_net_budget) {
  const int n = p.depth();
  const auto depths = net_depths(n, budget);
  double total = 0.0;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    const auto m = static_cast<std::uint32_t>(depths[k]);
    total += std::sqrt(static_cast<double>(std::uint64_t{1} << k)) *
             std::sqrt(edge_length_sum(p, m, static_cast<std::uint32_t>(n)));
  }
  return total;
}

/// The chaining sum evaluated by brute force for explicit nets.
inline double chaining_sum(const Params& p, const std::vector<std::vector<Vertex>>& nets) {
  double best = 0.0;
  for (const auto& x : tree_vertices(p.depth())) {
    double sum = 0.0;
    for (std::size_t k = 0; k < nets.size(); ++k) {
      if (nets[k].empty()) throw DomainError("empty net");
      double dist = std::numeric_limits<double>::infinity();
      for (const auto& c : nets[k]) dist = std::min(dist, metric_d(x, c, p));
      sum += std::sqrt(std::ldexp(1.0, static_cast<int>(k))) * std::sqrt(dist);
    }
    best = std::max(best, sum);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exponential tails of cover times

struct TailFit {
  /// Fitted decay rate in P(tau >= u (2/lambda)^n) ~ C exp(-c u).
  double c = 0.0;
  double C = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
  /// Every grid point with its empirical exceedance and the fitted curve.
  std::vector<double> u;
  std::vector<double> exceedance;
  std::vector<double> fitted;
};

/// Fits log P-hat(U >= u) = log C - c u on the sample grid restricted to the
/// top 20% of u values with at least 10 exceedances.
inline TailFit concentration_tail_check(std::span<const double> taus, const Params& p) {
  const std::size_t N = taus.size();
  if (N < 1000) throw DomainError("tail fit needs at least 1000 samples");
  const double scale = std::pow(2.0 / p.lambda(), p.depth());
  std::vector<double> u(taus.begin(), taus.end());
  for (double& v : u) v /= scale;
  std::sort(u.begin(), u.end());
  TailFit fit;
  const double cutoff = u[static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(N)))];
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t j = 0; j < N; ++j) {
    if (j > 0 && u[j] == u[j - 1]) continue;
    const std::size_t count = N - j;  // samples >= u[j]
    const double pe = static_cast<double>(count) / static_cast<double>(N);
    fit.u.push_back(u[j]);
    fit.exceedance.push_back(pe);
    if (u[j] >= cutoff && count >= 10) {
      xs.push_back(u[j]);
      ys.push_back(std::log(pe));
    }
  }
  if (xs.size() < 3) {
    throw DomainError("insufficient tail mass for the fit; raise the sample count");
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("degenerate tail window");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  fit.c = -slope;
  fit.C = std::exp(intercept);
  fit.rms_residual = std::sqrt(rss / k);
  fit.points = xs.size();
  for (double v : fit.u) fit.fitted.push_back(std::min(1.0, fit.C * std::exp(-fit.c * v)));
  return fit;
}

/// sup_u |P-hat_a(U >= u) - P-hat_b(U >= u)| between two tail fits, taken
/// over the union of their grids.
inline double tail_band(const TailFit& a, const TailFit& b) {
  auto exceed = [](const TailFit& f, double x) {
    // first grid point >= x carries P-hat(U >= x)
    auto it = std::lower_bound(f.u.begin(), f.u.end(), x);
    if (it == f.u.end()) return 0.0;
    return f.exceedance[static_cast<std::size_t>(it - f.u.begin())];
  };
  double worst = 0.0;
  for (double x : a.u) worst = std::max(worst, std::abs(exceed(a, x) - exceed(b, x)));
  for (double x : b.u) worst = std::max(worst, std::abs(exceed(a, x) - exceed(b, x)));
  return worst;
}

}  // namespace treecover

#endif  // TREECOVER_GAUSSIAN_HPP
