#ifndef TREECOVER_ANALYSIS_HPP
#define TREECOVER_ANALYSIS_HPP

// Empirical distributions, Kolmogorov-Smirnov statistics, L^p norms with
// jackknife errors, log-linear growth fits and the regime table.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treecover/error.hpp"
#include "treecover/limit_process.hpp"
#include "treecover/tree_core.hpp"

namespace treecover {

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values, std::string tag = {})
      : values_(std::move(values)), tag_(std::move(tag)) {
    if (values_.empty()) throw DomainError("empirical distribution needs at least one value");
    for (double v : values_) {
      if (std::isnan(v)) throw DomainError("NaN in sample");
    }
    std::sort(values_.begin(), values_.end());
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::string& tag() const { return tag_; }

  /// P-hat(X <= x).
  double cdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
  }

  /// Order statistic at ceil(q N), q in (0, 1].
  double quantile(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("quantile level outside (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values_.size())));
    return values_[std::max<std::size_t>(k, 1) - 1];
  }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  /// Standard error of the mean.
  double std_error() const {
    const std::size_t n = values_.size();
    if (n < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : values_) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }

 private:
  std::vector<double> values_;
  std::string tag_;
};

namespace detail {

/// Signed sup_x (F_a(x) - F_b(x)) and inf over the merged order statistics;
/// tied values advance both sides before the gap is read.
inline std::pair<double, double> ks_extremes(const EmpiricalDistribution& a,
                                             const EmpiricalDistribution& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double hi = 0.0;
  double lo = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    const double gap = static_cast<double>(i) / na - static_cast<double>(j) / nb;
    hi = std::max(hi, gap);
    lo = std::min(lo, gap);
  }
  return {hi, lo};
}

}  // namespace detail

/// sup_x |F_a(x) - F_b(x)|.
inline double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto [hi, lo] = detail::ks_extremes(a, b);
  return std::max(hi, -lo);
}

/// sup_x (F_a(x) - F_b(x))^+: how far a's CDF rises above b's.
inline double ks_one_sided(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return detail::ks_extremes(a, b).first;
}

/// Asymptotic two-sample critical value c(alpha) sqrt((n+m)/(n m)) with
/// c(alpha) = sqrt(-ln(alpha/2)/2).
inline double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha outside (0, 1)");
  if (n == 0 || m == 0) throw DomainError("critical value needs nonempty samples");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

/// Pre-registered comparison tolerance: 2.2 times the 1% critical value.
inline double ks_tolerance(std::size_t n, std::size_t m) { return 2.2 * ks_critical_value(0.01, n, m); }

struct NormEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// (mean |x|^p)^{1/p} with a leave-one-out jackknife standard error.
inline NormEstimate p_norm(const EmpiricalDistribution& dist, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p-norm needs finite p >= 1");
  const auto& v = dist.values();
  const std::size_t n = v.size();
  std::vector<double> pw(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pw[i] = std::pow(std::abs(v[i]), p);
    total += pw[i];
  }
  NormEstimate out;
  out.value = std::pow(total / static_cast<double>(n), 1.0 / p);
  if (n < 2) return out;
  std::vector<double> loo(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = std::pow(std::max(total - pw[i], 0.0) / static_cast<double>(n - 1), 1.0 / p);
    mean += loo[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : loo) ss += (t - mean) * (t - mean);
  out.std_error = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss);
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs >= 2 paired points");
  const double k = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("linear fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.rms_residual = std::sqrt(rss / k);
  return f;
}

// ---------------------------------------------------------------------------
// Regimes

enum class Regime { below_one, one, between, two, above_two };

inline Regime classify(double lambda) {
  constexpr double eps = 1e-12;
  if (lambda < 1.0 - eps) return Regime::below_one;
  if (lambda <= 1.0 + eps) return Regime::one;
  if (lambda < 2.0 - eps) return Regime::between;
  if (lambda <= 2.0 + eps) return Regime::two;
  return Regime::above_two;
}

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::below_one: return "lambda<1";
    case Regime::one: return "lambda=1";
    case Regime::between: return "1<lambda<2";
    case Regime::two: return "lambda=2";
    case Regime::above_two: return "lambda>2";
  }
  return "";
}

/// Growth orders per regime, as (geometric log-rate, power of n).
struct GrowthOrder {
  double log_rate = 0.0;
  int n_power = 0;
};

struct RegimePrediction {
  GrowthOrder diameter;
  GrowthOrder conductance;
  GrowthOrder cover;
};

inline RegimePrediction predicted_growth(double lambda) {
  const double l = std::log(lambda);
  const double l2 = std::log(2.0);
  switch (classify(lambda)) {
    case Regime::below_one: return {{0.0, 0}, {l2 - l, 0}, {l2 - l, 0}};
    case Regime::one: return {{0.0, 1}, {l2 - l, 0}, {l2, 2}};
    case Regime::between: return {{l, 0}, {l2 - l, 0}, {l2, 1}};
    case Regime::two: return {{l, 0}, {0.0, 1}, {l2, 2}};
    case Regime::above_two: return {{l, 0}, {0.0, 0}, {l, 1}};
  }
  return {};
}

/// exp of the predicted geometric cover-time rate.
inline double predicted_cover_base(double lambda) { return std::exp(predicted_growth(lambda).cover.log_rate); }

/// Largest pairwise resistance on T_n: leaf to leaf through the root.
inline double resistance_diameter(const Params& p) {
  return 2.0 * edge_length_sum(p, 0, static_cast<std::uint32_t>(p.depth()));
}

/// Slope of log(q_n / n^power) against n.
inline double geometric_rate(std::span<const int> depths, std::span<const double> values, int n_power) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("growth fit needs positive values");
    x.push_back(depths[i]);
    y.push_back(std::log(values[i]) - n_power * std::log(static_cast<double>(depths[i])));
  }
  return linear_fit(x, y).slope;
}

/// Mean cover time of X^n from the root.
inline double mean_cover_time(const Params& p, std::size_t samples, std::uint64_t seed, unsigned workers) {
  const auto runs = sample_raw_cover(p, samples, seed, workers);
  double m = 0.0;
  for (const auto& r : runs) m += r.tau;
  return m / static_cast<double>(samples);
}

struct RegimeRow {
  double lambda = 0.0;
  Regime regime = Regime::below_one;
  double rate_diameter = 0.0;
  double rate_conductance = 0.0;
  double rate_cover = 0.0;
  RegimePrediction predicted;
  bool diameter_ok = false;
  bool conductance_ok = false;
  bool cover_ok = false;
};

struct RegimeOptions {
  std::vector<int> exact_depths{4, 5, 6, 7, 8, 9};
  std::vector<int> cover_depths{5, 6, 7, 8, 9};
  std::size_t cover_samples = 200;
  std::uint64_t seed = 1;
  double exact_tolerance = 0.1;
  double cover_tolerance = 0.15;
  unsigned workers = 0;
};

/// Per-lambda log-rates after dividing out the polynomial factor listed for
/// the regime, so only the geometric factor is regressed.
inline std::vector<RegimeRow> regime_table(std::span<const double> lambdas, const RegimeOptions& opt = {}) {
  if (opt.exact_depths.size() < 4 || opt.cover_depths.size() < 4) {
    throw DomainError("regime table needs depth ranges of at least 4 levels");
  }
  std::vector<RegimeRow> rows;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double lambda = lambdas[li];
    RegimeRow row;
    row.lambda = lambda;
    row.regime = classify(lambda);
    row.predicted = predicted_growth(lambda);
    std::vector<double> diam;
    std::vector<double> cond;
    for (int n : opt.exact_depths) {
      const Params p(lambda, n);
      diam.push_back(resistance_diameter(p));
      cond.push_back(total_conductance(p));
    }
    std::vector<double> cover;
    for (int n : opt.cover_depths) {
      cover.push_back(mean_cover_time(Params(lambda, n), opt.cover_samples,
                                      opt.seed + 1000003ull * li + static_cast<std::uint64_t>(n),
                                      opt.workers));
    }
    row.rate_diameter = geometric_rate(opt.exact_depths, diam, row.predicted.diameter.n_power);
    row.rate_conductance = geometric_rate(opt.exact_depths, cond, row.predicted.conductance.n_power);
    row.rate_cover = geometric_rate(opt.cover_depths, cover, row.predicted.cover.n_power);
    row.diameter_ok = std::abs(row.rate_diameter - row.predicted.diameter.log_rate) <= opt.exact_tolerance;
    row.conductance_ok =
        std::abs(row.rate_conductance - row.predicted.conductance.log_rate) <= opt.exact_tolerance;
    row.cover_ok = std::abs(row.rate_cover - row.predicted.cover.log_rate) <= opt.cover_tolerance;
    rows.push_back(row);
  }
  return rows;
}

struct GrowthPoint {
  double lambda = 0.0;
  /// exp of the fitted geometric cover-time rate.
  double base = 0.0;
  double predicted = 0.0;
  std::vector<int> depths;
};

struct GrowthOptions {
  /// Cap on predicted_cover_base(lambda)^n for the deepest level used.
  double budget = 2e7;
  int max_depth = 9;
  int levels = 5;
  std::size_t samples = 200;
  std::uint64_t seed = 2;
  unsigned workers = 0;
};

/// The geometric growth rate exp(lim n^{-1} log E tau) per lambda, fitted on
/// the deepest window of `levels` depths that fits the budget.
inline std::vector<GrowthPoint> growth_rate_plot_data(std::span<const double> lambdas,
                                                      const GrowthOptions& opt = {}) {
  std::vector<GrowthPoint> out;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const double lambda = lambdas[li];
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    const double base = predicted_cover_base(lambda);
    int top = opt.max_depth;
    while (top > opt.levels && std::pow(base, top) > opt.budget) --top;
    GrowthPoint g;
    g.lambda = lambda;
    g.predicted = base;
    std::vector<double> means;
    for (int n = std::max(1, top - opt.levels + 1); n <= top; ++n) {
      g.depths.push_back(n);
      means.push_back(mean_cover_time(Params(lambda, n), opt.samples,
                                      opt.seed + 1000003ull * li + static_cast<std::uint64_t>(n),
                                      opt.workers));
    }
    g.base = std::exp(geometric_rate(g.depths, means, predicted_growth(lambda).cover.n_power));
    out.push_back(g);
  }
  return out;
}

}  // namespace treecover

#endif  // TREECOVER_ANALYSIS_HPP
