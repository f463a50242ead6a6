// treecover: command-line front end for the cover-time experiments.
//
// Every command that writes an output file also writes <output>.manifest.ini,
// a config file that reproduces the run: `treecover --config <manifest>`.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treecover/analysis.hpp"
#include "treecover/gaussian.hpp"
#include "treecover/io.hpp"
#include "treecover/limit_process.hpp"
#include "treecover/network.hpp"
#include "treecover/svg.hpp"
#include "treecover/walk_sim.hpp"

namespace {

using namespace treecover;

constexpr const char* kToolVersion = "1.0.0";

/// Thrown for invalid argument combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_manifest(const CLI::App& sub, const std::string& output) {
  // Unset list options print as "{}", which does not parse back; leaving them
  // out keeps their defaults on replay.
  std::istringstream all(sub.config_to_str(true, false));
  std::string body = "[" + sub.get_name() + "]\n";
  for (std::string line; std::getline(all, line);) {
    if (!line.ends_with("=\"{}\"")) body += line + "\n";
  }
  std::ostringstream os;
  os << "; treecover experiment manifest\n"
     << "; tool_version=" << kToolVersion << "\n"
     << "; config_hash=" << hex64(fnv1a64(body)) << "\n"
     << body;
  write_text(output + ".manifest.ini", os.str());
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("depth range must look like a:b, got '" + s + "'");
  const int a = parse_int<int>(s.substr(0, colon));
  const int b = parse_int<int>(s.substr(colon + 1));
  if (a > b || a < 0) throw UsageError("depth range '" + s + "' is empty or negative");
  return {a, b};
}

std::vector<int> range_vector(std::pair<int, int> r) {
  std::vector<int> v(static_cast<std::size_t>(r.second - r.first + 1));
  std::iota(v.begin(), v.end(), r.first);
  return v;
}

void print_summary(std::span<const double> values, const char* what) {
  const EmpiricalDistribution dist(std::vector<double>(values.begin(), values.end()));
  const auto n1 = p_norm(dist, 1.0);
  const auto n2 = p_norm(dist, 2.0);
  std::printf("%s: samples=%zu mean=%.6g se=%.3g p1=%.6g (se %.3g) p2=%.6g (se %.3g)\n", what, dist.size(),
              dist.mean(), dist.std_error(), n1.value, n1.std_error, n2.value, n2.std_error);
}

std::vector<SampleRow> load_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  auto rows = read_samples_csv(in);
  if (rows.empty()) throw SchemaError("'" + path + "' has no samples");
  return rows;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  double lambda = 0.0;
  int depth = 0;
  std::string family = "raw";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::string out = "samples.csv";
  std::string records;
  int bar_level = -1;
};

void run_simulate(const SimulateArgs& a, const CLI::App& sub, unsigned workers) {
  const Family family = parse_family(a.family);
  const Params p(a.lambda, a.depth);
  std::vector<RunRecord> runs;
  int level = a.depth;
  switch (family) {
    case Family::raw:
      runs = sample_raw_cover(p, a.samples, a.seed, workers);
      break;
    case Family::tilde:
      runs = sample_tilde_cover(p, a.samples, a.seed, workers);
      break;
    case Family::bar:
      if (a.depth < 1) throw UsageError("the bar family needs --depth >= 1");
      level = a.bar_level >= 0 ? a.bar_level : bar_level(a.depth);
      if (level > a.depth) throw UsageError("--bar-level exceeds --depth");
      runs = sample_bar_cover(p, a.samples, a.seed, workers, level);
      break;
  }
  const bool rescalable = family == Family::tilde || a.lambda < 2.0;
  std::vector<SampleRow> rows;
  std::vector<double> taus;
  std::vector<double> rescaled;
  for (const auto& r : runs) {
    const double s = rescalable ? rescale_cover(r.tau, family, p).rescaled : std::nan("");
    rows.push_back({family, a.lambda, a.depth, level, a.seed, r.tau, s});
    taus.push_back(r.tau);
    rescaled.push_back(s);
  }
  {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw Error("cannot write '" + a.out + "'");
    write_samples_csv(out, rows);
  }
  if (!a.records.empty()) {
    std::ofstream out(a.records, std::ios::binary);
    if (!out) throw Error("cannot write '" + a.records + "'");
    write_run_records_csv(out, runs);
  }
  write_manifest(sub, a.out);
  std::printf("family=%s lambda=%g n=%d seed=%llu\n", a.family.c_str(), a.lambda, a.depth,
              static_cast<unsigned long long>(a.seed));
  if (!taus.empty()) {
    print_summary(taus, "tau");
    if (rescalable) print_summary(rescaled, "rescaled");
  }
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string a;
  std::string b;
  std::string column = "rescaled";
  double alpha = 0.01;
  double threshold = -1.0;
  std::string out;
  bool strict = false;
};

/// Returns true when the statistic is within the threshold.
bool run_compare(const CompareArgs& c, const CLI::App& sub) {
  if (c.column != "rescaled" && c.column != "tau") throw UsageError("--column is rescaled or tau");
  auto pick = [&](const std::vector<SampleRow>& rows) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(c.column == "tau" ? r.tau : r.rescaled);
    return EmpiricalDistribution(std::move(v));
  };
  const auto da = pick(load_samples(c.a));
  const auto db = pick(load_samples(c.b));
  const double ks = ks_two_sample(da, db);
  const double crit = ks_critical_value(c.alpha, da.size(), db.size());
  const double threshold = c.threshold > 0.0 ? c.threshold : ks_tolerance(da.size(), db.size());
  const bool pass = ks < threshold;
  std::printf("ks=%.6f critical(alpha=%g)=%.6f threshold=%.6f sizes=%zu,%zu %s\n", ks, c.alpha, crit,
              threshold, da.size(), db.size(), pass ? "PASS" : "FAIL");
  if (!c.out.empty()) {
    const nlohmann::json j{{"ks", ks},         {"alpha", c.alpha},       {"critical", crit},
                           {"threshold", threshold}, {"pass", pass},     {"size_a", da.size()},
                           {"size_b", db.size()},    {"column", c.column}};
    write_text(c.out, j.dump(2) + "\n");
    write_manifest(sub, c.out);
  }
  return pass || !c.strict;
}

// ---------------------------------------------------------------------------

struct LadderArgs {
  double lambda = 0.5;
  int depth = 10;
  std::vector<int> levels;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::string out = "ladder.csv";
  std::string svg;
};

void run_ladder(const LadderArgs& a, const CLI::App& sub, unsigned workers) {
  LadderSpec spec{a.lambda, a.depth, a.levels.empty() ? LadderSpec::default_levels(a.depth) : a.levels,
                  a.samples, a.seed};
  if (spec.levels.empty()) throw UsageError("no ladder levels: pass --levels or use --depth >= 4");
  const auto res = sample_limit_cover(spec, workers);
  std::vector<SampleRow> rows;
  for (std::size_t k = 0; k < res.levels.size(); ++k) {
    for (double t : res.tau[k]) rows.push_back({Family::tilde, a.lambda, a.depth, res.levels[k], a.seed, t, t});
  }
  {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw Error("cannot write '" + a.out + "'");
    write_samples_csv(out, rows);
  }
  const auto means = res.means();
  for (std::size_t k = 0; k < means.size(); ++k) {
    std::printf("level=%d mean=%.6g", res.levels[k], means[k]);
    if (k > 0) std::printf(" increment=%.6g", means[k] - means[k - 1]);
    std::printf("\n");
  }
  if (!a.svg.empty()) {
    Series s{"mean cover time", {}, means};
    for (int m : res.levels) s.x.push_back(m);
    PlotSpec ps{"nested cover times", "ladder level m", "mean cover time"};
    write_text(a.svg, render_svg(ps, std::span(&s, 1)));
  }
  write_manifest(sub, a.out);
}

// ---------------------------------------------------------------------------

struct GaussianArgs {
  double lambda = 0.5;
  int depth = 8;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string out = "esup.json";
  std::size_t tail_samples = 0;
  std::string tail_out;
};

void run_gaussian(const GaussianArgs& a, const CLI::App& sub, unsigned workers) {
  const Params p(a.lambda, a.depth);
  const auto est = estimate_esup(p, a.samples, a.seed, workers);
  auto j = estimate_to_json(est);
  j["gamma2_upper"] = gamma2_upper(p);
  if (a.tail_samples > 0) {
    if (a.tail_out.empty()) throw UsageError("--tail-samples needs --tail-out");
    const auto runs = sample_raw_cover(p, a.tail_samples, a.seed, workers);
    std::vector<double> taus;
    for (const auto& r : runs) taus.push_back(r.tau);
    const auto fit = concentration_tail_check(taus, p);
    std::ofstream out(a.tail_out, std::ios::binary);
    if (!out) throw Error("cannot write '" + a.tail_out + "'");
    write_tail_csv(out, fit);
    j["tail"] = {{"c", fit.c}, {"C", fit.C}, {"rms_residual", fit.rms_residual}, {"points", fit.points}};
  }
  write_text(a.out, j.dump(2) + "\n");
  write_manifest(sub, a.out);
  std::printf("%s\n", j.dump().c_str());
}

// ---------------------------------------------------------------------------

struct TableArgs {
  std::vector<double> lambdas{0.5, 1.0, 1.5, 2.0, 3.0};
  std::string depths = "4:9";
  std::string cover_depths = "5:9";
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string out = "table.csv";
  std::vector<double> growth_lambdas;
  std::string growth_out;
  std::string svg;
};

void run_table(const TableArgs& a, const CLI::App& sub, unsigned workers) {
  RegimeOptions opt;
  opt.exact_depths = range_vector(parse_range(a.depths));
  opt.cover_depths = range_vector(parse_range(a.cover_depths));
  opt.cover_samples = a.samples;
  opt.seed = a.seed;
  opt.workers = workers;
  if (opt.exact_depths.size() < 4 || opt.cover_depths.size() < 4) {
    throw UsageError("depth ranges must span at least 4 levels");
  }
  const auto rows = regime_table(a.lambdas, opt);
  std::ostringstream csv;
  write_csv_row(csv, std::vector<std::string>{"lambda", "regime", "rate_diameter", "predicted_diameter",
                                              "rate_conductance", "predicted_conductance", "rate_cover",
                                              "predicted_cover", "ok"});
  for (const auto& r : rows) {
    const bool ok = r.diameter_ok && r.conductance_ok && r.cover_ok;
    write_csv_row(csv, std::vector<std::string>{
                           format_double(r.lambda), to_string(r.regime), format_double(r.rate_diameter),
                           format_double(r.predicted.diameter.log_rate), format_double(r.rate_conductance),
                           format_double(r.predicted.conductance.log_rate), format_double(r.rate_cover),
                           format_double(r.predicted.cover.log_rate), ok ? "1" : "0"});
    std::printf("%-10s lambda=%-4g diameter=%.4f (%.4f) conductance=%.4f (%.4f) cover=%.4f (%.4f) %s\n",
                to_string(r.regime).c_str(), r.lambda, r.rate_diameter, r.predicted.diameter.log_rate,
                r.rate_conductance, r.predicted.conductance.log_rate, r.rate_cover,
                r.predicted.cover.log_rate, ok ? "ok" : "MISMATCH");
  }
  std::printf("note: log-rates are fitted after dividing out the polynomial-in-n factor of each regime\n");
  write_text(a.out, csv.str());
  if (!a.growth_lambdas.empty()) {
    if (a.growth_out.empty()) throw UsageError("--growth-lambdas needs --growth-out");
    GrowthOptions g;
    g.samples = a.samples;
    g.seed = a.seed + 1;
    g.workers = workers;
    const auto pts = growth_rate_plot_data(a.growth_lambdas, g);
    std::ostringstream gcsv;
    write_csv_row(gcsv, std::vector<std::string>{"lambda", "exp_rate", "predicted"});
    Series fitted{"fitted", {}, {}};
    Series predicted{"predicted", {}, {}};
    for (const auto& pt : pts) {
      write_csv_row(gcsv, std::vector<std::string>{format_double(pt.lambda), format_double(pt.base),
                                                   format_double(pt.predicted)});
      fitted.x.push_back(pt.lambda);
      fitted.y.push_back(pt.base);
      predicted.x.push_back(pt.lambda);
      predicted.y.push_back(pt.predicted);
    }
    write_text(a.growth_out, gcsv.str());
    if (!a.svg.empty()) {
      const Series both[] = {fitted, predicted};
      PlotSpec ps{"geometric growth rate of the cover time", "lambda", "exp(rate)", false, true};
      write_text(a.svg, render_svg(ps, both));
    }
  }
  write_manifest(sub, a.out);
}

// ---------------------------------------------------------------------------

struct TraceArgs {
  double lambda = 0.5;
  int depth = 5;
  double tolerance = 1e-9;
  std::string out;
};

/// Largest relative gap between resistances in `traced` and the tree metric.
double max_trace_deviation(const Network& traced, const Params& p) {
  double worst = 0.0;
  const ResistanceSolver solver(traced);
  for (std::size_t x = 0; x < traced.size(); ++x) {
    for (std::size_t y = x + 1; y < traced.size(); ++y) {
      const double want = metric_d(traced.vertex(x), traced.vertex(y), p);
      worst = std::max(worst, std::abs(solver.resistance(x, y) - want) / want);
    }
  }
  return worst;
}

bool run_trace_check(const TraceArgs& a, const CLI::App& sub) {
  if (a.depth < 1) throw UsageError("--depth must be >= 1");
  const Params p(a.lambda, a.depth);
  const auto tree = build_tree_network(p);
  const auto leaves = level_vertices(static_cast<std::uint32_t>(a.depth));
  const auto to_leaves = trace_network(tree, leaves);
  const auto bar = build_bar_network(p);
  const auto composed = trace_network(bar, leaves);
  double composed_gap = 0.0;
  for (const auto& t : to_leaves.triplets()) {
    const double c = composed.conductance(composed.index_of(to_leaves.vertex(t.i)),
                                          composed.index_of(to_leaves.vertex(t.j)));
    composed_gap = std::max(composed_gap, std::abs(c - t.value) / t.value);
  }
  const double d_leaves = max_trace_deviation(to_leaves, p);
  const double d_bar = max_trace_deviation(bar, p);
  const double worst = std::max({d_leaves, d_bar, composed_gap});
  const bool pass = worst <= a.tolerance;
  std::printf("depth=%d lambda=%g leaves=%.3e bar=%.3e composed=%.3e max=%.3e %s\n", a.depth, a.lambda,
              d_leaves, d_bar, composed_gap, worst, pass ? "PASS" : "FAIL");
  if (!a.out.empty()) {
    const nlohmann::json j{{"lambda", a.lambda},         {"depth", a.depth},       {"leaves", d_leaves},
                           {"bar", d_bar},               {"composed", composed_gap}, {"max", worst},
                           {"tolerance", a.tolerance},   {"pass", pass}};
    write_text(a.out, j.dump(2) + "\n");
    write_manifest(sub, a.out);
  }
  return pass;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  double lambda = 0.5;
  int depth = 1;
  std::string out;
};

void run_oracle(const OracleArgs& a, const CLI::App& sub) {
  if (a.depth < 1) throw UsageError("--depth must be >= 1");
  const Params p(a.lambda, a.depth);
  const auto tree = build_tree_network(p);
  const double cover = exact_expected_cover_time(tree, 0);
  const auto leaf = tree.index_of(Vertex(static_cast<std::uint32_t>(a.depth), 0));
  const double hit_root = expected_hitting_time(tree, leaf, 0);
  const double hit_leaf = expected_hitting_time(tree, 0, leaf);
  const std::pair<std::size_t, std::size_t> pair{0, leaf};
  const double commute_gap = commute_identity_check(tree, std::span(&pair, 1));
  std::printf("depth=%d lambda=%g cover_from_root=%.12g hit_root_from_leaf=%.12g hit_leaf_from_root=%.12g "
              "commute_gap=%.3e\n",
              a.depth, a.lambda, cover, hit_root, hit_leaf, commute_gap);
  if (!a.out.empty()) {
    const nlohmann::json j{{"lambda", a.lambda},
                           {"depth", a.depth},
                           {"expected_cover_time", cover},
                           {"hit_root_from_leaf", hit_root},
                           {"hit_leaf_from_root", hit_leaf},
                           {"commute_gap", commute_gap}};
    write_text(a.out, j.dump(2) + "\n");
    write_manifest(sub, a.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cover times of lambda-biased walks on binary trees and their boundary limit"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "Read options from a sectioned key-value file (flags take precedence)");
  app.option_defaults()->always_capture_default();
  unsigned workers = 0;
  app.add_option("--workers", workers, "Worker threads (0 = all cores); never changes results")
      ->configurable(false);
  app.require_subcommand(1);
  app.fallthrough();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample cover times of X^n, X-bar^n or X-tilde^n");
  simulate->configurable();
  simulate->add_option("--lambda", sim.lambda, "Edge-length parameter")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--depth", sim.depth, "Tree depth n")->required()->check(CLI::Range(0, 30));
  simulate->add_option("--family", sim.family)->check(CLI::IsMember({"raw", "bar", "tilde"}));
  simulate->add_option("--samples", sim.samples);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--out", sim.out, "Sample CSV");
  simulate->add_option("--records", sim.records, "Optional run-record CSV");
  simulate->add_option("--bar-level", sim.bar_level, "First level kept by X-bar^n (default n - ceil(ln n))");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Two-sample Kolmogorov-Smirnov comparison of sample CSVs");
  compare->configurable();
  compare->add_option("--a", cmp.a)->required();
  compare->add_option("--b", cmp.b)->required();
  compare->add_option("--column", cmp.column)->check(CLI::IsMember({"rescaled", "tau"}));
  compare->add_option("--alpha", cmp.alpha)->check(CLI::Range(1e-9, 0.5));
  compare->add_option("--threshold", cmp.threshold, "Pass threshold (default 2.2x the 1% critical value)");
  compare->add_option("--out", cmp.out, "Optional JSON report");
  compare->add_flag("--strict", cmp.strict, "Exit 1 when the comparison fails");

  LadderArgs lad;
  auto* ladder = app.add_subcommand("ladder", "Nested cover times of X-tilde^n");
  ladder->configurable();
  ladder->add_option("--lambda", lad.lambda)->check(CLI::PositiveNumber);
  ladder->add_option("--depth", lad.depth)->check(CLI::Range(0, kTildeDenseCap));
  ladder->add_option("--levels", lad.levels, "Ladder levels (default every even m in [4, n])")->delimiter(',');
  ladder->add_option("--samples", lad.samples);
  ladder->add_option("--seed", lad.seed);
  ladder->add_option("--out", lad.out);
  ladder->add_option("--svg", lad.svg);

  GaussianArgs gau;
  auto* gaussian = app.add_subcommand("gaussian", "Expected supremum, gamma_2 bound and tail fit");
  gaussian->configurable();
  gaussian->add_option("--lambda", gau.lambda)->check(CLI::PositiveNumber);
  gaussian->add_option("--depth", gau.depth)->check(CLI::Range(0, 22));
  gaussian->add_option("--samples", gau.samples);
  gaussian->add_option("--seed", gau.seed);
  gaussian->add_option("--out", gau.out);
  gaussian->add_option("--tail-samples", gau.tail_samples, "Cover-time samples for the tail fit (0 = skip)");
  gaussian->add_option("--tail-out", gau.tail_out);

  TableArgs tab;
  auto* table = app.add_subcommand("table", "Growth rates of diameter, conductance and cover time");
  table->configurable();
  table->add_option("--lambdas", tab.lambdas)->delimiter(',');
  table->add_option("--depths", tab.depths, "Exact columns, a:b");
  table->add_option("--cover-depths", tab.cover_depths, "Cover column, a:b");
  table->add_option("--samples", tab.samples);
  table->add_option("--seed", tab.seed);
  table->add_option("--out", tab.out);
  table->add_option("--growth-lambdas", tab.growth_lambdas)->delimiter(',');
  table->add_option("--growth-out", tab.growth_out);
  table->add_option("--svg", tab.svg);

  TraceArgs trc;
  auto* trace = app.add_subcommand("trace-check", "Resistance checks of traced networks against the tree metric");
  trace->configurable();
  trace->add_option("--lambda", trc.lambda)->check(CLI::PositiveNumber);
  trace->add_option("--depth", trc.depth)->check(CLI::Range(1, 10));
  trace->add_option("--tolerance", trc.tolerance);
  trace->add_option("--out", trc.out);

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Exact expected cover and hitting times on small trees");
  oracle->configurable();
  oracle->add_option("--lambda", orc.lambda)->check(CLI::PositiveNumber);
  oracle->add_option("--depth", orc.depth)->check(CLI::Range(1, 3));
  oracle->add_option("--out", orc.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) run_simulate(sim, *simulate, workers);
    if (compare->parsed() && !run_compare(cmp, *compare)) return 1;
    if (ladder->parsed()) run_ladder(lad, *ladder, workers);
    if (gaussian->parsed()) run_gaussian(gau, *gaussian, workers);
    if (table->parsed()) run_table(tab, *table, workers);
    if (trace->parsed() && !run_trace_check(trc, *trace)) return 1;
    if (oracle->parsed()) run_oracle(orc, *oracle);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
