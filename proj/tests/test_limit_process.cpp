#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "treecover/analysis.hpp"
#include "treecover/limit_process.hpp"

using namespace treecover;

namespace {

std::vector<double> rescaled_raw(const Params& p, std::size_t count, std::uint64_t seed) {
  std::vector<double> out;
  for (const auto& r : sample_raw_cover(p, count, seed, 1)) out.push_back(rescale_cover(r.tau, Family::raw, p).rescaled);
  return out;
}

std::vector<double> taus(const std::vector<RunRecord>& runs) {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.tau);
  return out;
}

}  // namespace

TEST(Tilde, SmallExamples) {
  const auto t1 = build_tilde_chain(Params(0.5, 1));
  ASSERT_EQ(t1.size(), 2u);
  EXPECT_NEAR(t1.conductance(0, 1), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(t1.measure(0), 0.5);
  EXPECT_DOUBLE_EQ(t1.measure(1), 0.5);
  const auto t2 = build_tilde_chain(Params(0.5, 2));
  EXPECT_NEAR(effective_resistance(t2, 0, 1), 1.0, 1e-12);
  const auto t0 = build_tilde_chain(Params(0.5, 0));
  EXPECT_EQ(t0.size(), 1u);
  EXPECT_THROW(build_tilde_chain(Params(0.5, 13)), CapacityError);
}

TEST(Tilde, ResistanceMatchesMetric) {
  const Params p(0.5, 8);
  const auto tilde = build_tilde_chain(p);
  const ResistanceSolver solver(tilde);
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::size_t> pick(0, tilde.size() - 1);
  for (int k = 0; k < 50; ++k) {
    const auto a = pick(gen), b = pick(gen);
    const double want = metric_d(tilde.vertex(a), tilde.vertex(b), p);
    EXPECT_NEAR(solver.resistance(a, b), want, 1e-9 * std::max(want, 1e-12));
  }
}

TEST(Tilde, ZeroTailsAddTwoTailResistances) {
  for (int n : {2, 5}) {
    const Params p(0.5, n);
    const auto tailed = build_tilde_chain(p, TailMode::with_tails);
    const double tail = std::pow(p.lambda(), n) / (1.0 - p.lambda());
    const ResistanceSolver solver(tailed);
    for (std::size_t b = 1; b < tailed.size(); ++b) {
      const double want = metric_d(tailed.vertex(0), tailed.vertex(b), p) + 2.0 * tail;
      EXPECT_NEAR(solver.resistance(0, b), want, 1e-9 * want);
    }
  }
  EXPECT_THROW(build_tilde_chain(Params(1.5, 3), TailMode::with_tails), DomainError);
}

TEST(LeafChain, RateAndJumpLawMatchNetwork) {
  const Params p(0.5, 5);
  const auto tilde = build_tilde_chain(p);
  const LeafChainSampler chain(tilde);
  const JumpChainEngine engine(tilde);
  EXPECT_EQ(chain.depth(), 5);
  EXPECT_NEAR(chain.rate(), engine.rate(0), 1e-12 * engine.rate(0));
  EXPECT_NEAR(chain.rate(), engine.rate(19), 1e-12 * engine.rate(0));
  // Empirical jump law from leaf 19 against conductance weights.
  Stream s(2, 0);
  const std::size_t trials = 200000;
  std::vector<double> count(tilde.size(), 0.0);
  for (std::size_t k = 0; k < trials; ++k) count[chain.jump(19, s)] += 1.0;
  EXPECT_EQ(count[19], 0.0);
  for (std::size_t y = 0; y < tilde.size(); ++y) {
    if (y == 19) continue;
    const double prob = tilde.conductance(19, y) / tilde.row_sum(19);
    EXPECT_NEAR(count[y] / trials, prob, 5.0 * std::sqrt(prob * (1 - prob) / trials) + 1e-6);
  }
  EXPECT_THROW(LeafChainSampler(build_tree_network(Params(0.5, 2))), DomainError);
}

TEST(LeafChain, CoverTimesMatchGenericEngineInLaw) {
  const Params p(0.5, 6);
  const auto tilde = build_tilde_chain(p);
  const JumpChainEngine engine(tilde);
  const std::size_t count = 4000;
  std::vector<double> generic;
  for (std::size_t i = 0; i < count; ++i) {
    Stream s(3, i);
    generic.push_back(simulate_cover(engine, 0, s).tau);
  }
  const auto direct = taus(sample_tilde_cover(p, count, 4, 1));
  EXPECT_LT(ks_two_sample(EmpiricalDistribution(generic), EmpiricalDistribution(direct)),
            ks_tolerance(count, count));
}

TEST(Ladder, NestedTimesAreMonotone) {
  LadderSpec spec{0.5, 8, {0, 2, 4, 6, 8}, 300, 5};
  const auto res = sample_limit_cover(spec, 1);
  ASSERT_EQ(res.tau.size(), 5u);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    EXPECT_EQ(res.tau[0][i], 0.0);
    for (std::size_t k = 1; k < res.tau.size(); ++k) EXPECT_LE(res.tau[k - 1][i], res.tau[k][i]);
  }
}

TEST(Ladder, IncrementsShrink) {
  LadderSpec spec{0.5, 10, LadderSpec::default_levels(10), 400, 6};
  EXPECT_EQ(spec.levels, (std::vector<int>{4, 6, 8, 10}));
  const auto res = sample_limit_cover(spec);
  const auto m = res.means();
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_GT(m[k], m[k - 1]);
  const auto inc = res.mean_increments();
  for (std::size_t k = 1; k < inc.size(); ++k) EXPECT_LT(inc[k], inc[k - 1]);
}

TEST(Ladder, Validation) {
  EXPECT_THROW((LadderSpec{0.5, 6, {}, 1, 1}.validate()), DomainError);
  EXPECT_THROW((LadderSpec{0.5, 6, {4, 4}, 1, 1}.validate()), DomainError);
  EXPECT_THROW((LadderSpec{0.5, 6, {8}, 1, 1}.validate()), DomainError);
  EXPECT_EQ(padded_word(Vertex(2, 0b11), 5), 0b11000u);
  EXPECT_THROW(padded_word(Vertex(4, 0), 3), DomainError);
}

TEST(Rescale, Examples) {
  EXPECT_DOUBLE_EQ(rescale_cover(1.0, Family::raw, Params(0.5, 0)).rescaled, 0.75);
  for (int n = 1; n <= 12; ++n) {
    const Params p(0.5, n);
    const auto r = rescale_cover(10.0, Family::raw, p);
    EXPECT_NEAR(r.rescaled_bn / r.rescaled, 1.0 / (1.0 - std::pow(0.25, n)), 1e-12);
  }
  const auto t = rescale_cover(3.5, Family::tilde, Params(0.5, 8));
  EXPECT_EQ(t.rescaled, 3.5);
  EXPECT_EQ(t.rescaled_bn, 3.5);
  EXPECT_THROW(rescale_cover(-1.0, Family::raw, Params(0.5, 3)), DomainError);
  EXPECT_THROW(rescale_cover(1.0, Family::raw, Params(2.0, 3)), DomainError);
  EXPECT_THROW(theorem_scale(Params(3.0, 3)), DomainError);
}

TEST(Samplers, DepthZeroAndProvenance) {
  const auto zero = sample_raw_cover(Params(0.5, 0), 5, 1);
  for (const auto& r : zero) EXPECT_EQ(r.tau, 0.0);
  const auto runs = sample_bar_cover(Params(0.5, 6), 3, 42, 1);
  for (const auto& r : runs) {
    EXPECT_EQ(r.family, Family::bar);
    EXPECT_EQ(r.seed, 42u);
    EXPECT_EQ(r.n, 6);
    EXPECT_GT(r.jumps, 0u);
  }
}

TEST(Samplers, CoupledMarginalsMatchSeparateSamplers) {
  const Params p(0.5, 6);
  const std::size_t count = 3000;
  std::vector<double> raw, bar;
  for (const auto& c : sample_coupled_bar(p, count, 7, 1)) {
    EXPECT_LE(c.tau_bar, c.tau_raw);
    raw.push_back(c.tau_raw);
    bar.push_back(c.tau_bar);
  }
  const double tol = ks_tolerance(count, count);
  EXPECT_LT(ks_two_sample(EmpiricalDistribution(raw), EmpiricalDistribution(taus(sample_raw_cover(p, count, 8, 1)))),
            tol);
  EXPECT_LT(ks_two_sample(EmpiricalDistribution(bar), EmpiricalDistribution(taus(sample_bar_cover(p, count, 9, 1)))),
            tol);
}

TEST(CrossFamily, RescaledRawApproachesTilde) {
  const std::size_t count = 1000;
  const Params p(0.5, 8);
  const auto raw = rescaled_raw(p, count, 10);
  const auto tilde = taus(sample_tilde_cover(p, count, 11, 1));
  EXPECT_LT(ks_two_sample(EmpiricalDistribution(raw), EmpiricalDistribution(tilde)), 0.10);
}

TEST(CrossFamily, SandwichOneSided) {
  // b_n^{-1} tau(X-bar^n) sits below tau(X-tilde^n) up to sampling noise.
  const std::size_t count = 1000;
  const Params p(0.5, 8);
  std::vector<double> bar;
  for (const auto& r : sample_bar_cover(p, count, 12, 1)) bar.push_back(r.tau / b_n(p));
  const auto tilde = taus(sample_tilde_cover(p, count, 13, 1));
  EXPECT_LT(ks_one_sided(EmpiricalDistribution(bar), EmpiricalDistribution(tilde)), 0.10);
}

TEST(CrossFamily, WithinFamilyStabilises) {
  const std::size_t count = 1000;
  std::vector<std::vector<double>> at;
  for (int n : {6, 8, 10}) at.push_back(rescaled_raw(Params(0.5, n), count, 14 + n));
  const double early = ks_two_sample(EmpiricalDistribution(at[0]), EmpiricalDistribution(at[1]));
  const double late = ks_two_sample(EmpiricalDistribution(at[1]), EmpiricalDistribution(at[2]));
  EXPECT_LT(late, early);
}
