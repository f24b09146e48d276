#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccn/alloc.hpp"
#include "ccn/error.hpp"
#include "ccn/popularity.hpp"
#include "ccn/random.hpp"
#include "generators.hpp"
#include "oracle.hpp"

namespace ccn {
namespace {

using testing::projected_newton;
using testing::random_problem;
using testing::to_oracle;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double inf_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Solve, UniformSymmetry) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(4, 0.0), 8, 1.0, 1.0 / 16);
  const auto alloc = solve(prob);
  for (double x : alloc.X) EXPECT_NEAR(x, 2.0, 1e-9);
  EXPECT_EQ(alloc.m1, 1u);
  EXPECT_EQ(alloc.m2, 5u);
  EXPECT_TRUE(alloc.budget_active);
}

TEST(Solve, SingleContentSaturates) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(1, 1.0), 10, 1.0, 0.25);
  const auto alloc = solve(prob);
  ASSERT_EQ(alloc.X.size(), 1u);
  EXPECT_EQ(alloc.X[0], 4.0);
  EXPECT_EQ(alloc.m1, 2u);
  EXPECT_EQ(alloc.m2, 2u);
  EXPECT_EQ(alloc.multiplier, 0.0);
  EXPECT_NEAR(optimized_delay(alloc, prob), 1.0, 1e-15);
}

TEST(Solve, ZipfTwelveContentsMatchesOracle) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(12, 1.2), 40, 1.0, 1.0 / 25);
  const auto alloc = solve(prob);
  const auto ref = projected_newton(to_oracle(prob));
  EXPECT_LE(inf_norm(alloc.X, ref.X), 1e-6);
  EXPECT_LE(alloc.objective, ref.objective * (1.0 + 1e-9));

  // 50-digit reference solution of the same program.
  const double frozen[] = {10.392445131143098, 5.968892313270511,  4.3153968127071997,
                           3.4282283907041414, 2.8677529605092633, 2.4785446099581041,
                           2.1909845154121369, 1.9690001564779899, 1.7919411087691828,
                           1.6470915541374339, 1.5261723887881183, 1.423550058122821};
  for (std::size_t m = 0; m < 12; ++m) EXPECT_NEAR(alloc.X[m], frozen[m], 1e-9) << m;
  EXPECT_NEAR(alloc.objective, 2.3186165202842312, 1e-12);
}

TEST(Solve, AbundantBudgetEverythingAtUpper) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(5, 0.8), 1000, 1.0, 1.0 / 9);
  const auto alloc = solve(prob);
  for (double x : alloc.X) EXPECT_EQ(x, 9.0);
  EXPECT_EQ(alloc.multiplier, 0.0);
  EXPECT_FALSE(alloc.budget_active);
  EXPECT_EQ(alloc.m1, 6u);
  EXPECT_NEAR(optimized_delay(alloc, prob), 1.0, 1e-12);
}

TEST(Solve, TightBudgetEverythingAtLower) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(10, 0.8), 10, 1.0, 1.0 / 16);
  const auto alloc = solve(prob);
  for (double x : alloc.X) EXPECT_NEAR(x, 1.0, 1e-12);
  EXPECT_EQ(alloc.m2, 1u);
}

TEST(Solve, InfeasibleBudget) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(11, 0.8), 10, 1.0, 1.0 / 16);
  EXPECT_THROW(solve(prob), InfeasibleError);
}

TEST(Solve, RejectsMalformedProblems) {
  auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(3, 1.0), 10, 1.0, 0.25);
  auto bad = prob;
  std::swap(bad.p[0], bad.p[2]);
  EXPECT_THROW(solve(bad), InvalidArgument);
  bad = prob;
  bad.a = 0.0;
  EXPECT_THROW(solve(bad), InvalidArgument);
  bad = prob;
  bad.a = 1.5;
  EXPECT_THROW(solve(bad), InvalidArgument);
  bad = prob;
  bad.K = -1.0;
  EXPECT_THROW(solve(bad), InvalidArgument);
  bad = prob;
  bad.lower = 0.0;
  EXPECT_THROW(solve(bad), InvalidArgument);
  EXPECT_THROW(AllocationProblem::heterogeneous(PopularityModel::zipf(3, 1.0), 10, 1.0, 0.25, 0.0),
               InvalidArgument);
}

TEST(Solve, DegenerateHeterogeneous) {
  // f = 1/a leaves no room for wireless holders.
  const auto prob =
      AllocationProblem::heterogeneous(PopularityModel::zipf(5, 1.0), 100, 1.0, 0.25, 4.0);
  const auto alloc = solve(prob);
  EXPECT_TRUE(alloc.degenerate);
  for (double x : alloc.X) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(interior_ratio(alloc, prob), InvalidArgument);
  EXPECT_THROW(interior_ratio(prob), InvalidArgument);
  EXPECT_NEAR(optimized_delay(alloc, prob), direct_delay(alloc.X, prob), 1e-15);
}

TEST(Solve, HeterogeneousCanLeaveContentsUncached) {
  const auto prob =
      AllocationProblem::heterogeneous(PopularityModel::zipf(200, 1.2), 100, 0.5, 1.0 / 100, 10.0);
  const auto alloc = solve(prob);
  EXPECT_LE(alloc.m2, 200u);
  EXPECT_EQ(alloc.X.back(), 0.0);
  EXPECT_LE(alloc.kkt_residual, 1e-8);
}

TEST(InteriorRatio, AlphaThreeBand) {
  // m1/m2 ~ a^(1/2) = 1/8; the normalized ratio must stay within a factor of 2.
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(100, 3.0), 400, 1.0, 1.0 / 64);
  const auto alloc = solve(prob);
  EXPECT_EQ(alloc.m1, 3u);
  EXPECT_EQ(alloc.m2, 24u);
  const double r = interior_ratio(alloc, prob);
  EXPECT_NEAR(r, 1.0, 1e-12);
  EXPECT_GE(r, 0.5);
  EXPECT_LE(r, 2.0);
}

TEST(InteriorRatio, AlphaOneAndHalfBandAcrossN) {
  std::vector<double> ratios;
  for (std::uint64_t n : {1000u, 3000u, 10000u, 30000u}) {
    const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(n, 1.5), n, 4.0, 1.0 / 100);
    ratios.push_back(interior_ratio(prob));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LE(*hi / *lo, 2.0);
}

TEST(InteriorRatio, RejectsCustomWeights) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::from_weights({3, 2, 1}), 30, 1.0, 0.25);
  EXPECT_THROW(interior_ratio(prob), UnsupportedRegime);
}

TEST(OptimizedDelay, MatchesDirectSum) {
  const std::uint64_t n = 10000;
  const double a = 2.0 * std::log(double(n)) / double(n);
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(100, 0.8), n, 1.0, a);
  const auto alloc = solve(prob);
  EXPECT_NEAR(optimized_delay(alloc, prob) / direct_delay(alloc.X, prob), 1.0, 1e-6);
}

TEST(OptimizedDelay, RejectsMismatchedAllocation) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(4, 1.0), 8, 1.0, 1.0 / 16);
  auto alloc = solve(prob);
  alloc.X.pop_back();
  EXPECT_THROW(optimized_delay(alloc, prob), InvalidArgument);
}

TEST(Rounding, AlreadyInteger) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(4, 0.0), 8, 1.0, 1.0 / 16);
  const auto alloc = solve(prob);
  EXPECT_EQ(round_to_integers(alloc, prob), (std::vector<std::int64_t>{2, 2, 2, 2}));
}

TEST(Rounding, EqualRemaindersGoToLowerIndex) {
  const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(4, 0.0), 10, 1.0, 1.0 / 16);
  Allocation alloc;
  alloc.X = {2.5, 2.5, 2.5, 2.5};
  EXPECT_EQ(round_to_integers(alloc, prob), (std::vector<std::int64_t>{3, 3, 2, 2}));
}

TEST(AllocProperty, OracleEquivalence) {
  auto rng = make_stream(301, Stream::kScratch);
  int compared = 0;
  for (int t = 0; t < 400; ++t) {
    const auto prob = random_problem(rng);
    const auto alloc = solve(prob);
    if (alloc.degenerate) continue;
    const auto ref = projected_newton(to_oracle(prob));
    ASSERT_LE(alloc.objective, ref.objective * (1.0 + 1e-9)) << "case " << t;
    ASSERT_LE(inf_norm(alloc.X, ref.X), 1e-6) << "case " << t;
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(AllocProperty, StructureAndCertificate) {
  auto rng = make_stream(302, Stream::kScratch);
  for (int t = 0; t < 1000; ++t) {
    const auto prob = random_problem(rng);
    const auto alloc = solve(prob);
    const std::size_t M = prob.size();
    const double tol = 1e-12 * std::max(1.0, prob.upper);
    ASSERT_LE(alloc.kkt_residual, 1e-8);
    ASSERT_EQ(alloc.kkt_residual, kkt_residual(alloc, prob));
    ASSERT_LE(sum(alloc.X), prob.budget() * (1.0 + 1e-9));
    for (std::size_t m = 0; m < M; ++m) {
      ASSERT_GE(alloc.X[m], prob.lower - tol);
      if (!alloc.degenerate) ASSERT_LE(alloc.X[m], prob.upper + tol);
      if (m > 0) ASSERT_LE(alloc.X[m], alloc.X[m - 1] + tol);
    }
    if (alloc.degenerate) continue;
    for (std::size_t m = 1; m <= M; ++m) {
      const double x = alloc.X[m - 1];
      if (m < alloc.m1) {
        ASSERT_GE(x, prob.upper - tol);
      } else if (m < alloc.m2) {
        ASSERT_LT(x, prob.upper - tol);
        ASSERT_GT(x, prob.lower + tol);
      } else {
        ASSERT_LE(x, prob.lower + tol);
      }
    }
    ASSERT_NEAR(optimized_delay(alloc, prob) / direct_delay(alloc.X, prob), 1.0, 1e-6);
  }
}

TEST(AllocProperty, MoreMemoryNeverHurts) {
  for (double alpha : {0.6, 1.0, 1.4, 2.0}) {
    const auto pop = PopularityModel::zipf(50, alpha);
    double prev = HUGE_VAL;
    for (double K = 0.5; K <= 8.0; K *= 1.25) {
      const double obj = solve(AllocationProblem::ad_hoc(pop, 100, K, 1.0 / 64)).objective;
      EXPECT_LE(obj, prev * (1.0 + 1e-12)) << "alpha=" << alpha << " K=" << K;
      prev = obj;
    }
  }
}

TEST(AllocProperty, MoreBaseStationsNeverHurt) {
  for (double alpha : {0.6, 1.0, 1.4, 2.0}) {
    const auto pop = PopularityModel::zipf(50, alpha);
    double prev = HUGE_VAL;
    for (double f = 1.0; f <= 60.0; f += 3.0) {
      const double obj = solve(AllocationProblem::heterogeneous(pop, 100, 0.5, 1.0 / 64, f)).objective;
      EXPECT_LE(obj, prev * (1.0 + 1e-12)) << "alpha=" << alpha << " f=" << f;
      prev = obj;
    }
  }
}

TEST(AllocProperty, WeightScaleInvariance) {
  auto rng = make_stream(303, Stream::kScratch);
  for (int t = 0; t < 200; ++t) {
    const std::size_t M = 1 + uniform_below(rng, 30);
    std::vector<double> w(M);
    for (double& v : w) v = 0.01 + uniform01(rng);
    std::vector<double> w2 = w;
    const double scale = std::pow(10.0, 6.0 * uniform01(rng) - 3.0);
    for (double& v : w2) v *= scale;
    const auto p1 = AllocationProblem::ad_hoc(PopularityModel::from_weights(w), 100, 1.0, 1.0 / 25);
    const auto p2 = AllocationProblem::ad_hoc(PopularityModel::from_weights(w2), 100, 1.0, 1.0 / 25);
    ASSERT_LE(inf_norm(solve(p1).X, solve(p2).X), 1e-9);
  }
}

TEST(AllocProperty, RoundingFuzz) {
  auto rng = make_stream(304, Stream::kScratch);
  for (int t = 0; t < 1000; ++t) {
    const auto prob = random_problem(rng);
    const auto alloc = solve(prob);
    const auto xi = round_to_integers(alloc, prob);
    const auto total = std::accumulate(xi.begin(), xi.end(), std::int64_t{0});
    ASSERT_LE(total, static_cast<std::int64_t>(std::floor(prob.budget() + 1e-9)));
    const auto real_total = static_cast<std::int64_t>(std::floor(sum(alloc.X) + 1e-9));
    ASSERT_GE(total, std::min<std::int64_t>(real_total, static_cast<std::int64_t>(std::floor(prob.budget() + 1e-9))) -
                         static_cast<std::int64_t>(prob.size()));
    for (std::size_t m = 0; m < xi.size(); ++m) {
      ASSERT_GE(double(xi[m]), std::ceil(prob.lower - 1e-9));
      ASSERT_LE(double(xi[m]), std::max(std::ceil(prob.lower - 1e-9), std::floor(prob.upper + 1e-9)));
      ASSERT_LE(std::abs(double(xi[m]) - alloc.X[m]), 1.0 + 1e-9);
    }
  }
}

TEST(AllocProperty, RoundingPreservesIntegralTotals) {
  auto rng = make_stream(305, Stream::kScratch);
  for (int t = 0; t < 500; ++t) {
    const std::size_t M = 2 + uniform_below(rng, 20);
    const auto n = static_cast<std::uint64_t>(M + uniform_below(rng, 100));
    const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(M, 1.5 * uniform01(rng)), n, 1.0, 1.0 / 400);
    const auto alloc = solve(prob);
    const auto xi = round_to_integers(alloc, prob);
    ASSERT_EQ(std::accumulate(xi.begin(), xi.end(), std::int64_t{0}), static_cast<std::int64_t>(n));
    double real_obj = alloc.objective;
    std::vector<double> xd(xi.begin(), xi.end());
    const double min_x = *std::min_element(alloc.X.begin(), alloc.X.end());
    ASSERT_LE(allocation_objective(xd, prob), real_obj * (1.0 + 2.0 / min_x));
  }
}

}  // namespace
}  // namespace ccn
