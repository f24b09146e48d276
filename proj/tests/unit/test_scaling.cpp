#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ccn/alloc.hpp"
#include "ccn/error.hpp"
#include "ccn/popularity.hpp"
#include "ccn/regression.hpp"
#include "ccn/scaling.hpp"

namespace ccn {
namespace {

ScalingRegime adhoc(double alpha, double beta = 0.9) {
  ScalingRegime r;
  r.alpha = alpha;
  r.beta = beta;
  return r;
}

ScalingRegime hetero(double alpha, double mu, double beta = 0.9) {
  ScalingRegime r = adhoc(alpha, beta);
  r.mu = mu;
  return r;
}

double slope_of(const std::vector<double>& ns, const std::vector<double>& ys) {
  return slope_regression(ns, ys).slope;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(std::round(std::pow(10.0, lo + (hi - lo) * i / (count - 1))));
  return v;
}

TEST(ExpectedHops, Examples) {
  EXPECT_EQ(expected_hops(1.0 / 16, 16, 0), 1.0);
  EXPECT_NEAR(expected_hops(0.01, 4, 0), 5.0, 1e-14);
  EXPECT_NEAR(expected_hops(0.01, 0, 25), 2.0, 1e-14);
  EXPECT_THROW(expected_hops(0.01, 0, 0), InvalidArgument);
  EXPECT_THROW(expected_hops(0.0, 1, 0), InvalidArgument);
}

TEST(AlphaClasses, Breakpoints) {
  EXPECT_EQ(classify_alpha(0.8), AlphaClass::kBelowOne);
  EXPECT_EQ(classify_alpha(1.0), AlphaClass::kOne);
  EXPECT_EQ(classify_alpha(1.2), AlphaClass::kBetweenOneAndThreeHalves);
  EXPECT_EQ(classify_alpha(1.5), AlphaClass::kThreeHalves);
  EXPECT_EQ(classify_alpha(1.5 + 1e-13), AlphaClass::kThreeHalves);
  EXPECT_EQ(classify_alpha(1.5 + 1e-9), AlphaClass::kAboveThreeHalves);
  EXPECT_EQ(classify_alpha(2.0), AlphaClass::kAboveThreeHalves);
}

TEST(PredictedDelay, ConstantBranch) {
  for (std::uint64_t n : {10u, 1000u, 1000000u}) EXPECT_EQ(predicted_delay_order(adhoc(2.0), n), 1.0);
}

TEST(PredictedDelay, BelowOneSubstituted) {
  const double M = std::pow(1e6, 0.9);
  EXPECT_NEAR(predicted_delay_order(adhoc(0.8), 1000000) / std::sqrt(M / std::log(M)), 1.0, 1e-12);
}

TEST(PredictedDelay, HeterogeneousBelowOne) {
  const double n = 1e6;
  EXPECT_NEAR(predicted_delay_order(hetero(0.8, 0.4), 1000000) / std::sqrt(std::pow(n, 0.6) / std::log(n)),
              1.0, 1e-12);
}

TEST(PredictedThroughput, Examples) {
  const double M = std::pow(1e6, 0.9);
  EXPECT_NEAR(predicted_throughput_order(adhoc(2.0), 1000000) * std::log(M), 1.0, 1e-12);
  EXPECT_NEAR(predicted_throughput_order(adhoc(1.0), 1000000) / std::sqrt(std::log(M) / M), 1.0, 1e-12);
}

TEST(PredictedOrders, Errors) {
  EXPECT_THROW(predicted_delay_order(adhoc(0.8), 2), InvalidArgument);
  EXPECT_THROW(predicted_delay_order(adhoc(0.8, 1.2), 1000), UnsupportedRegime);
  auto r = hetero(0.8, 0.4);
  r.cell_rule = CellRule::fixed(0.01);
  EXPECT_THROW(predicted_delay_order(r, 1000), UnsupportedRegime);
  EXPECT_THROW(predicted_throughput_order(hetero(0.8, 1.2), 1000), InvalidArgument);
  // The heterogeneous network accepts beta >= 1.
  EXPECT_NO_THROW(predicted_delay_order(hetero(0.8, 0.4, 1.5), 1000));
}

TEST(ScalingProperty, TradeoffConstantForEveryBranch) {
  std::vector<ScalingRegime> regimes;
  for (double alpha : {0.0, 0.5, 0.8, 1.0, 1.2, 1.4, 1.5, 1.7, 2.0, 3.0}) {
    for (double beta : {0.3, 0.6, 0.9}) {
      regimes.push_back(adhoc(alpha, beta));
      for (double mu : {0.0, 0.05, 0.4, 0.8}) regimes.push_back(hetero(alpha, mu, beta));
      auto fixed = adhoc(alpha, beta);
      fixed.cell_rule = CellRule::fixed(0.001);
      regimes.push_back(fixed);
    }
    regimes.push_back(hetero(alpha, 0.3, 1.4));
  }
  for (const auto& r : regimes) {
    auto product = [&](std::uint64_t n) {
      return predicted_delay_order(r, n) * predicted_throughput_order(r, n) * double(n) *
             r.cell_rule.area(n);
    };
    const double base = product(1000);
    for (std::uint64_t n : {3000u, 100000u, 1000000u}) {
      EXPECT_NEAR(product(n) / base, 1.0, 1e-9) << describe(r).label << " beta=" << r.beta << " n=" << n;
    }
  }
}

TEST(ScalingProperty, SlopeJustBelowThreeHalves) {
  const auto ns = log_grid(3, 6, 13);
  std::vector<double> ys;
  for (double n : ns) ys.push_back(predicted_delay_order(adhoc(1.49), static_cast<std::uint64_t>(n)));
  const double s = slope_of(ns, ys);
  EXPECT_GE(s, -0.05);
  EXPECT_LE(s, 0.0);
}

TEST(ScalingProperty, OptimizerSlopeMatchesPrediction) {
  const auto ns = log_grid(3, 6, 7);
  for (double alpha : {0.8, 1.2}) {
    std::vector<double> solved, predicted;
    for (double nd : ns) {
      const auto n = static_cast<std::uint64_t>(nd);
      const auto M = static_cast<std::size_t>(std::ceil(std::pow(nd, 0.9) * (1 - 1e-12)));
      const double a = 1.0 / std::pow(std::round(1.0 / std::sqrt(2.0 * std::log(nd) / nd)), 2);
      const auto prob = AllocationProblem::ad_hoc(PopularityModel::zipf(M, alpha), n, 1.0, a);
      solved.push_back(optimized_delay(solve(prob), prob));
      predicted.push_back(predicted_delay_order(adhoc(alpha), n));
    }
    EXPECT_NEAR(slope_of(ns, solved), slope_of(ns, predicted), 0.1) << "alpha=" << alpha;
  }
}

TEST(M1M2Orders, AdHocAboveThreeHalves) {
  const std::uint64_t n = 1000000;
  const double a = 2.0 * std::log(1e6) / 1e6;
  const auto [m1, m2] = m1_m2_orders(adhoc(2.0), n);
  EXPECT_NEAR(m2 / (0.25 * 1e6 * std::pow(a, 0.25)), 1.0, 1e-12);
  EXPECT_NEAR(m1, std::min(std::pow(1e6, 0.9), 1e6 * a), 1e-6);
}

TEST(M1M2Orders, HeterogeneousBelowThreeHalves) {
  const auto [m1, m2] = m1_m2_orders(hetero(1.2, 0.4), 1000000);
  EXPECT_EQ(m1, 1.0);
  EXPECT_NEAR(m2 / std::pow(1e6, 0.6), 1.0, 1e-12);
}

TEST(M1M2Orders, SolverRatiosStable) {
  struct Case {
    ScalingRegime reg;
    bool het;
  };
  const Case cases[] = {{adhoc(2.0), false}, {hetero(1.2, 0.4), true}};
  for (const auto& c : cases) {
    std::vector<double> ratios;
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
      const double nd = double(n);
      const auto M = static_cast<std::size_t>(std::ceil(std::pow(nd, 0.9) * (1 - 1e-12)));
      const double a = 1.0 / std::pow(std::round(1.0 / std::sqrt(2.0 * std::log(nd) / nd)), 2);
      const auto pop = PopularityModel::zipf(M, c.reg.alpha);
      const auto prob = c.het ? AllocationProblem::heterogeneous(pop, n, 1.0, a, std::floor(std::pow(nd, 0.4)))
                              : AllocationProblem::ad_hoc(pop, n, 1.0, a);
      const auto alloc = solve(prob);
      ratios.push_back(double(alloc.m2) / m1_m2_orders(c.reg, n).second);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    EXPECT_LE(*hi / *lo, 2.0) << describe(c.reg).label;
  }
}

TEST(Threshold, Examples) {
  EXPECT_NEAR(improvement_threshold(0.9), 0.1, 1e-15);
  EXPECT_EQ(improvement_threshold(1.5), 0.0);
  EXPECT_EQ(improvement_threshold(1.0), 0.0);
  EXPECT_THROW(improvement_threshold(0.0), InvalidArgument);
}

TEST(Threshold, GainBranch) {
  EXPECT_TRUE(heterogeneous_gain_branch(hetero(0.8, 0.4)));
  EXPECT_FALSE(heterogeneous_gain_branch(hetero(0.8, 0.05)));
  EXPECT_FALSE(heterogeneous_gain_branch(adhoc(0.8)));
  // Below the threshold the ad hoc orders apply.
  EXPECT_EQ(predicted_delay_order(hetero(0.8, 0.05), 100000), predicted_delay_order(adhoc(0.8), 100000));
}

TEST(Describe, ExponentsForDefaultRule) {
  EXPECT_NEAR(describe(adhoc(0.8)).delay.n_exponent, 0.45, 1e-15);
  EXPECT_NEAR(describe(adhoc(1.2)).delay.n_exponent, 0.27, 1e-15);
  EXPECT_NEAR(describe(adhoc(1.2)).throughput.n_exponent, -0.27, 1e-15);
  EXPECT_NEAR(describe(hetero(0.8, 0.4)).delay.n_exponent, 0.3, 1e-15);
  EXPECT_EQ(describe(adhoc(2.0)).delay.n_exponent, 0.0);
  auto r = adhoc(0.8);
  r.cell_rule = CellRule::fixed(0.01);
  EXPECT_TRUE(std::isnan(describe(r).delay.n_exponent));
}

TEST(CellRules, Areas) {
  EXPECT_NEAR(CellRule::two_log_n_over_n().area(1000), 2.0 * std::log(1000.0) / 1000.0, 1e-16);
  EXPECT_NEAR(CellRule::two_log_n_over_n().area(3), 2.0 * std::log(3.0) / 3.0, 1e-16);
  EXPECT_THROW(CellRule::two_log_n_over_n().area(1), InvalidArgument);
  EXPECT_EQ(CellRule::fixed(0.25).area(1000000), 0.25);
  EXPECT_THROW(CellRule::fixed(0.0), InvalidArgument);
  EXPECT_THROW(CellRule::fixed(1.5), InvalidArgument);
}

}  // namespace
}  // namespace ccn
