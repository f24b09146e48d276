#pragma once

// Reference solvers that share no code with the library under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace ccn::testing {

struct OracleProblem {
  std::vector<double> p;
  double a = 1.0;
  double f = 0.0;
  double lower = 1.0;
  double upper = 1.0;
  double budget = 1.0;
};

struct OracleResult {
  std::vector<double> X;
  double objective = 0.0;
  int iterations = 0;
};

inline double oracle_objective(const OracleProblem& q, const std::vector<double>& X) {
  double s = 0.0;
  for (std::size_t m = 0; m < X.size(); ++m) s += q.p[m] / std::sqrt(q.a * (X[m] + q.f));
  return s;
}

// argmin sum_m w_m (Y_m - Z_m)^2 over lower <= Y <= upper, sum Y <= budget.
// The price nu on the budget is found by bisection.
inline std::vector<double> weighted_projection(const OracleProblem& q, const std::vector<double>& Z,
                                               const std::vector<double>& w) {
  const std::size_t M = Z.size();
  auto at = [&](double nu) {
    std::vector<double> Y(M);
    for (std::size_t m = 0; m < M; ++m) Y[m] = std::clamp(Z[m] - nu / (2.0 * w[m]), q.lower, q.upper);
    return Y;
  };
  auto total = [](const std::vector<double>& Y) { return std::accumulate(Y.begin(), Y.end(), 0.0); };
  std::vector<double> Y = at(0.0);
  if (total(Y) <= q.budget) return Y;
  double lo = 0.0;
  double hi = 1.0;
  while (total(at(hi)) > q.budget) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total(at(mid)) > q.budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return at(hi);
}

// Projected Newton with the exact (diagonal) Hessian as metric and Armijo
// backtracking along the feasible segment. Stands in for plain projected
// gradient, which needs millions of steps to reach 1e-9.
inline OracleResult projected_newton(const OracleProblem& q, int max_iter = 500) {
  const std::size_t M = q.p.size();
  OracleResult r;
  r.X.assign(M, std::clamp(q.budget / static_cast<double>(M), q.lower, q.upper));
  const double ra = 1.0 / std::sqrt(q.a);
  double F = oracle_objective(q, r.X);
  std::vector<double> grad(M), hess(M), Z(M);
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    for (std::size_t m = 0; m < M; ++m) {
      const double y = r.X[m] + q.f;
      grad[m] = -0.5 * q.p[m] * ra * std::pow(y, -1.5);
      hess[m] = 0.75 * q.p[m] * ra * std::pow(y, -2.5);
      Z[m] = r.X[m] - grad[m] / hess[m];
    }
    const std::vector<double> target = weighted_projection(q, Z, hess);
    double slope = 0.0;
    double move = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      slope += grad[m] * (target[m] - r.X[m]);
      move = std::max(move, std::abs(target[m] - r.X[m]));
    }
    if (move <= 1e-15 * std::max(1.0, q.upper)) break;
    double t = 1.0;
    std::vector<double> trial(M);
    double Ft = F;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t m = 0; m < M; ++m) trial[m] = r.X[m] + t * (target[m] - r.X[m]);
      Ft = oracle_objective(q, trial);
      // Near the optimum F changes by less than rounding; a step that does
      // not worsen F beyond that is still a Newton step worth taking.
      if (Ft <= F + 1e-4 * t * slope || (t == 1.0 && Ft <= F * (1.0 + 8e-16))) break;
      t *= 0.5;
    }
    if (!(Ft <= F * (1.0 + 8e-16))) break;
    r.X = trial;
    F = Ft;
    if (move <= 1e-13 * std::max(1.0, q.upper)) break;
  }
  r.objective = F;
  return r;
}

}  // namespace ccn::testing
