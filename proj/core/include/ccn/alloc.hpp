#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccn/popularity.hpp"

namespace ccn {

/// Cache allocation program over holder counts X_m:
///
///   minimize   sum_m p_m / sqrt(a (X_m + f))
///   subject to sum_m X_m <= n K,  lower <= X_m <= upper = 1/a - f.
///
/// The ad hoc network is f = 0, lower = 1. The heterogeneous network adds f
/// base stations holding everything, which relaxes the lower bound to 0.
struct AllocationProblem {
  std::vector<double> p;  // non-increasing
  std::optional<double> zipf_alpha;
  std::uint64_t n = 0;
  double K = 1.0;
  double a = 1.0;
  double f = 0.0;
  double lower = 1.0;
  double upper = 1.0;

  static AllocationProblem ad_hoc(const PopularityModel& pop, std::uint64_t n, double K, double a);
  static AllocationProblem heterogeneous(const PopularityModel& pop, std::uint64_t n, double K,
                                         double a, double f);

  double budget() const { return static_cast<double>(n) * K; }
  std::size_t size() const { return p.size(); }
};

struct Allocation {
  std::vector<double> X;
  std::size_t m1 = 1;  // 1-based: first content below the upper bound
  std::size_t m2 = 1;  // 1-based: first content at the lower bound, M+1 if none
  double Kprime = 0.0;     // interior holders (including f shift) per node
  double multiplier = 0.0; // Lagrange scalar of the budget constraint
  double objective = 0.0;  // sum_m p_m / sqrt(a (X_m + f))
  bool degenerate = false; // upper <= lower: no room to optimize
  bool budget_active = false;
  double kkt_residual = 0.0;
};

/// Water-filling solution. Interior contents satisfy X_m + f = c p_m^(2/3); c is
/// found by bisection on the clipped budget and then solved exactly on the
/// final active set.
///
/// Throws InfeasibleError when M * lower > nK, InvalidArgument for malformed
/// problems (unsorted p, a outside (0, 1], negative f, ...).
Allocation solve(const AllocationProblem& prob);

/// Largest relative violation of the stationarity/complementarity conditions.
double kkt_residual(const Allocation& alloc, const AllocationProblem& prob);

/// Sum_m p_m / sqrt(a (X_m + f)) for an arbitrary feasible X.
double allocation_objective(const std::vector<double>& X, const AllocationProblem& prob);

/// (m1/m2) / (a max(f,1))^(3/(2 alpha)); the caller checks it stays in a band.
/// Throws UnsupportedRegime for non-Zipf popularity and InvalidArgument when
/// there is no saturated and interior region (m1 == 1, m2 > M, or degenerate).
double interior_ratio(const AllocationProblem& prob);
double interior_ratio(const Allocation& alloc, const AllocationProblem& prob);

/// Three-term closed form: saturated contents cost one hop, interior contents
/// (sum p^(2/3))^(3/2)/sqrt(n K' a), and the rest the lower-bound hop count.
double optimized_delay(const Allocation& alloc, const AllocationProblem& prob);

/// sum_m p_m max(1, 1/sqrt(a (X_m + f))).
double direct_delay(const std::vector<double>& X, const AllocationProblem& prob);

/// Largest-remainder rounding. Keeps every entry within one of the real value
/// and inside the integer box, and the total within floor(nK). Equal
/// remainders go to the lower index.
std::vector<std::int64_t> round_to_integers(const Allocation& alloc, const AllocationProblem& prob);

}  // namespace ccn
