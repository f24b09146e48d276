#include "ccn/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ccn/error.hpp"

namespace ccn {
namespace {

double bound_tol(const AllocationProblem& prob) { return 1e-12 * std::max(1.0, prob.upper); }

void validate(const AllocationProblem& prob) {
  if (prob.p.empty()) throw InvalidArgument("allocation: empty popularity vector");
  for (std::size_t m = 0; m < prob.p.size(); ++m) {
    if (!(prob.p[m] > 0.0) || !std::isfinite(prob.p[m])) {
      throw InvalidArgument("allocation: p must be positive and finite");
    }
    if (m > 0 && prob.p[m] > prob.p[m - 1]) {
      throw InvalidArgument("allocation: p must be non-increasing (rank " + std::to_string(m + 1) +
                            ")");
    }
  }
  if (prob.n == 0) throw InvalidArgument("allocation: n must be >= 1");
  if (!(prob.K > 0.0) || !std::isfinite(prob.K)) throw InvalidArgument("allocation: K must be > 0");
  if (!(prob.a > 0.0) || prob.a > 1.0) throw InvalidArgument("allocation: a must lie in (0, 1]");
  if (!(prob.f >= 0.0) || !std::isfinite(prob.f)) throw InvalidArgument("allocation: f must be >= 0");
  if (!(prob.lower >= 0.0)) throw InvalidArgument("allocation: lower bound must be >= 0");
  if (!(prob.lower + prob.f > 0.0)) {
    throw InvalidArgument("allocation: lower + f must be > 0 (some content would be unreachable)");
  }
}

struct Partition {
  double at_upper = 0.0;  // summed X of saturated entries
  double at_lower = 0.0;
  double interior_q = 0.0;
  std::size_t interior = 0;
};

}  // namespace

AllocationProblem AllocationProblem::ad_hoc(const PopularityModel& pop, std::uint64_t n, double K,
                                            double a) {
  AllocationProblem prob;
  prob.p.assign(pop.probabilities().begin(), pop.probabilities().end());
  prob.zipf_alpha = pop.zipf_exponent();
  prob.n = n;
  prob.K = K;
  prob.a = a;
  prob.f = 0.0;
  prob.lower = 1.0;
  prob.upper = 1.0 / a;
  return prob;
}

AllocationProblem AllocationProblem::heterogeneous(const PopularityModel& pop, std::uint64_t n,
                                                   double K, double a, double f) {
  if (!(f > 0.0)) throw InvalidArgument("heterogeneous allocation needs f > 0");
  AllocationProblem prob = ad_hoc(pop, n, K, a);
  prob.f = f;
  prob.lower = 0.0;
  prob.upper = 1.0 / a - f;
  return prob;
}

double allocation_objective(const std::vector<double>& X, const AllocationProblem& prob) {
  if (X.size() != prob.p.size()) throw InvalidArgument("allocation_objective: size mismatch");
  double sum = 0.0;
  for (std::size_t m = 0; m < X.size(); ++m) sum += prob.p[m] / std::sqrt(prob.a * (X[m] + prob.f));
  return sum;
}

double direct_delay(const std::vector<double>& X, const AllocationProblem& prob) {
  if (X.size() != prob.p.size()) throw InvalidArgument("direct_delay: size mismatch");
  double sum = 0.0;
  for (std::size_t m = 0; m < X.size(); ++m) {
    sum += prob.p[m] * std::max(1.0, 1.0 / std::sqrt(prob.a * (X[m] + prob.f)));
  }
  return sum;
}

double kkt_residual(const Allocation& alloc, const AllocationProblem& prob) {
  const std::size_t M = prob.p.size();
  if (alloc.X.size() != M) throw InvalidArgument("kkt_residual: size mismatch");
  const double tol = bound_tol(prob);
  const double scale = std::max(1.0, prob.upper);
  double worst = 0.0;

  for (double x : alloc.X) {
    worst = std::max(worst, (prob.lower - x) / scale);
    if (!alloc.degenerate) worst = std::max(worst, (x - prob.upper) / scale);
  }
  if (alloc.degenerate) return std::max(worst, 0.0);

  const double total = std::accumulate(alloc.X.begin(), alloc.X.end(), 0.0);
  const double budget = prob.budget();
  worst = std::max(worst, (total - budget) / budget - 1e-12);

  const double lambda = alloc.multiplier;
  if (lambda <= 0.0) {
    // No price on memory: everything must already sit at the upper bound.
    for (double x : alloc.X) worst = std::max(worst, (prob.upper - x) / scale - 1e-12);
    return std::max(worst, 0.0);
  }
  worst = std::max(worst, std::abs(total - budget) / budget);

  const double two_sqrt_a = 2.0 * std::sqrt(prob.a);
  for (std::size_t m = 0; m < M; ++m) {
    const double x = alloc.X[m];
    // Marginal delay reduction from one more holder of m.
    const double gain = prob.p[m] / (two_sqrt_a * std::pow(x + prob.f, 1.5));
    double r = 0.0;
    if (x >= prob.upper - tol) {
      r = std::max(0.0, lambda - gain);
    } else if (x <= prob.lower + tol) {
      r = std::max(0.0, gain - lambda);
    } else {
      r = std::abs(gain - lambda);
    }
    worst = std::max(worst, r / lambda);
  }
  return std::max(worst, 0.0);
}

Allocation solve(const AllocationProblem& prob) {
  validate(prob);
  const std::size_t M = prob.p.size();
  const double budget = prob.budget();
  const double lower = prob.lower;
  const double upper = prob.upper;
  const double f = prob.f;

  if (static_cast<double>(M) * lower > budget * (1.0 + 1e-12)) {
    throw InfeasibleError("allocation: budget nK = " + std::to_string(budget) +
                          " cannot hold one copy of each of M = " + std::to_string(M) +
                          " contents");
  }

  Allocation out;
  const double tol = bound_tol(prob);

  if (upper <= lower + tol) {
    out.X.assign(M, lower);
    out.degenerate = true;
    out.m1 = 1;
    out.m2 = 1;
    out.objective = allocation_objective(out.X, prob);
    out.kkt_residual = kkt_residual(out, prob);
    return out;
  }

  std::vector<double> q(M);
  for (std::size_t m = 0; m < M; ++m) q[m] = std::cbrt(prob.p[m] * prob.p[m]);

  if (static_cast<double>(M) * upper <= budget) {
    out.X.assign(M, upper);
  } else {
    out.budget_active = true;
    auto clipped = [&](double c, std::size_t m) { return std::clamp(c * q[m] - f, lower, upper); };
    auto excess = [&](double c) {
      double s = 0.0;
      for (std::size_t m = 0; m < M; ++m) s += clipped(c, m);
      return s - budget;
    };

    double lo = (lower + f) / q.front();  // everything at the lower bound
    double hi = (upper + f) / q.back();   // everything at the upper bound
    double c = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
      c = 0.5 * (lo + hi);
      const double b = excess(c);
      if (std::abs(b) <= 1e-9 * budget || hi - lo <= 1e-14 * c) break;
      (b > 0.0 ? hi : lo) = c;
    }

    // B(c) is linear on the active set found by bisection; solve it exactly.
    Partition part;
    for (std::size_t m = 0; m < M; ++m) {
      const double v = c * q[m] - f;
      if (v >= upper) {
        part.at_upper += upper;
      } else if (v <= lower) {
        part.at_lower += lower;
      } else {
        part.interior_q += q[m];
        ++part.interior;
      }
    }
    if (part.interior > 0) {
      const double exact =
          (budget - part.at_upper - part.at_lower + f * static_cast<double>(part.interior)) /
          part.interior_q;
      bool consistent = exact > 0.0;
      for (std::size_t m = 0; consistent && m < M; ++m) {
        const double before = c * q[m] - f;
        const double after = exact * q[m] - f;
        const bool was_upper = before >= upper;
        const bool was_lower = before <= lower;
        if (was_upper) {
          consistent = after >= upper - tol;
        } else if (was_lower) {
          consistent = after <= lower + tol;
        } else {
          consistent = after > lower - tol && after < upper + tol;
        }
      }
      if (consistent) c = exact;
    }

    out.X.resize(M);
    for (std::size_t m = 0; m < M; ++m) out.X[m] = clipped(c, m);
    out.multiplier = 1.0 / (2.0 * std::sqrt(prob.a) * std::pow(c, 1.5));
  }

  out.m1 = M + 1;
  for (std::size_t m = 0; m < M; ++m) {
    if (out.X[m] < upper - tol) {
      out.m1 = m + 1;
      break;
    }
  }
  out.m2 = M + 1;
  for (std::size_t m = 0; m < M; ++m) {
    if (out.X[m] <= lower + tol) {
      out.m2 = m + 1;
      break;
    }
  }
  double interior_sum = 0.0;
  for (std::size_t m = out.m1; m < out.m2; ++m) interior_sum += out.X[m - 1] + f;
  out.Kprime = interior_sum / static_cast<double>(prob.n);
  out.objective = allocation_objective(out.X, prob);
  out.kkt_residual = kkt_residual(out, prob);
  if (!(out.kkt_residual <= 1e-8)) {
    throw std::logic_error("allocation: KKT residual " + std::to_string(out.kkt_residual) +
                           " exceeds 1e-8");
  }
  return out;
}

double interior_ratio(const Allocation& alloc, const AllocationProblem& prob) {
  if (!prob.zipf_alpha || !(*prob.zipf_alpha > 0.0)) {
    throw UnsupportedRegime("interior_ratio: needs Zipf popularity with alpha > 0");
  }
  const std::size_t M = prob.p.size();
  if (alloc.degenerate || alloc.m1 <= 1 || alloc.m2 > M || alloc.m1 > alloc.m2) {
    throw InvalidArgument("interior_ratio: needs 1 < m1 <= m2 <= M");
  }
  const double expo = 3.0 / (2.0 * *prob.zipf_alpha);
  const double scale = std::pow(prob.a * std::max(prob.f, 1.0), expo);
  return (static_cast<double>(alloc.m1) / static_cast<double>(alloc.m2)) / scale;
}

double interior_ratio(const AllocationProblem& prob) {
  if (!prob.zipf_alpha) throw UnsupportedRegime("interior_ratio: needs Zipf popularity");
  return interior_ratio(solve(prob), prob);
}

double optimized_delay(const Allocation& alloc, const AllocationProblem& prob) {
  const std::size_t M = prob.p.size();
  if (alloc.X.size() != M || alloc.m1 < 1 || alloc.m2 > M + 1) {
    throw InvalidArgument("optimized_delay: allocation does not match problem");
  }
  const std::size_t m1 = std::min(alloc.m1, alloc.m2);
  double saturated = 0.0;
  for (std::size_t m = 1; m < m1; ++m) saturated += prob.p[m - 1];

  double middle = 0.0;
  if (alloc.m2 > m1) {
    if (!(alloc.Kprime > 0.0)) throw InvalidArgument("optimized_delay: interior region with K' = 0");
    double qsum = 0.0;
    for (std::size_t m = m1; m < alloc.m2; ++m) qsum += std::cbrt(prob.p[m - 1] * prob.p[m - 1]);
    middle = std::pow(qsum, 1.5) /
             std::sqrt(static_cast<double>(prob.n) * alloc.Kprime * prob.a);
  }

  double tail = 0.0;
  for (std::size_t m = alloc.m2; m <= M; ++m) tail += prob.p[m - 1];
  tail *= std::max(1.0, 1.0 / std::sqrt(prob.a * (prob.lower + prob.f)));
  return saturated + middle + tail;
}

std::vector<std::int64_t> round_to_integers(const Allocation& alloc,
                                            const AllocationProblem& prob) {
  const std::size_t M = alloc.X.size();
  const auto ilo = static_cast<std::int64_t>(std::ceil(prob.lower - 1e-9));
  const auto ihi = std::max(ilo, static_cast<std::int64_t>(std::floor(prob.upper + 1e-9)));
  const double budget = prob.budget();
  const auto cap = static_cast<std::int64_t>(std::floor(budget + 1e-9 * std::max(1.0, budget)));

  const double total = std::accumulate(alloc.X.begin(), alloc.X.end(), 0.0);
  const auto target = std::min(
      cap, static_cast<std::int64_t>(std::floor(total + 1e-9 * std::max(1.0, total))));

  std::vector<std::int64_t> out(M);
  std::vector<double> rem(M);
  std::int64_t assigned = 0;
  for (std::size_t m = 0; m < M; ++m) {
    const double x = alloc.X[m];
    out[m] = std::clamp(static_cast<std::int64_t>(std::floor(x + 1e-9)), ilo, ihi);
    rem[m] = x - static_cast<double>(out[m]);
    assigned += out[m];
  }

  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (assigned < target) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return rem[i] > rem[j]; });
    for (std::size_t idx = 0; idx < M && assigned < target; ++idx) {
      const std::size_t m = order[idx];
      if (out[m] < ihi && rem[m] > 0.0) {
        ++out[m];
        ++assigned;
      }
    }
  } else if (assigned > target) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return rem[i] < rem[j]; });
    for (std::size_t idx = 0; idx < M && assigned > target; ++idx) {
      const std::size_t m = order[idx];
      if (out[m] > ilo) {
        --out[m];
        --assigned;
      }
    }
  }
  return out;
}

}  // namespace ccn
