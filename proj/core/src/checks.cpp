#include "ccn/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "ccn/alloc.hpp"
#include "ccn/geometry.hpp"
#include "ccn/popularity.hpp"
#include "ccn/random.hpp"
#include "ccn/scaling.hpp"
#include "ccn/sched.hpp"
#include "ccn/sim.hpp"

namespace ccn {
namespace {

using Check = std::function<std::string()>;  // empty string on success

std::string popularity_check() {
  auto rng = make_stream(11, Stream::kScratch);
  for (int t = 0; t < 200; ++t) {
    const auto M = 1 + uniform_below(rng, 2000);
    const double alpha = 3.0 * uniform01(rng);
    const auto pop = PopularityModel::zipf(M, alpha);
    const auto p = pop.probabilities();
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) return "sum of p off by " + std::to_string(sum - 1.0);
    if (!std::is_sorted(p.rbegin(), p.rend())) return "p not non-increasing";
  }
  return {};
}

std::string segment_check() {
  auto rng = make_stream(12, Stream::kScratch);
  for (int t = 0; t < 2000; ++t) {
    const CellGrid grid(1 + static_cast<int>(uniform_below(rng, 40)));
    const TorusPoint a{uniform01(rng), uniform01(rng)};
    const TorusPoint b{uniform01(rng), uniform01(rng)};
    const auto cells = cells_on_segment(Segment::geodesic(a, b), grid);
    if (cells.front() != grid.cell_of(a) || cells.back() != grid.cell_of(b)) return "endpoint cells";
    const int g = grid.cells_per_side();
    for (std::size_t i = 1; i < cells.size(); ++i) {
      auto gap = [g](int u, int v) {
        const int d = std::abs(u - v) % g;
        return std::min(d, g - d);
      };
      if (gap(cells[i].row, cells[i - 1].row) > 1 || gap(cells[i].col, cells[i - 1].col) > 1) {
        return "consecutive cells not 8-adjacent";
      }
    }
  }
  return {};
}

std::string nearest_check() {
  auto rng = make_stream(13, Stream::kScratch);
  std::vector<TorusPoint> pts(500);
  for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 0; i < pts.size(); i += 3) ids.push_back(i);
  const HolderIndex index(pts, ids, HolderIndex::default_buckets(ids.size()));
  for (int q = 0; q < 500; ++q) {
    const TorusPoint query{uniform01(rng), uniform01(rng)};
    const auto hit = index.nearest(query);
    double best = 1e9;
    std::uint32_t best_id = 0;
    for (auto id : ids) {
      const double d = torus_distance(query, pts[id]);
      if (d < best) {
        best = d;
        best_id = id;
      }
    }
    if (!hit || hit->id != best_id) return "ring search disagrees with linear scan";
  }
  return {};
}

std::string sandwich_check() {
  for (std::uint64_t n2 = 3; n2 <= 2001; n2 += 2) {
    double ratio = 1.0;
    for (std::uint64_t n1 = n2 + 2; n1 <= 2001; n1 += 2) {
      ratio *= static_cast<double>(n1 - 1) / static_cast<double>(n1);
      const double r2 = ratio * ratio;
      const double lo = static_cast<double>(n2) / static_cast<double>(n1 + 1);
      const double hi = static_cast<double>(n2 + 1) / static_cast<double>(n1);
      if (r2 < lo - 1e-12 || r2 > hi + 1e-12) {
        return "violated at n1=" + std::to_string(n1) + " n2=" + std::to_string(n2);
      }
    }
  }
  return {};
}

std::string kkt_check() {
  for (double alpha : {0.0, 0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0}) {
    for (std::uint64_t M : {1ULL, 5ULL, 40ULL, 300ULL}) {
      for (std::uint64_t n : {400ULL, 5000ULL}) {
        const auto pop = PopularityModel::zipf(M, alpha);
        for (double a : {1.0 / 4, 1.0 / 64, 1.0 / 400}) {
          const auto prob = AllocationProblem::ad_hoc(pop, n, 1.0, a);
          if (static_cast<double>(M) > prob.budget()) continue;
          const auto sol = solve(prob);
          if (sol.kkt_residual > 1e-8) return "ad hoc residual " + std::to_string(sol.kkt_residual);
          const auto het = AllocationProblem::heterogeneous(pop, n, 1.0, a, 3.0);
          const auto hs = solve(het);
          if (hs.kkt_residual > 1e-8) return "heterogeneous residual " + std::to_string(hs.kkt_residual);
        }
      }
    }
  }
  return {};
}

std::string schedule_check() {
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    for (int g : {1, 2, 7, 8, 13, 24, 31, 64}) {
      const auto report = audit_schedule(build_schedule(CellGrid(g), delta));
      if (report.violations > 0) {
        return "violations at delta=" + std::to_string(delta) + " g=" + std::to_string(g);
      }
    }
  }
  return {};
}

std::string tradeoff_check() {
  for (double alpha : {0.5, 1.0, 1.2, 1.5, 2.0}) {
    for (std::optional<double> mu : {std::optional<double>{}, std::optional<double>{0.4}}) {
      ScalingRegime reg;
      reg.alpha = alpha;
      reg.beta = 0.9;
      reg.mu = mu;
      auto product = [&](std::uint64_t n) {
        const double na = static_cast<double>(n) * reg.cell_rule.area(n);
        return predicted_delay_order(reg, n) * predicted_throughput_order(reg, n) * na;
      };
      const double p0 = product(1000);
      const double p1 = product(1000000);
      if (std::abs(p1 / p0 - 1.0) > 1e-9) return "D*lambda*n*a drifts for alpha=" + std::to_string(alpha);
    }
  }
  return {};
}

std::string bookkeeping_check() {
  NetworkConfig cfg;
  cfg.n = 2000;
  cfg.beta = 0.6;
  cfg.alpha = 0.8;
  const auto pop = make_popularity(cfg);
  const auto prob = make_problem(cfg, pop);
  const auto X = round_to_integers(solve(prob), prob);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto m = simulate_once(cfg, pop, X, seed);
    if (!m.identity_holds()) return "sum of line counts differs from sum of hops";
  }
  return {};
}

}  // namespace

int run_invariant_checks(std::ostream& out) {
  const std::vector<std::pair<const char*, Check>> checks = {
      {"popularity: normalized and non-increasing", popularity_check},
      {"geometry: segment walk endpoints and adjacency", segment_check},
      {"geometry: ring search equals linear scan", nearest_check},
      {"geometry: odd-product sandwich bounds", sandwich_check},
      {"alloc: KKT residual <= 1e-8", kkt_check},
      {"sched: zero same-slot interference", schedule_check},
      {"scaling: D * lambda * n a constant in n", tradeoff_check},
      {"sim: line counts equal hop counts", bookkeeping_check},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    std::string err;
    try {
      err = fn();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    if (err.empty()) {
      out << "PASS  " << name << '\n';
    } else {
      out << "FAIL  " << name << ": " << err << '\n';
      ++failures;
    }
  }
  return failures;
}

}  // namespace ccn
