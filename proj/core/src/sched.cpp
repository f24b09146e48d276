#include "ccn/sched.hpp"

#include <algorithm>
#include <cmath>

#include "ccn/error.hpp"

namespace ccn {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be > 0");
}

// Colour of every position along one axis, and the number of colours used.
std::pair<std::vector<int>, int> axis_colours(int g, int k) {
  std::vector<int> colour(static_cast<std::size_t>(g));
  const int q = g / k;
  if (q <= 1) {
    for (int i = 0; i < g; ++i) colour[static_cast<std::size_t>(i)] = i;
    return {colour, g};
  }
  int used = 0;
  for (int run = 0; run < q; ++run) {
    const int begin = static_cast<int>(static_cast<long long>(run) * g / q);
    const int end = static_cast<int>(static_cast<long long>(run + 1) * g / q);
    for (int i = begin; i < end; ++i) colour[static_cast<std::size_t>(i)] = i - begin;
    used = std::max(used, end - begin);
  }
  return {colour, used};
}

int cyclic_gap(int i, int j, int g) {
  const int d = std::abs(i - j) % g;
  return std::min(d, g - d);
}

}  // namespace

bool interferes(TorusPoint tx1, TorusPoint rx1, TorusPoint tx2, double delta) {
  return torus_distance(tx2, rx1) < (1.0 + delta) * torus_distance(tx1, rx1);
}

int interference_bound(double delta) {
  check_delta(delta);
  const double v = 16.0 * (1.0 + delta) * (1.0 + delta);
  return static_cast<int>(std::ceil(v - 1e-9));
}

int reuse_distance(double delta) {
  check_delta(delta);
  return static_cast<int>(std::ceil((1.0 + delta) * std::sqrt(8.0) - 1e-12)) + 2;
}

TdmSchedule build_schedule(const CellGrid& grid, double delta) {
  check_delta(delta);
  TdmSchedule s(grid);
  s.delta_ = delta;
  s.range_ = std::sqrt(8.0 * grid.area());
  s.k_ = reuse_distance(delta);
  const int g = grid.cells_per_side();
  const auto [rows, nr] = axis_colours(g, s.k_);
  const auto [cols, nc] = axis_colours(g, s.k_);
  s.frame_ = nr * nc;
  s.colors_.resize(grid.cell_count());
  for (int r = 0; r < g; ++r) {
    for (int c = 0; c < g; ++c) {
      s.colors_[grid.flat({r, c})] = rows[static_cast<std::size_t>(r)] * nc +
                                     cols[static_cast<std::size_t>(c)];
    }
  }
  return s;
}

CellDistanceRange cell_distance_range(const CellGrid& grid, CellIndex a, CellIndex b) {
  const int g = grid.cells_per_side();
  const double s = grid.side();
  const int dr = cyclic_gap(a.row, b.row, g);
  const int dc = cyclic_gap(a.col, b.col, g);
  const double min_r = std::max(0, dr - 1) * s;
  const double min_c = std::max(0, dc - 1) * s;
  const double max_r = std::min((dr + 1) * s, 0.5);
  const double max_c = std::min((dc + 1) * s, 0.5);
  return {std::hypot(min_r, min_c), std::hypot(max_r, max_c)};
}

AuditReport audit_schedule(const TdmSchedule& schedule) {
  const CellGrid& grid = schedule.grid();
  const int g = grid.cells_per_side();
  const double guard = 1.0 + schedule.delta();

  AuditReport report;
  report.frame_length = schedule.frame_length();
  report.bound = interference_bound(schedule.delta()) + 1;

  std::vector<std::vector<std::size_t>> by_slot(static_cast<std::size_t>(schedule.frame_length()));
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    by_slot[static_cast<std::size_t>(schedule.slots()[i])].push_back(i);
  }

  for (const auto& members : by_slot) {
    for (std::size_t ia : members) {
      const CellIndex A = grid.unflat(ia);
      for (std::size_t ib : members) {
        if (ia == ib) continue;
        const CellIndex B = grid.unflat(ib);
        ++report.pairs_checked;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const CellIndex R{((A.row + dr) % g + g) % g, ((A.col + dc) % g + g) % g};
            const double wanted = cell_distance_range(grid, A, R).max;
            const double competing = cell_distance_range(grid, B, R).min;
            if (competing < guard * wanted) {
              ++report.violations;
              if (!report.first_violation) report.first_violation = AuditViolation{A, R, B};
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace ccn
