#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ccn/error.hpp"
#include "ccn/geometry.hpp"
#include "ccn/random.hpp"
#include "ccn/sched.hpp"

namespace ccn {
namespace {

TEST(Interferes, Examples) {
  EXPECT_TRUE(interferes({0.1, 0.1}, {0.2, 0.1}, {0.2, 0.1}, 1.0));
  // Competing transmitter at twice the guard distance.
  EXPECT_FALSE(interferes({0.1, 0.5}, {0.2, 0.5}, {0.6, 0.5}, 1.0));
  EXPECT_TRUE(interferes({0.1, 0.5}, {0.2, 0.5}, {0.35, 0.5}, 1.0));
}

TEST(Interferes, StrictMargin) {
  // Exactly at the guard distance is allowed.
  EXPECT_FALSE(interferes({0.0, 0.0}, {0.25, 0.0}, {0.25, 0.5}, 1.0));
}

TEST(InterferenceBound, Examples) {
  EXPECT_EQ(interference_bound(1.0), 64);
  EXPECT_EQ(interference_bound(0.5), 36);
  EXPECT_EQ(interference_bound(3.0), 256);
  EXPECT_EQ(interference_bound(0.25), 25);
  EXPECT_THROW(interference_bound(0.0), InvalidArgument);
}

TEST(ReuseDistance, Examples) {
  EXPECT_EQ(reuse_distance(1.0), 8);
  EXPECT_EQ(reuse_distance(0.5), 7);
  EXPECT_EQ(reuse_distance(0.25), 6);
  EXPECT_EQ(reuse_distance(2.0), 11);
}

TEST(Schedule, SingleCell) {
  const auto s = build_schedule(CellGrid(1), 1.0);
  EXPECT_EQ(s.frame_length(), 1);
  EXPECT_EQ(s.slot({0, 0}), 0);
  EXPECT_EQ(audit_schedule(s).violations, 0u);
}

TEST(Schedule, DeltaOneGrid64) {
  const auto s = build_schedule(CellGrid(64), 1.0);
  EXPECT_EQ(s.reuse(), 8);
  EXPECT_EQ(s.frame_length(), 64);
  const auto report = audit_schedule(s);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(report.bound, 65);
  EXPECT_TRUE(report.frame_within_bound());
  EXPECT_NEAR(s.range(), std::sqrt(8.0) / 64.0, 1e-16);
}

TEST(Schedule, DeltaHalfGrid32AuditsClean) {
  // k = 7 does not divide 32, so four runs of 8 cells give C = 64; this is
  // above N + 1 = 37 even though the colouring itself is interference free.
  const auto s = build_schedule(CellGrid(32), 0.5);
  EXPECT_EQ(s.reuse(), 7);
  const auto report = audit_schedule(s);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(report.frame_length, 64);
  EXPECT_EQ(report.bound, 37);
}

TEST(Schedule, ModuloColouringWhenReuseDivides) {
  const auto s = build_schedule(CellGrid(24), 1.0);
  for (int r = 0; r < 24; ++r) {
    for (int c = 0; c < 24; ++c) EXPECT_EQ(s.slot({r, c}), (r % 8) * 8 + c % 8);
  }
}

TEST(ScheduleProperty, EveryCellOncePerFrame) {
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    for (int g = 1; g <= 64; ++g) {
      const auto s = build_schedule(CellGrid(g), delta);
      ASSERT_EQ(s.slots().size(), static_cast<std::size_t>(g) * g);
      std::set<int> used;
      for (int v : s.slots()) {
        ASSERT_GE(v, 0);
        ASSERT_LT(v, s.frame_length());
        used.insert(v);
      }
      ASSERT_EQ(used.size(), static_cast<std::size_t>(s.frame_length())) << "g=" << g;
    }
  }
}

TEST(ScheduleProperty, FrameIndependentOfGridWhenReuseDivides) {
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    const int k = reuse_distance(delta);
    for (int mult = 2; mult * k <= 128; ++mult) {
      EXPECT_EQ(build_schedule(CellGrid(mult * k), delta).frame_length(), k * k);
    }
  }
}

TEST(ScheduleProperty, AuditCleanOnAssortedGrids) {
  for (double delta : {0.25, 0.5, 1.0, 2.0}) {
    for (int g : {1, 2, 5, 9, 13, 17, 23, 31, 40}) {
      const auto report = audit_schedule(build_schedule(CellGrid(g), delta));
      EXPECT_EQ(report.violations, 0u) << "g=" << g << " delta=" << delta;
    }
  }
}

TEST(ScheduleProperty, SampledPlacementsNeverInterfere) {
  // Independent of the rectangle audit: random transmitters, receivers in the
  // 8-neighbourhood and same-slot interferers.
  auto rng = make_stream(401, Stream::kScratch);
  for (double delta : {0.25, 1.0}) {
    for (int g : {12, 19, 30}) {
      const CellGrid grid(g);
      const auto s = build_schedule(grid, delta);
      const double side = grid.side();
      auto point_in = [&](CellIndex c) {
        return TorusPoint{(c.col + uniform01(rng)) * side, (c.row + uniform01(rng)) * side};
      };
      for (int t = 0; t < 20000; ++t) {
        const CellIndex A = grid.unflat(uniform_below(rng, grid.cell_count()));
        const CellIndex R{(A.row + static_cast<int>(uniform_below(rng, 3)) - 1 + g) % g,
                          (A.col + static_cast<int>(uniform_below(rng, 3)) - 1 + g) % g};
        const CellIndex B = grid.unflat(uniform_below(rng, grid.cell_count()));
        if (B == A || s.slot(B) != s.slot(A)) continue;
        ASSERT_FALSE(interferes(point_in(A), point_in(R), point_in(B), delta));
      }
    }
  }
}

TEST(CellDistance, MatchesCornerSampling) {
  auto rng = make_stream(402, Stream::kScratch);
  for (int t = 0; t < 300; ++t) {
    const CellGrid grid(1 + static_cast<int>(uniform_below(rng, 20)));
    const CellIndex a = grid.unflat(uniform_below(rng, grid.cell_count()));
    const CellIndex b = grid.unflat(uniform_below(rng, grid.cell_count()));
    const auto range = cell_distance_range(grid, a, b);
    const double s = grid.side();
    double lo = HUGE_VAL;
    double hi = 0.0;
    const int steps = 8;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const TorusPoint p = TorusPoint::wrapped((a.col + double(i) / steps) * s, (a.row + double(j) / steps) * s);
        for (int u = 0; u <= steps; ++u) {
          for (int v = 0; v <= steps; ++v) {
            const TorusPoint q = TorusPoint::wrapped((b.col + double(u) / steps) * s, (b.row + double(v) / steps) * s);
            const double d = torus_distance(p, q);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
          }
        }
      }
    }
    // Sampled extremes lie inside the exact range and approach it.
    ASSERT_GE(lo, range.min - 1e-12);
    ASSERT_LE(hi, range.max + 1e-12);
    ASSERT_LE(lo - range.min, s / steps * 1.5 + 1e-12);
    ASSERT_LE(range.max - hi, s / steps * 1.5 + 1e-12);
  }
}

}  // namespace
}  // namespace ccn
