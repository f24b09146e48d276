#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ccn {

/// Location on the unit torus; both coordinates live in [0, 1).
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;

  /// Wraps arbitrary coordinates into [0, 1).
  static TorusPoint wrapped(double x, double y);

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

double wrap_unit(double v);

/// Shortest wrapped displacement from `from` to `to`, each component in
/// [-0.5, 0.5]. An offset of exactly one half resolves to +0.5.
struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};
Displacement torus_displacement(TorusPoint from, TorusPoint to);

double torus_distance(TorusPoint p, TorusPoint q);

inline constexpr double kMaxTorusDistance = 0.70710678118654752440;  // sqrt(2)/2

struct CellIndex {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Square tessellation of the unit torus into g x g cells of side s = 1/g.
class CellGrid {
 public:
  explicit CellGrid(int cells_per_side);

  /// g = max(1, round(1/sqrt(a0))). The realized area 1/g^2 is what every
  /// downstream computation uses.
  static CellGrid from_area(double target_area);

  int cells_per_side() const noexcept { return g_; }
  double side() const noexcept { return side_; }
  double area() const noexcept { return area_; }
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(g_) * g_; }

  CellIndex cell_of(TorusPoint p) const;
  std::size_t flat(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * g_ + static_cast<std::size_t>(c.col);
  }
  CellIndex unflat(std::size_t i) const {
    return {static_cast<int>(i / g_), static_cast<int>(i % g_)};
  }

  friend bool operator==(const CellGrid& a, const CellGrid& b) { return a.g_ == b.g_; }

 private:
  int g_;
  double side_;
  double area_;
};

/// Geodesic segment between two torus points (the L_{H,R} line).
struct Segment {
  TorusPoint from;
  TorusPoint to;
  Displacement delta;
  double length = 0.0;

  static Segment geodesic(TorusPoint from, TorusPoint to);
};

/// Cells met by the segment, in traversal order.
///
/// Supercover walk: when the line passes exactly through a cell corner both
/// edge-sharing cells are emitted before the diagonal one, so consecutive
/// entries are always 8-neighbours. The first entry is cell_of(from) and the
/// last is cell_of(to). Consecutive repeats (only possible when g == 1) are
/// collapsed.
std::vector<CellIndex> cells_on_segment(const Segment& seg, const CellGrid& grid);

struct NearestHit {
  std::uint32_t id;
  double distance;
};

/// Bucketed index over a subset of points for nearest-neighbour queries on the
/// torus. Queries scan buckets in expanding Chebyshev rings and stop once no
/// unvisited bucket can hold a closer point; ties go to the lowest id.
class HolderIndex {
 public:
  HolderIndex(std::span<const TorusPoint> positions, std::span<const std::uint32_t> ids,
              const CellGrid& buckets);

  /// Roughly two points per bucket.
  static CellGrid default_buckets(std::size_t count);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// Nearest indexed point, optionally ignoring one id. Empty if nothing qualifies.
  std::optional<NearestHit> nearest(TorusPoint query,
                                    std::optional<std::uint32_t> exclude = std::nullopt) const;

 private:
  struct Entry {
    TorusPoint point;
    std::uint32_t id;
  };

  std::optional<NearestHit> linear_scan(TorusPoint query,
                                        std::optional<std::uint32_t> exclude) const;

  CellGrid buckets_;
  std::vector<Entry> points_;        // grouped by bucket
  std::vector<std::uint32_t> start_;  // bucket b owns points_[start_[b], start_[b+1])
};

/// Nearest holder among `holder_ids` (indices into `positions`).
/// Throws NoHolderError when the holder set is empty.
NearestHit nearest_holder(TorusPoint p, std::span<const TorusPoint> positions,
                          std::span<const std::uint32_t> holder_ids, const CellGrid& buckets);

/// Mean distance from a point to the nearest of X uniform holders in a
/// unit-area disk: (1/sqrt(pi)) * prod_{k=1..X} 2k/(2k+1).
double expected_nearest_distance_exact(std::uint64_t X);

/// g(n) = ((n-1)/n) * ((n-3)/(n-2)) * ... * (2/3) for odd n >= 3.
double odd_descent_product(std::uint64_t n);

struct SandwichBounds {
  double lower;     // n2 / (n1 + 1)
  double ratio_sq;  // (g(n1) / g(n2))^2
  double upper;     // (n2 + 1) / n1
};

/// Requires odd n1 > n2 >= 3.
SandwichBounds appendix_a_bounds(std::uint64_t n1, std::uint64_t n2);

}  // namespace ccn
