#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccn/geometry.hpp"

namespace ccn {

/// Protocol-model guard: the competing transmitter tx2 spoils tx1 -> rx1 when
/// it is closer to rx1 than (1 + delta) times the wanted link.
bool interferes(TorusPoint tx1, TorusPoint rx1, TorusPoint tx2, double delta);

/// N = ceil(16 (1 + delta)^2).
int interference_bound(double delta);

/// Same-slot cells must be this many cells apart along some axis:
/// ceil((1 + delta) sqrt(8)) + 2.
int reuse_distance(double delta);

/// Periodic cell colouring; each cell is active in exactly one slot per frame.
class TdmSchedule {
 public:
  const CellGrid& grid() const noexcept { return grid_; }
  double delta() const noexcept { return delta_; }
  /// Transmission range sqrt(8 a): a node reaches its own and the 8 adjacent cells.
  double range() const noexcept { return range_; }
  int frame_length() const noexcept { return frame_; }
  int reuse() const noexcept { return k_; }
  int slot(CellIndex c) const { return colors_[grid_.flat(c)]; }
  const std::vector<int>& slots() const noexcept { return colors_; }

 private:
  friend TdmSchedule build_schedule(const CellGrid& grid, double delta);
  TdmSchedule(const CellGrid& grid) : grid_(grid) {}

  CellGrid grid_;
  double delta_ = 0.0;
  double range_ = 0.0;
  int k_ = 1;
  int frame_ = 1;
  std::vector<int> colors_;
};

/// Each axis is cut into q = floor(g/k) contiguous runs and a cell's colour on
/// that axis is its offset inside its run. This equals (row mod k, col mod k)
/// when k divides g, and stays sound across the torus seam when it does not.
/// With q <= 1 every position on the axis gets its own colour.
TdmSchedule build_schedule(const CellGrid& grid, double delta);

struct AuditViolation {
  CellIndex transmitter;
  CellIndex receiver;
  CellIndex interferer;
};

struct AuditReport {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  std::optional<AuditViolation> first_violation;
  int frame_length = 0;
  int bound = 0;  // N + 1
  bool frame_within_bound() const noexcept { return frame_length <= bound; }
};

/// Exhaustive worst-case check over every ordered pair of distinct same-slot
/// cells. A pair is safe when, for each receiver cell R around the transmitter
/// cell A, the closest point of the interferer cell B to R is at least
/// (1 + delta) times the farthest point of A from R. Distances are exact
/// rectangle-to-rectangle torus distances, so cell corners are the extremes.
AuditReport audit_schedule(const TdmSchedule& schedule);

/// Smallest and largest torus distance between points of two cells.
struct CellDistanceRange {
  double min;
  double max;
};
CellDistanceRange cell_distance_range(const CellGrid& grid, CellIndex a, CellIndex b);

}  // namespace ccn
