#include "ccn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccn/error.hpp"

namespace ccn {
namespace {

int wrap_index(long long i, int g) {
  const long long r = i % g;
  return static_cast<int>(r < 0 ? r + g : r);
}

double wrap_offset(double d) {
  // Shortest representative of d in (-0.5, 0.5]; d is already in (-1, 1).
  if (d > 0.5) return d - 1.0;
  if (d <= -0.5) return d + 1.0;
  return d;
}

// Unwrapped end cell along one axis: the integer nearest the geometric end that
// wraps onto the cell actually containing `to`.
long long end_cell(double end_coord, int target, int g) {
  const auto base = static_cast<long long>(std::floor(end_coord));
  long long best = base;
  double best_gap = std::numeric_limits<double>::infinity();
  for (long long cand : {base, base - 1, base + 1}) {
    if (wrap_index(cand, g) != target) continue;
    const double gap = std::abs(end_coord - (static_cast<double>(cand) + 0.5));
    if (gap < best_gap) {
      best_gap = gap;
      best = cand;
    }
  }
  return best;
}

}  // namespace

double wrap_unit(double v) {
  double w = v - std::floor(v);
  if (w >= 1.0) w = 0.0;  // v slightly below an integer can round up to 1.0
  return w;
}

TorusPoint TorusPoint::wrapped(double x, double y) { return {wrap_unit(x), wrap_unit(y)}; }

Displacement torus_displacement(TorusPoint from, TorusPoint to) {
  return {wrap_offset(to.x - from.x), wrap_offset(to.y - from.y)};
}

double torus_distance(TorusPoint p, TorusPoint q) {
  const Displacement d = torus_displacement(p, q);
  return std::hypot(d.dx, d.dy);
}

CellGrid::CellGrid(int cells_per_side) : g_(cells_per_side) {
  if (g_ < 1) throw InvalidArgument("CellGrid: cells per side must be >= 1");
  side_ = 1.0 / g_;
  area_ = side_ * side_;
}

CellGrid CellGrid::from_area(double target_area) {
  if (!(target_area > 0.0) || !std::isfinite(target_area)) {
    throw InvalidArgument("CellGrid: target cell area must be positive");
  }
  const double g = std::round(1.0 / std::sqrt(target_area));
  return CellGrid(static_cast<int>(std::max(1.0, g)));
}

CellIndex CellGrid::cell_of(TorusPoint p) const {
  const int col = std::min(static_cast<int>(p.x * g_), g_ - 1);
  const int row = std::min(static_cast<int>(p.y * g_), g_ - 1);
  return {row, col};
}

Segment Segment::geodesic(TorusPoint from, TorusPoint to) {
  const Displacement d = torus_displacement(from, to);
  return {from, to, d, std::hypot(d.dx, d.dy)};
}

std::vector<CellIndex> cells_on_segment(const Segment& seg, const CellGrid& grid) {
  const int g = grid.cells_per_side();
  const CellIndex first = grid.cell_of(seg.from);
  const CellIndex last = grid.cell_of(seg.to);

  const double x0 = seg.from.x * g;
  const double y0 = seg.from.y * g;
  const double ux = seg.delta.dx * g;
  const double uy = seg.delta.dy * g;

  long long cx = first.col;
  long long cy = first.row;
  const long long ex = end_cell(x0 + ux, last.col, g);
  const long long ey = end_cell(y0 + uy, last.row, g);

  const int sx = ex > cx ? 1 : (ex < cx ? -1 : 0);
  const int sy = ey > cy ? 1 : (ey < cy ? -1 : 0);
  const long long nx = std::llabs(ex - cx);
  const long long ny = std::llabs(ey - cy);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Parameter t in [0, 1] at which the walk crosses the next vertical/horizontal line.
  const double dtx = (sx != 0 && ux != 0.0) ? 1.0 / std::abs(ux) : kInf;
  const double dty = (sy != 0 && uy != 0.0) ? 1.0 / std::abs(uy) : kInf;
  double tx = kInf;
  double ty = kInf;
  if (sx > 0) tx = (static_cast<double>(cx + 1) - x0) * dtx;
  if (sx < 0) tx = (x0 - static_cast<double>(cx)) * dtx;
  if (sy > 0) ty = (static_cast<double>(cy + 1) - y0) * dty;
  if (sy < 0) ty = (y0 - static_cast<double>(cy)) * dty;

  std::vector<CellIndex> cells;
  cells.reserve(static_cast<std::size_t>(nx + ny + 2));
  auto emit = [&](long long col, long long row) {
    const CellIndex c{wrap_index(row, g), wrap_index(col, g)};
    if (cells.empty() || cells.back() != c) cells.push_back(c);
  };
  emit(cx, cy);

  long long ix = 0;
  long long iy = 0;
  while (ix < nx || iy < ny) {
    const bool can_x = ix < nx;
    const bool can_y = iy < ny;
    const double tol = 1e-12 * std::max(1.0, std::max(tx == kInf ? 0.0 : tx, ty == kInf ? 0.0 : ty));
    if (can_x && can_y && std::abs(tx - ty) <= tol) {
      // Exact corner crossing: the closed cells on both sides touch the line.
      emit(cx + sx, cy);
      emit(cx, cy + sy);
      cx += sx;
      cy += sy;
      ++ix;
      ++iy;
      tx += dtx;
      ty += dty;
    } else if (can_x && (!can_y || tx < ty)) {
      cx += sx;
      ++ix;
      tx += dtx;
    } else {
      cy += sy;
      ++iy;
      ty += dty;
    }
    emit(cx, cy);
  }
  return cells;
}

HolderIndex::HolderIndex(std::span<const TorusPoint> positions,
                         std::span<const std::uint32_t> ids, const CellGrid& buckets)
    : buckets_(buckets) {
  const std::size_t nb = buckets_.cell_count();
  start_.assign(nb + 1, 0);
  for (std::uint32_t id : ids) {
    if (id >= positions.size()) throw InvalidArgument("HolderIndex: id out of range");
    ++start_[buckets_.flat(buckets_.cell_of(positions[id])) + 1];
  }
  for (std::size_t b = 0; b < nb; ++b) start_[b + 1] += start_[b];
  points_.resize(ids.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::uint32_t id : ids) {
    const std::size_t b = buckets_.flat(buckets_.cell_of(positions[id]));
    points_[fill[b]++] = Entry{positions[id], id};
  }
}

CellGrid HolderIndex::default_buckets(std::size_t count) {
  const double g = std::floor(std::sqrt(static_cast<double>(count) / 2.0));
  return CellGrid(static_cast<int>(std::clamp(g, 1.0, 2048.0)));
}

std::optional<NearestHit> HolderIndex::linear_scan(TorusPoint query,
                                                   std::optional<std::uint32_t> exclude) const {
  std::optional<NearestHit> best;
  for (const Entry& e : points_) {
    if (exclude && e.id == *exclude) continue;
    const double d = torus_distance(query, e.point);
    if (!best || d < best->distance || (d == best->distance && e.id < best->id)) {
      best = NearestHit{e.id, d};
    }
  }
  return best;
}

std::optional<NearestHit> HolderIndex::nearest(TorusPoint query,
                                               std::optional<std::uint32_t> exclude) const {
  if (points_.empty()) return std::nullopt;
  const int B = buckets_.cells_per_side();
  const double side = buckets_.side();
  const CellIndex home = buckets_.cell_of(query);

  std::optional<NearestHit> best;
  auto scan_bucket = [&](int dr, int dc) {
    const CellIndex c{wrap_index(home.row + dr, B), wrap_index(home.col + dc, B)};
    const std::size_t b = buckets_.flat(c);
    for (std::uint32_t i = start_[b]; i < start_[b + 1]; ++i) {
      const Entry& e = points_[i];
      if (exclude && e.id == *exclude) continue;
      const double d = torus_distance(query, e.point);
      if (!best || d < best->distance || (d == best->distance && e.id < best->id)) {
        best = NearestHit{e.id, d};
      }
    }
  };

  for (int k = 0;; ++k) {
    if (2 * k + 1 >= B) return linear_scan(query, exclude);
    if (k == 0) {
      scan_bucket(0, 0);
    } else {
      for (int dc = -k; dc <= k; ++dc) {
        scan_bucket(-k, dc);
        scan_bucket(k, dc);
      }
      for (int dr = -k + 1; dr <= k - 1; ++dr) {
        scan_bucket(dr, -k);
        scan_bucket(dr, k);
      }
    }
    // Every bucket outside rings 0..k is at least k bucket sides away.
    if (best && best->distance < k * side) return best;
  }
}

NearestHit nearest_holder(TorusPoint p, std::span<const TorusPoint> positions,
                          std::span<const std::uint32_t> holder_ids, const CellGrid& buckets) {
  if (holder_ids.empty()) throw NoHolderError("nearest_holder: holder set is empty");
  HolderIndex index(positions, holder_ids, buckets);
  return *index.nearest(p);
}

double expected_nearest_distance_exact(std::uint64_t X) {
  if (X == 0) throw InvalidArgument("expected_nearest_distance_exact: X must be >= 1");
  const double inv_sqrt_pi = std::numbers::inv_sqrtpi;
  if (X <= 100000) {
    double prod = 1.0;
    for (std::uint64_t k = 1; k <= X; ++k) {
      prod *= static_cast<double>(2 * k) / static_cast<double>(2 * k + 1);
    }
    return inv_sqrt_pi * prod;
  }
  // The product is Gamma(X+1) Gamma(3/2) / Gamma(X+3/2), so the value is
  // Gamma(X+1) / (2 Gamma(X+3/2)) = sqrt(X) S(X) / (2 (X + 1/2)) with S the
  // asymptotic series of Gamma(X+1) / (sqrt(X) Gamma(X+1/2)). Terms past x^-4
  // are below 1e-20 here; lgamma differences would lose ~1e-10.
  const double x = static_cast<double>(X);
  const double u = 1.0 / x;
  const double series =
      1.0 + u * (1.0 / 8 + u * (1.0 / 128 + u * (-5.0 / 1024 + u * (-21.0 / 32768))));
  return std::sqrt(x) * series / (2.0 * (x + 0.5));
}

double odd_descent_product(std::uint64_t n) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("odd_descent_product: n must be odd and >= 3");
  double prod = 1.0;
  for (std::uint64_t j = 3; j <= n; j += 2) {
    prod *= static_cast<double>(j - 1) / static_cast<double>(j);
  }
  return prod;
}

SandwichBounds appendix_a_bounds(std::uint64_t n1, std::uint64_t n2) {
  if (n1 % 2 == 0 || n2 % 2 == 0) throw InvalidArgument("appendix_a_bounds: arguments must be odd");
  if (!(n1 > n2 && n2 >= 3)) throw InvalidArgument("appendix_a_bounds: need n1 > n2 >= 3");
  // g(n1)/g(n2) telescopes to the factors between n2+2 and n1.
  double ratio = 1.0;
  for (std::uint64_t j = n2 + 2; j <= n1; j += 2) {
    ratio *= static_cast<double>(j - 1) / static_cast<double>(j);
  }
  return {static_cast<double>(n2) / static_cast<double>(n1 + 1), ratio * ratio,
          static_cast<double>(n2 + 1) / static_cast<double>(n1)};
}

}  // namespace ccn
