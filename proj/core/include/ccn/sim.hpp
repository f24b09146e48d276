#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccn/alloc.hpp"
#include "ccn/config.hpp"
#include "ccn/geometry.hpp"
#include "ccn/popularity.hpp"
#include "ccn/sched.hpp"

namespace ccn {

/// Zipf(alpha) over ceil(n^beta) contents, or the custom weights.
PopularityModel make_popularity(const NetworkConfig& cfg);

/// Allocation problem for the configured network on its realized grid area.
AllocationProblem make_problem(const NetworkConfig& cfg, const PopularityModel& pop);

struct NetworkInstance {
  std::vector<TorusPoint> nodes;
  std::vector<TorusPoint> base_stations;
  std::vector<std::vector<std::uint32_t>> holders;  // per content rank, sorted node ids
  CellGrid grid{1};
  TdmSchedule schedule = build_schedule(CellGrid(1), 1.0);
  std::uint64_t seed = 0;
};

/// Node and base-station positions are i.i.d. uniform; holders of each content
/// are a uniform subset of size X_m, independent across contents. Each draw
/// family has its own random stream, so the instance is a pure function of
/// (cfg, X, seed).
NetworkInstance build_instance(const NetworkConfig& cfg, std::span<const std::int64_t> X,
                               std::uint64_t seed);

/// One content rank per node by inverse-CDF sampling of p.
std::vector<std::uint32_t> draw_requests(const PopularityModel& pop, std::size_t nodes,
                                         std::uint64_t seed);

struct Route {
  std::vector<CellIndex> cells;  // requester's cell first
  std::uint32_t hops = 1;        // max(1, |cells| - 1)
  double length = 0.0;
  bool via_base_station = false;
  bool self_served = false;  // the requester is the only copy
};

/// Nearest-cache routing over an immutable instance. Per-content holder indexes
/// are built on first use, so a Router must not be shared across threads.
class Router {
 public:
  explicit Router(const NetworkInstance& inst);

  /// The nearest copy excluding the requester itself; a base station wins
  /// unless a wireless holder is strictly closer. Throws NoHolderError when no
  /// copy exists anywhere.
  Route trace(std::uint32_t requester, std::size_t content) const;

 private:
  const HolderIndex& holder_index(std::size_t content) const;

  const NetworkInstance& inst_;
  std::optional<HolderIndex> stations_;
  mutable std::vector<std::optional<HolderIndex>> per_content_;
};

Route trace_request(const NetworkInstance& inst, std::uint32_t requester, std::size_t content);

struct MeasureOptions {
  double W = 1.0;
  double concentration_factor = 4.0;
};

struct Measurement {
  std::vector<std::uint32_t> lines_per_cell;  // Y_j: lines charged to cell j
  std::uint64_t total_lines = 0;              // sum_j Y_j
  std::uint64_t total_hops = 0;               // sum_i H_i
  double max_load = 0.0;
  double mean_load = 0.0;
  double mean_hops = 0.0;
  double realized_delay = 0.0;       // slots
  double realized_throughput = 0.0;  // contents per node per slot
  double raw_delay = 0.0;            // before any fallback
  double raw_throughput = 0.0;
  bool condition1_ok = false;  // every cell holds a node
  bool condition2_ok = false;  // max_load / mean_load within the factor
  bool fallback_used = false;
  std::size_t empty_cells = 0;
  int reuse_factor = 0;  // N + 1, used for delay and throughput
  int frame_length = 0;  // length of the built schedule, diagnostic only
  std::size_t base_station_routes = 0;
  std::vector<std::uint64_t> hops_per_content;
  std::vector<std::uint32_t> requests_per_content;

  bool identity_holds() const noexcept { return total_lines == total_hops; }
};

/// Each route charges one line to every cell that forwards its Interest
/// (all route cells but the holder's, or the single cell of a one-cell route),
/// so sum_j Y_j equals sum_i H_i exactly.
Measurement measure(const NetworkInstance& inst, std::span<const std::uint32_t> requests,
                    const MeasureOptions& opts = {});

/// One complete Monte-Carlo trial: instance, requests and measurement.
Measurement simulate_once(const NetworkConfig& cfg, const PopularityModel& pop,
                          std::span<const std::int64_t> X, std::uint64_t seed);

struct FieldStats {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  double min = 0.0;
  double max = 0.0;
};

struct TrialSummary {
  int trials = 0;
  std::vector<std::uint64_t> seeds;
  FieldStats mean_hops;
  FieldStats max_load;
  FieldStats mean_load;
  FieldStats realized_delay;
  FieldStats realized_throughput;
  FieldStats tradeoff;  // delay * throughput * n * a
  double condition1_rate = 0.0;
  double condition2_rate = 0.0;
  double fallback_rate = 0.0;
  bool identity_all = true;
  int frame_length = 0;
  int reuse_factor = 0;
};

/// Trial i uses derive_seed(base_seed, i). Trials run on `threads` workers
/// (0 = hardware concurrency) and are folded in index order, so the summary is
/// bit-identical for any thread count.
TrialSummary run_trials(const NetworkConfig& cfg, const PopularityModel& pop,
                        std::span<const std::int64_t> X, int trials, std::uint64_t base_seed,
                        int threads = 0);

/// Same folding rule over caller-provided measurements.
TrialSummary summarize(const std::vector<Measurement>& runs, std::vector<std::uint64_t> seeds,
                       double n_times_a);

}  // namespace ccn
