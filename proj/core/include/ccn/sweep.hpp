#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccn/alloc.hpp"
#include "ccn/config.hpp"
#include "ccn/regression.hpp"
#include "ccn/sim.hpp"

namespace ccn {

inline constexpr const char* kCsvSchemaLine = "# ccn-scale v1 schema=1";

enum class RowStatus { kOk, kInfeasible, kInvalid };
const char* to_string(RowStatus s);

struct SweepRow {
  std::size_t index = 0;
  std::size_t group = 0;  // rows sharing every parameter except n
  NetworkConfig cfg;
  std::uint64_t M = 0;
  std::uint64_t base_stations = 0;
  int g = 1;
  double a_target = 0.0;
  double a = 0.0;
  std::string regime;
  RowStatus status = RowStatus::kOk;
  std::string message;
  std::uint64_t row_seed = 0;

  // Exact optimizer (empty unless status is kOk).
  std::optional<Allocation> allocation;
  double optimizer_delay = 0.0;
  double optimizer_throughput = 0.0;  // 1 / (n a D)

  // Closed-form orders (empty when the regime has none).
  std::optional<double> predicted_delay;
  std::optional<double> predicted_throughput;
  std::optional<double> predicted_m1;
  std::optional<double> predicted_m2;

  std::optional<TrialSummary> sim;
};

struct RegressionRow {
  std::size_t group = 0;
  std::string label;
  std::string metric;
  SlopeFit fit;
  double expected_exponent = 0.0;  // polynomial part of the predicted order; nan if none
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RegressionRow> regressions;
  std::vector<std::string> warnings;
  bool any_infeasible() const;
};

/// Theory path for one point: grid, exact allocation, closed-form orders and,
/// when `simulate` is set, `cfg.trials` Monte-Carlo trials seeded from `row_seed`.
SweepRow evaluate_point(const NetworkConfig& cfg, bool simulate, std::uint64_t row_seed,
                        int sim_threads = 1);

/// Evaluates every grid point on a worker pool; rows come back in config order.
SweepResult run_sweep(const SweepSpec& spec);

/// Group label such as "mode=adhoc alpha=0.8 beta=0.9 mu=- K=1 delta=1 cell_rule=2logn/n".
std::string group_label(const NetworkConfig& cfg);

void write_rows_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);
void write_regressions_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);

}  // namespace ccn
