#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccn/geometry.hpp"
#include "ccn/scaling.hpp"

namespace ccn {

enum class Mode { kAdHoc, kHeterogeneous };

const char* to_string(Mode mode);

/// One fully specified network point.
struct NetworkConfig {
  std::uint64_t n = 1000;
  double beta = 0.5;  // M = ceil(n^beta)
  double K = 1.0;
  double alpha = 1.0;
  double delta = 1.0;
  Mode mode = Mode::kAdHoc;
  std::optional<double> mu;  // f = n^mu
  std::optional<double> f;   // explicit base-station count; wins over mu
  CellRule cell_rule = CellRule::two_log_n_over_n();
  double W = 1.0;
  int trials = 1;
  std::uint64_t seed = 1;
  double concentration_factor = 4.0;
  std::vector<double> weights;  // custom popularity; empty means Zipf(alpha)

  std::uint64_t catalog_size() const;
  /// floor(f) or floor(n^mu) in heterogeneous mode, 0 otherwise.
  std::uint64_t base_station_count() const;
  /// Heterogeneous with at least one base station. With no base stations the
  /// network is the ad hoc one.
  bool uses_base_stations() const { return base_station_count() > 0; }
  CellGrid grid() const { return CellGrid::from_area(cell_rule.area(n)); }
  ScalingRegime regime() const;

  /// Throws InvalidArgument describing the first bad field.
  void validate() const;
};

/// Parsed sweep description. List-valued keys span a Cartesian grid.
struct SweepSpec {
  std::string name = "sweep";
  std::vector<std::uint64_t> n{1000};
  std::vector<double> alpha{1.0};
  std::vector<double> beta{0.5};
  std::vector<double> K{1.0};
  std::vector<double> delta{1.0};
  std::vector<double> mu;
  std::vector<double> f;
  std::vector<Mode> modes{Mode::kAdHoc};
  std::vector<CellRule> cell_rules{CellRule::two_log_n_over_n()};
  std::vector<double> weights;
  double W = 1.0;
  int trials = 8;
  std::uint64_t seed = 1;
  double concentration_factor = 4.0;
  bool simulate = false;
  std::uint64_t max_sim_n = 100000;
  int threads = 0;  // 0: hardware concurrency

  /// Points in deterministic order; n varies fastest.
  std::vector<NetworkConfig> expand() const;

  /// Effective settings, one "key = value" entry per key, for provenance.
  std::vector<std::pair<std::string, std::string>> settings() const;
};

/// `key = value[, value...]` lines; `#` starts a comment. Unknown keys,
/// duplicates, malformed numbers and out-of-range values raise ConfigError
/// carrying the line number.
SweepSpec parse_sweep_config(std::istream& in);
SweepSpec load_sweep_config(const std::string& path);

}  // namespace ccn
