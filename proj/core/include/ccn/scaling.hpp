#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace ccn {

/// How the cell area a(n) is chosen.
class CellRule {
 public:
  enum class Kind { kTwoLogNOverN, kFixed };

  /// a(n) = 2 ln(n) / n, the connectivity threshold (natural log).
  static CellRule two_log_n_over_n() { return CellRule(Kind::kTwoLogNOverN, 0.0); }
  static CellRule fixed(double a);

  Kind kind() const noexcept { return kind_; }
  double fixed_value() const noexcept { return a_; }
  /// Target area before rounding to a square grid; clipped to at most 1.
  double area(std::uint64_t n) const;
  std::string describe() const;

 private:
  CellRule(Kind kind, double a) : kind_(kind), a_(a) {}
  Kind kind_;
  double a_;
};

enum class AlphaClass { kBelowOne, kOne, kBetweenOneAndThreeHalves, kThreeHalves, kAboveThreeHalves };

/// Breakpoints 1 and 3/2 are matched within 1e-12.
AlphaClass classify_alpha(double alpha);
const char* to_string(AlphaClass c);

struct ScalingRegime {
  double alpha = 1.0;
  double beta = 0.5;            // M = n^beta
  std::optional<double> mu;     // f = n^mu; empty for the pure ad hoc network
  double K = 1.0;
  CellRule cell_rule = CellRule::two_log_n_over_n();

  bool heterogeneous() const noexcept { return mu.has_value(); }
};

/// max(1, 1/sqrt(a (X + f))).
double expected_hops(double a, double X, double f);

/// Orders with unit constants; meaningful only through slopes and ratios.
/// The catalog size is taken as the real number n^beta so that the delay and
/// throughput predictions multiply to exactly 1/(n a(n)) up to a fixed factor.
double predicted_delay_order(const ScalingRegime& reg, std::uint64_t n);
double predicted_throughput_order(const ScalingRegime& reg, std::uint64_t n);

/// Orders of the thresholds m1 and m2 (1-based indices).
std::pair<double, double> m1_m2_orders(const ScalingRegime& reg, std::uint64_t n);

/// max(0, 1 - beta): base stations improve the order only for mu above this.
double improvement_threshold(double beta);

/// True when the heterogeneous regime uses its own closed forms (m2 <= M)
/// rather than the ad hoc ones.
bool heterogeneous_gain_branch(const ScalingRegime& reg);

/// Polynomial exponent in n and power of log n of the predicted orders,
/// available for the default cell rule.
struct OrderShape {
  double n_exponent = 0.0;
  double log_power = 0.0;
};

struct RegimeDescription {
  std::string label;
  OrderShape delay;
  OrderShape throughput;
};

RegimeDescription describe(const ScalingRegime& reg);

}  // namespace ccn
