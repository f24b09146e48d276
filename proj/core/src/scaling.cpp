#include "ccn/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "ccn/error.hpp"

namespace ccn {
namespace {

constexpr double kBreakTol = 1e-12;

void validate(const ScalingRegime& reg, std::uint64_t n) {
  if (n < 3) throw InvalidArgument("scaling: n must be >= 3");
  if (!(reg.alpha >= 0.0) || !std::isfinite(reg.alpha)) {
    throw InvalidArgument("scaling: alpha must be >= 0");
  }
  if (!(reg.beta > 0.0)) throw InvalidArgument("scaling: beta must be > 0");
  if (!(reg.K > 0.0)) throw InvalidArgument("scaling: K must be > 0");
  if (reg.mu && !(*reg.mu >= 0.0 && *reg.mu < 1.0)) {
    throw InvalidArgument("scaling: mu must lie in [0, 1)");
  }
  if (!reg.heterogeneous() && reg.beta >= 1.0) {
    throw UnsupportedRegime("scaling: the ad hoc network needs beta < 1");
  }
  if (reg.heterogeneous() && reg.cell_rule.kind() != CellRule::Kind::kTwoLogNOverN) {
    throw UnsupportedRegime("scaling: heterogeneous orders are given only for a(n) = 2 ln n / n");
  }
}

// Closed forms with a(n) = 2 log n / n substituted, written in M.
double adhoc_default_delay(AlphaClass c, double alpha, double M) {
  const double L = std::log(M);
  switch (c) {
    case AlphaClass::kAboveThreeHalves: return 1.0;
    case AlphaClass::kThreeHalves: return L;
    case AlphaClass::kBetweenOneAndThreeHalves: return std::pow(M, 1.5 - alpha) / std::sqrt(L);
    case AlphaClass::kOne: return std::sqrt(M) / std::pow(L, 1.5);
    case AlphaClass::kBelowOne: return std::sqrt(M / L);
  }
  return 1.0;
}

double adhoc_default_throughput(AlphaClass c, double alpha, double M) {
  const double L = std::log(M);
  switch (c) {
    case AlphaClass::kAboveThreeHalves: return 1.0 / L;
    case AlphaClass::kThreeHalves: return 1.0 / (L * L);
    case AlphaClass::kBetweenOneAndThreeHalves: return std::pow(M, alpha - 1.5) / std::sqrt(L);
    case AlphaClass::kOne: return std::sqrt(L / M);
    case AlphaClass::kBelowOne: return 1.0 / std::sqrt(M * L);
  }
  return 1.0;
}

// General-a delay order for the ad hoc network.
double adhoc_general_delay(AlphaClass c, double alpha, double M, double na) {
  switch (c) {
    case AlphaClass::kAboveThreeHalves: return 1.0;
    case AlphaClass::kThreeHalves: return std::max(1.0, std::pow(std::log(M), 1.5) / std::sqrt(na));
    case AlphaClass::kBetweenOneAndThreeHalves:
      return std::max(1.0, std::pow(M, 1.5 - alpha) / std::sqrt(na));
    case AlphaClass::kOne: return std::max(1.0, std::sqrt(M) / (std::log(M) * std::sqrt(na)));
    case AlphaClass::kBelowOne: return std::max(1.0, std::sqrt(M / na));
  }
  return 1.0;
}

double hetero_delay(AlphaClass c, double alpha, double n_over_f, double logn) {
  switch (c) {
    case AlphaClass::kAboveThreeHalves: return 1.0;
    case AlphaClass::kThreeHalves: return logn;
    case AlphaClass::kBetweenOneAndThreeHalves:
      return std::pow(n_over_f, 1.5 - alpha) / std::sqrt(logn);
    case AlphaClass::kOne:
    case AlphaClass::kBelowOne: return std::sqrt(n_over_f / logn);
  }
  return 1.0;
}

double hetero_throughput(AlphaClass c, double alpha, double n_over_f, double logn) {
  switch (c) {
    case AlphaClass::kAboveThreeHalves: return 1.0 / logn;
    case AlphaClass::kThreeHalves: return 1.0 / (logn * logn);
    case AlphaClass::kBetweenOneAndThreeHalves:
      return 1.0 / (std::sqrt(logn) * std::pow(n_over_f, 1.5 - alpha));
    case AlphaClass::kOne:
    case AlphaClass::kBelowOne: return std::sqrt(1.0 / (n_over_f * logn));
  }
  return 1.0;
}

}  // namespace

CellRule CellRule::fixed(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("cell rule: fixed a must lie in (0, 1]");
  return CellRule(Kind::kFixed, a);
}

double CellRule::area(std::uint64_t n) const {
  if (kind_ == Kind::kFixed) return a_;
  if (n < 2) throw InvalidArgument("cell rule: n must be >= 2");
  const double x = static_cast<double>(n);
  return std::min(1.0, 2.0 * std::log(x) / x);
}

std::string CellRule::describe() const {
  if (kind_ == Kind::kFixed) return "fixed:" + std::to_string(a_);
  return "2ln(n)/n";
}

AlphaClass classify_alpha(double alpha) {
  if (std::abs(alpha - 1.0) <= kBreakTol) return AlphaClass::kOne;
  if (std::abs(alpha - 1.5) <= kBreakTol) return AlphaClass::kThreeHalves;
  if (alpha < 1.0) return AlphaClass::kBelowOne;
  if (alpha < 1.5) return AlphaClass::kBetweenOneAndThreeHalves;
  return AlphaClass::kAboveThreeHalves;
}

const char* to_string(AlphaClass c) {
  switch (c) {
    case AlphaClass::kBelowOne: return "alpha<1";
    case AlphaClass::kOne: return "alpha=1";
    case AlphaClass::kBetweenOneAndThreeHalves: return "1<alpha<3/2";
    case AlphaClass::kThreeHalves: return "alpha=3/2";
    case AlphaClass::kAboveThreeHalves: return "alpha>3/2";
  }
  return "?";
}

double expected_hops(double a, double X, double f) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("expected_hops: a must lie in (0, 1]");
  if (!(X >= 0.0) || !(f >= 0.0)) throw InvalidArgument("expected_hops: X and f must be >= 0");
  if (X + f <= 0.0) throw InvalidArgument("expected_hops: no holder and no base station");
  return std::max(1.0, 1.0 / std::sqrt(a * (X + f)));
}

double improvement_threshold(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("improvement_threshold: beta must be > 0");
  return std::max(0.0, 1.0 - beta);
}

bool heterogeneous_gain_branch(const ScalingRegime& reg) {
  if (!reg.mu) return false;
  const double mu = *reg.mu;
  if (classify_alpha(reg.alpha) == AlphaClass::kAboveThreeHalves) {
    return reg.beta > 3.0 * (1.0 - mu) / (2.0 * reg.alpha);
  }
  return mu >= improvement_threshold(reg.beta);
}

double predicted_delay_order(const ScalingRegime& reg, std::uint64_t n) {
  validate(reg, n);
  const AlphaClass c = classify_alpha(reg.alpha);
  const double x = static_cast<double>(n);
  const double M = std::pow(x, reg.beta);
  if (heterogeneous_gain_branch(reg)) {
    return hetero_delay(c, reg.alpha, std::pow(x, 1.0 - *reg.mu), std::log(x));
  }
  if (reg.cell_rule.kind() == CellRule::Kind::kTwoLogNOverN) {
    return adhoc_default_delay(c, reg.alpha, M);
  }
  return adhoc_general_delay(c, reg.alpha, M, x * reg.cell_rule.area(n));
}

double predicted_throughput_order(const ScalingRegime& reg, std::uint64_t n) {
  validate(reg, n);
  const AlphaClass c = classify_alpha(reg.alpha);
  const double x = static_cast<double>(n);
  const double M = std::pow(x, reg.beta);
  if (heterogeneous_gain_branch(reg)) {
    return hetero_throughput(c, reg.alpha, std::pow(x, 1.0 - *reg.mu), std::log(x));
  }
  if (reg.cell_rule.kind() == CellRule::Kind::kTwoLogNOverN) {
    return adhoc_default_throughput(c, reg.alpha, M);
  }
  // Mirror of the delay through D * lambda = 1 / (n a).
  return 1.0 / (x * reg.cell_rule.area(n) * adhoc_general_delay(c, reg.alpha, M, x * reg.cell_rule.area(n)));
}

std::pair<double, double> m1_m2_orders(const ScalingRegime& reg, std::uint64_t n) {
  validate(reg, n);
  const AlphaClass c = classify_alpha(reg.alpha);
  const double alpha = reg.alpha;
  const double x = static_cast<double>(n);
  const double M = std::pow(x, reg.beta);
  const double logn = std::log(x);

  if (reg.heterogeneous()) {
    const double n_over_f = std::pow(x, 1.0 - *reg.mu);
    switch (c) {
      case AlphaClass::kAboveThreeHalves: {
        const double e = 3.0 / (2.0 * alpha);
        return {logn, std::min(M + 1.0, std::pow(n_over_f, e) * std::pow(logn, 1.0 - e))};
      }
      case AlphaClass::kThreeHalves: return {1.0, std::min(M + 1.0, n_over_f / logn)};
      default: return {1.0, std::min(M + 1.0, n_over_f)};
    }
  }

  const double a = reg.cell_rule.area(n);
  const double na = x * a;
  switch (c) {
    case AlphaClass::kAboveThreeHalves: {
      const double e = 3.0 / (2.0 * alpha);
      const double m2 = (2.0 * alpha - 3.0) / (2.0 * alpha) * x * reg.K * std::pow(a, 1.0 - e);
      return {std::min(M, na), std::min(M + 1.0, m2)};
    }
    case AlphaClass::kThreeHalves: return {std::min(M, na / logn), M + 1.0};
    default: {
      const double e = 3.0 / (2.0 * alpha);
      const double third = std::pow(na, e) / std::pow(M, e - 1.0);
      return {std::max(1.0, std::min({M, na, third})), M + 1.0};
    }
  }
}

RegimeDescription describe(const ScalingRegime& reg) {
  const AlphaClass c = classify_alpha(reg.alpha);
  RegimeDescription d;
  const bool hetero = heterogeneous_gain_branch(reg);
  d.label = std::string(reg.heterogeneous() ? (hetero ? "hetero:" : "hetero-as-adhoc:") : "adhoc:") +
            to_string(c);
  const double nan = std::nan("");
  if (reg.cell_rule.kind() != CellRule::Kind::kTwoLogNOverN) {
    d.label += ":fixed-a";
    d.delay = {nan, nan};
    d.throughput = {nan, nan};
    return d;
  }
  // Exponents in n; log M and log n differ by the constant factor beta.
  const double s = hetero ? 1.0 - *reg.mu : reg.beta;
  switch (c) {
    case AlphaClass::kAboveThreeHalves:
      d.delay = {0.0, 0.0};
      d.throughput = {0.0, -1.0};
      break;
    case AlphaClass::kThreeHalves:
      d.delay = {0.0, 1.0};
      d.throughput = {0.0, -2.0};
      break;
    case AlphaClass::kBetweenOneAndThreeHalves:
      d.delay = {s * (1.5 - reg.alpha), -0.5};
      d.throughput = {-s * (1.5 - reg.alpha), -0.5};
      break;
    case AlphaClass::kOne:
      if (hetero) {
        d.delay = {s / 2.0, -0.5};
        d.throughput = {-s / 2.0, -0.5};
      } else {
        d.delay = {s / 2.0, -1.5};
        d.throughput = {-s / 2.0, 0.5};
      }
      break;
    case AlphaClass::kBelowOne:
      d.delay = {s / 2.0, -0.5};
      d.throughput = {-s / 2.0, -0.5};
      break;
  }
  return d;
}

}  // namespace ccn
