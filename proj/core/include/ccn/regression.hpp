#pragma once

#include <cstddef>
#include <span>

namespace ccn {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;    // used in the fit
  std::size_t excluded = 0;  // dropped for nonpositive x or y
};

/// Ordinary least squares of ln y on ln x. Nonpositive or non-finite pairs are
/// excluded (and counted). Throws InvalidArgument unless at least 4 points
/// remain and they span at least two decades of x.
SlopeFit slope_regression(std::span<const double> x, std::span<const double> y);

}  // namespace ccn
