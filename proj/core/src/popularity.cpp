#include "ccn/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccn/error.hpp"

namespace ccn {
namespace {

constexpr double kAlphaTol = 1e-12;

class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double zipf_term(std::uint64_t i, double alpha) {
  if (alpha == 1.0) return 1.0 / static_cast<double>(i);
  return std::pow(static_cast<double>(i), -alpha);
}

}  // namespace

double harmonic(std::uint64_t M, double alpha) {
  if (M == 0) return 0.0;
  if (alpha == 0.0) return static_cast<double>(M);
  NeumaierSum acc;
  for (std::uint64_t i = M; i >= 1; --i) acc.add(zipf_term(i, alpha));
  return acc.value();
}

HarmonicClass harmonic_class(double alpha) {
  if (std::abs(alpha - 1.0) <= kAlphaTol) return {HarmonicRegime::kLog, 0.0};
  if (alpha > 1.0) return {HarmonicRegime::kConstant, 0.0};
  return {HarmonicRegime::kPower, 1.0 - alpha};
}

PopularityModel PopularityModel::zipf(std::size_t M, double alpha) {
  if (M == 0) throw InvalidArgument("zipf: catalog size M must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("zipf: exponent alpha must be a finite value >= 0");
  }
  PopularityModel model;
  model.alpha_ = alpha;
  model.weights_.resize(M);
  for (std::size_t m = 0; m < M; ++m) model.weights_[m] = zipf_term(m + 1, alpha);
  const double h = harmonic(M, alpha);
  model.p_.resize(M);
  for (std::size_t m = 0; m < M; ++m) model.p_[m] = model.weights_[m] / h;
  model.permutation_.resize(M);
  std::iota(model.permutation_.begin(), model.permutation_.end(), std::size_t{0});
  return model;
}

PopularityModel PopularityModel::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw InvalidArgument("popularity: weight vector is empty");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("popularity: weights must be finite and strictly positive");
    }
  }
  PopularityModel model;
  model.permutation_.resize(weights.size());
  std::iota(model.permutation_.begin(), model.permutation_.end(), std::size_t{0});
  std::stable_sort(model.permutation_.begin(), model.permutation_.end(),
                   [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

  model.weights_.resize(weights.size());
  for (std::size_t r = 0; r < weights.size(); ++r) {
    model.weights_[r] = weights[model.permutation_[r]];
  }
  NeumaierSum total;
  for (auto it = model.weights_.rbegin(); it != model.weights_.rend(); ++it) total.add(*it);
  const double z = total.value();
  model.p_.resize(weights.size());
  for (std::size_t r = 0; r < weights.size(); ++r) model.p_[r] = model.weights_[r] / z;
  return model;
}

}  // namespace ccn
