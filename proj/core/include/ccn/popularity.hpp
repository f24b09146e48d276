#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ccn {

/// Generalized harmonic number H_alpha(M) = sum_{i=1..M} i^-alpha.
///
/// Terms are accumulated smallest-first with Neumaier compensation, which keeps
/// the relative error below 1e-12 for M up to 1e8.
double harmonic(std::uint64_t M, double alpha);

enum class HarmonicRegime { kConstant, kLog, kPower };

struct HarmonicClass {
  HarmonicRegime regime;
  double exponent;  // 1 - alpha for kPower, 0 otherwise
};

/// Asymptotic growth class of H_alpha(M) in M. alpha == 1 is matched within 1e-12.
HarmonicClass harmonic_class(double alpha);

/// Content request distribution over M objects, ranked most popular first.
///
/// Probabilities are strictly positive, sum to one, and are non-increasing in
/// rank. Custom weight vectors are sorted descending on construction;
/// `original_index(rank)` recovers the caller's ordering for reporting.
class PopularityModel {
 public:
  static PopularityModel zipf(std::size_t M, double alpha);
  static PopularityModel from_weights(std::vector<double> weights);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> probabilities() const noexcept { return p_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t rank) const { return p_[rank]; }
  std::size_t original_index(std::size_t rank) const { return permutation_[rank]; }

  /// Set only for models built by zipf().
  std::optional<double> zipf_exponent() const noexcept { return alpha_; }

 private:
  PopularityModel() = default;

  std::vector<double> weights_;
  std::vector<double> p_;
  std::vector<std::size_t> permutation_;
  std::optional<double> alpha_;
};

}  // namespace ccn
