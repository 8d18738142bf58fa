#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace prarefact::fit {

/// Time-stamped norm trajectory. Times strictly increase; values are >= 0.
struct DecaySeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;

  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
  std::size_t size() const noexcept { return times.size(); }
  /// Throws DomainError on length mismatch, non-increasing times or negative values.
  void validate() const;
};

struct FitResult {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double rms_residual = 0.0;
  double window_lo = 0.0;  ///< first sample time used
  double window_hi = 0.0;  ///< last sample time used
  std::size_t samples = 0;
};

constexpr std::size_t kMinFitSamples = 8;

/// Least-squares line through (log(1+t), log v) over samples with t in [t_min, t_max].
/// Throws InsufficientData (fewer than 8 samples) or NonpositiveValue.
FitResult fit_power_law(const DecaySeries& series, double t_min, double t_max);

}  // namespace prarefact::fit
