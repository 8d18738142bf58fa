#include "prarefact/fit.hpp"

#include <cmath>

#include "prarefact/error.hpp"

namespace prarefact::fit {

void DecaySeries::validate() const {
  if (times.size() != values.size()) throw DomainError("series '" + label + "': times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("series '" + label + "': times must strictly increase");
    if (!(values[i] >= 0.0)) throw DomainError("series '" + label + "': values must be >= 0");
  }
}

FitResult fit_power_law(const DecaySeries& series, double t_min, double t_max) {
  series.validate();
  std::vector<double> xs, ys;
  FitResult r;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < t_min || t > t_max) continue;
    const double v = series.values[i];
    if (!(v > 0.0)) throw NonpositiveValue("series '" + series.label + "' has a nonpositive value in the fit window");
    if (xs.empty()) r.window_lo = t;
    r.window_hi = t;
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  const std::size_t n = xs.size();
  if (n < kMinFitSamples) {
    throw InsufficientData("series '" + series.label + "' has " + std::to_string(n) + " samples in the fit window, need " +
                           std::to_string(kMinFitSamples));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("series '" + series.label + "' has no spread in time within the window");
  r.exponent = sxy / sxx;
  r.log_prefactor = my - r.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (r.log_prefactor + r.exponent * xs[i]);
    ss += e * e;
  }
  r.rms_residual = std::sqrt(ss / static_cast<double>(n));
  r.samples = n;
  return r;
}

}  // namespace prarefact::fit
