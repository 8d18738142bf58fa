#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>

namespace prarefact {

/// Flux f = (f_1, ..., f_N) with f(0) = f'(0) = 0 and f_1'' >= c_f > 0.
///
/// Burgers: every component is u^2/2.
/// Quartic: f_1 = u^2/2 + u^4/4 (so lambda(u) = u + u^3), transverse components u^2/2.
class FluxModel {
 public:
  enum class Kind { burgers, quartic };

  explicit FluxModel(Kind kind = Kind::burgers) : kind_(kind) {}

  static FluxModel burgers() { return FluxModel(Kind::burgers); }
  static FluxModel quartic() { return FluxModel(Kind::quartic); }
  /// Accepts "burgers" or "quartic"; throws DomainError otherwise.
  static FluxModel from_name(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  /// f_axis(u); axis is 0-based, axis 0 is the propagation direction x1.
  double value(int axis, double u) const noexcept {
    const double q = 0.5 * u * u;
    return (axis == 0 && kind_ == Kind::quartic) ? q + q * q : q;
  }
  /// f_axis'(u)
  double speed(int axis, double u) const noexcept {
    return (axis == 0 && kind_ == Kind::quartic) ? u + u * u * u : u;
  }
  /// f_axis''(u)
  double second(int axis, double u) const noexcept {
    return (axis == 0 && kind_ == Kind::quartic) ? 1.0 + 3.0 * u * u : 1.0;
  }

  /// Full flux vector f(u) written into `out` (one entry per axis).
  void evaluate(double u, std::span<double> out) const noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(static_cast<int>(i), u);
  }

  double lambda(double u) const noexcept { return speed(0, u); }
  double lambda_prime(double u) const noexcept { return second(0, u); }

  /// Uniform lower bound on f_1''.
  double convexity_floor() const noexcept { return 1.0; }

  /// max |f_axis'| over [lo, hi]; f_axis' is monotone so the endpoints suffice.
  double max_speed(int axis, double lo, double hi) const noexcept {
    const double a = speed(axis, lo);
    const double b = speed(axis, hi);
    return std::max(std::abs(a), std::abs(b));
  }

 private:
  Kind kind_;
};

}  // namespace prarefact
