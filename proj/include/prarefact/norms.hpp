#pragma once

#include <limits>
#include <span>

#include "prarefact/grid.hpp"
#include "prarefact/solver.hpp"

namespace prarefact {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Midpoint-rule L^q norm (sum |v_i|^q * volume)^{1/q}; q = kInf gives max |v_i|.
/// Summation order is fixed, so the result does not depend on the thread count.
/// Throws DomainError for q < 1.
double lq_norm(const Field& field, double q);
double lq_norm(std::span<const double> values, double cell_volume, double q);

/// L^q norm of |grad u|, using the face-centred gradient magnitudes averaged over the
/// face families of all axes.
double gradient_norm(const Field& field, double q, const solver::ChannelGhosts* ghosts = nullptr);

/// Arithmetic mean of the cell values (fixed summation order).
double mean(const Field& field);

}  // namespace prarefact
