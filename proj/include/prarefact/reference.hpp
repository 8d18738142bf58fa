#pragma once

// Serial reference implementation of one scheme step. It shares no code with the
// production kernel (no padding, no fast power paths) and exists to check it.

#include "prarefact/flux.hpp"
#include "prarefact/grid.hpp"
#include "prarefact/solver.hpp"

namespace prarefact::solver::reference {

/// One explicit Euler step with neighbour lookups resolved cell by cell.
/// Performs no stability check.
Field step_serial(const Field& field, const FluxModel& flux, const SolverParams& params, double dt,
                  const ChannelGhosts* ghosts = nullptr);

}  // namespace prarefact::solver::reference
