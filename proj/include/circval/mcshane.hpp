#pragma once

#include <optional>
#include <span>
#include <vector>

#include "circval/plfunction.hpp"

namespace circval {

// One constraint piece for the Lipschitz extension: nodes with strictly
// increasing lifted abscissae spanning at most one turn. A single node is a
// point constraint; several nodes prescribe the PL restriction on the arc
// from the first to the last abscissa.
struct McShaneDatum {
  std::vector<Breakpoint> nodes;
};

struct McShaneClamp {
  PLFunction lower;
  PLFunction upper;
};

/// Lipschitz extension of the data with per-turn constant <= L, computed as
/// the exact upper envelope of the data cones, then clamped into
/// [lower, upper] when a clamp is supplied. Throws std::invalid_argument
/// when the data admits no L-Lipschitz extension (a cross-gap violation),
/// when a restriction itself exceeds L, or when the clamp is infeasible.
PLFunction mcshane_extend(std::span<const McShaneDatum> data, const Rat& L,
                          const std::optional<McShaneClamp>& clamp = {});

}  // namespace circval
