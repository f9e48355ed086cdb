#pragma once

#include <cstdint>
#include <random>

#include "circval/arcs.hpp"
#include "circval/kernel.hpp"
#include "circval/plfunction.hpp"

namespace circval {

// Seeded generator for test inputs; all draws are deterministic given the
// seed, so every report can be reproduced from (config, seed).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  long uniform_int(long lo, long hi) {  // inclusive
    return std::uniform_int_distribution<long>(lo, hi)(engine_);
  }
  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Random canonical PL function with up to max_nodes nodes, abscissae on the
/// grid k/grid_den and values p/q with |p| <= value_num_max, q <= value_den_max.
PLFunction random_pl(Rng& rng, int max_nodes, long grid_den = 1024,
                     long value_num_max = 16, long value_den_max = 4);

/// Random PL function symmetric about s = 1/2.
PLFunction random_symmetric_pl(Rng& rng, int max_half_nodes,
                               long grid_den = 512, long value_num_max = 8,
                               long value_den_max = 4);

/// Random disjoint union of up to max_arcs arcs.
ArcSet random_arcset(Rng& rng, int max_arcs, long grid_den = 256);

/// Random polynomial kernel with every term carrying a positive slope power
/// (vanishes at gamma = 0), degrees <= 3 in each variable.
KernelSpec random_polynomial_slope_kernel(Rng& rng, int max_terms = 4);

}  // namespace circval
