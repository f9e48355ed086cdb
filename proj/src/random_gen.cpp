#include "circval/random_gen.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace circval {

PLFunction random_pl(Rng& rng, int max_nodes, long grid_den, long value_num_max,
                     long value_den_max) {
  const int count = static_cast<int>(rng.uniform_int(2, std::max(2, max_nodes)));
  std::set<long> grid;
  while (static_cast<int>(grid.size()) < count)
    grid.insert(rng.uniform_int(0, grid_den - 1));
  std::vector<Breakpoint> nodes;
  for (long k : grid)
    nodes.push_back({rat(k, grid_den),
                     rat(rng.uniform_int(-value_num_max, value_num_max),
                         rng.uniform_int(1, value_den_max))});
  return PLFunction::from_breakpoints(std::move(nodes));
}

PLFunction random_symmetric_pl(Rng& rng, int max_half_nodes, long grid_den,
                               long value_num_max, long value_den_max) {
  const int count = static_cast<int>(rng.uniform_int(1, std::max(1, max_half_nodes)));
  std::set<long> grid;
  while (static_cast<int>(grid.size()) < count)
    grid.insert(rng.uniform_int(1, grid_den / 2 - 1));
  auto value = [&] {
    return rat(rng.uniform_int(-value_num_max, value_num_max),
               rng.uniform_int(1, value_den_max));
  };
  std::vector<Breakpoint> nodes;
  nodes.push_back({Rat(0), value()});
  nodes.push_back({rat(1, 2), value()});
  for (long k : grid) {
    const Rat v = value();
    nodes.push_back({rat(k, grid_den), v});
    nodes.push_back({rat(grid_den - k, grid_den), v});
  }
  return pl_from_nodes(std::move(nodes));
}

ArcSet random_arcset(Rng& rng, int max_arcs, long grid_den) {
  const int count = static_cast<int>(rng.uniform_int(1, std::max(1, max_arcs)));
  std::set<long> cuts;
  while (static_cast<int>(cuts.size()) < 2 * count)
    cuts.insert(rng.uniform_int(0, grid_den - 1));
  std::vector<long> sorted(cuts.begin(), cuts.end());
  std::vector<Arc> arcs;
  for (size_t i = 0; i + 1 < sorted.size(); i += 2)
    arcs.emplace_back(rat(sorted[i], grid_den), rat(sorted[i + 1], grid_den));
  return ArcSet::from_arcs(std::move(arcs));
}

KernelSpec random_polynomial_slope_kernel(Rng& rng, int max_terms) {
  PolynomialKernel poly;
  const int terms = static_cast<int>(rng.uniform_int(1, std::max(1, max_terms)));
  for (int t = 0; t < terms; ++t) {
    PolyTerm term;
    term.lambda_pow = static_cast<int>(rng.uniform_int(0, 3));
    term.slope_pow = static_cast<int>(rng.uniform_int(1, 3));
    term.coeff = static_cast<double>(rng.uniform_int(-8, 8)) / 4.0;
    poly.terms.push_back(term);
  }
  return {poly, SlopeUnit::PerTurn};
}

}  // namespace circval
