#include <algorithm>
#include <cmath>

#include "circval/random_gen.hpp"
#include "circval/recovery.hpp"
#include "circval/valuation.hpp"

namespace circval {

namespace {

void add_pair(UniformProbeReport& report, const ValuationHandle& v,
              const PLFunction& f, const PLFunction& g, const char* family) {
  ProbePair pair;
  pair.d_tau = to_double(d_tau(f, g));
  pair.delta_v = std::fabs(v(f) - v(g));
  pair.family = family;
  report.worst_delta = std::max(report.worst_delta, pair.delta_v);
  report.pairs.push_back(std::move(pair));
}

}  // namespace

UniformProbeReport uniform_continuity_probe(const ValuationHandle& v, double m_bound,
                                            int budget, uint64_t seed) {
  if (m_bound <= 0) throw std::invalid_argument("norm bound must be positive");
  UniformProbeReport report;
  Rng rng(seed);

  // Structured family: saw pairs straddling a level from above and below.
  // Their d_tau is sigma/(2m) while a kernel discontinuity in lambda keeps
  // |V(f)-V(g)| bounded away from zero.
  const Rat sigma = std::min(Rat(1), Rat(m_bound));
  int added = 0;
  for (int m = 1; m <= 64 && added < budget / 2; m *= 2) {
    for (long k = -8; k <= 8 && added < budget / 2; ++k) {
      const Rat level = rat(k, 4);
      const Rat amplitude = sigma / (4 * m);
      if (to_double(abs(level) + 2 * amplitude) > m_bound) continue;
      add_pair(report, v, make_saw({level + amplitude, sigma, m}),
               make_saw({level - amplitude, sigma, m}), "saw_pair");
      ++added;
    }
  }

  // Random base functions with small slope-capped perturbations.
  while (added < budget) {
    PLFunction base = random_pl(rng, 12);
    const FunctionNorms fn = norms(base);
    const Rat size = std::max(fn.sup_norm, fn.lip_per_turn);
    if (size > 0) {
      // scale into half the norm ball, leaving room for the perturbation
      const Rat target = Rat(m_bound) / 2;
      if (size > target) base = base.scaled(target / size);
    }
    const int teeth = static_cast<int>(rng.uniform_int(2, 32));
    const Rat eps = rat(1, 4 * rng.uniform_int(2, 64));
    const Rat wiggle_slope = std::min(Rat(Rat(m_bound) / 2), Rat(eps * 4 * teeth));
    const PLFunction wiggle = make_saw({Rat(0), wiggle_slope, teeth});
    add_pair(report, v, base, base + wiggle, "random_perturbation");
    ++added;
  }
  return report;
}

}  // namespace circval
