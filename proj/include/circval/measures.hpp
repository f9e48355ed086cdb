#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "circval/recovery.hpp"
#include "circval/valuation.hpp"

namespace circval {

/// The truncation g_ab of a symmetric g: constant g(a) on [0,a] and its
/// mirror, g on (a,b] and its mirror, constant g(b) across the middle.
/// Requires g symmetric about s = 1/2 and 0 <= a <= b <= 1/2.
PLFunction make_gab(const PLFunction& g, const Rat& a, const Rat& b);

/// nu_g((a,b]) = V(g_ab) for symmetric g and (a,b] in [0,1/2].
/// Requires a handle that vanishes on constants.
double nu_raw(const ValuationHandle& v, const PLFunction& g, const Rat& a,
              const Rat& b);

// Element of the interval algebra: disjoint half-open arcs, each confined
// to [0,1/2] or to [1/2,1].
class IntervalAlgebraElement {
 public:
  static IntervalAlgebraElement from_arcs(std::vector<Arc> arcs);
  /// Splits (lo, hi] (hi - lo in (0,1]) at the wrap point and at 1/2.
  static IntervalAlgebraElement from_interval(const Rat& lo, const Rat& hi);

  const std::vector<Arc>& arcs() const { return arcs_; }
  Rat h1() const;

 private:
  std::vector<Arc> arcs_;
};

// Caches the symmetric half-circle extensions of g together with the
// interval values already computed. Reads are safe concurrently once no
// writer is active; evaluation order never affects results.
struct NuRecord {
  PLFunction g;
  PLFunction g1;  // symmetric extension of g restricted to [0,1/2]
  PLFunction g2;  // symmetric extension of g restricted to [1/2,1]
  mutable std::map<std::pair<Rat, Rat>, double> cache1, cache2;
};

NuRecord make_nu_record(const PLFunction& g);

/// The halved symmetric combination of Definition nu_g, additive over
/// disjoint algebra elements.
double nu(const ValuationHandle& v, const NuRecord& record,
          const IntervalAlgebraElement& element);

/// max over triples a < b < c of |nu((a,b]) + nu((b,c]) - nu((a,c])|.
double nu_additivity_check(const ValuationHandle& v, const PLFunction& g,
                           std::span<const std::array<Rat, 3>> triples);

struct RNEstimate {
  std::vector<double> trace;  // one ratio per epsilon in the schedule
  double value = 0;           // ratio at the last epsilon
  double cauchy_residual = 0;
};

/// nu((t-eps, t+eps]) / (2 eps) over the schedule; t must lie strictly
/// inside a linear segment of g.
RNEstimate radon_nikodym_estimate(const ValuationHandle& v, const NuRecord& record,
                                  const Rat& t, std::span<const Rat> eps_schedule);

/// max over sample points of |D_g(t) - recovered K(g(t), |g'(t)|)|.
double kernel_consistency_check(const ValuationHandle& v, const PLFunction& g,
                                std::span<const Rat> points,
                                const RecoverySettings& recovery,
                                std::span<const Rat> eps_schedule);

struct SegmentKernelSamples {
  double sigma = 0;
  double length = 0;
  std::vector<double> lambdas;
  std::vector<double> kernel_values;
};

struct ReconstructionResult {
  double direct = 0;
  double reconstructed = 0;
  double residual = 0;
  bool oscillation_warning = false;
  std::vector<SegmentKernelSamples> segments;
};

/// The main round trip: symmetrize g, recover the kernel along each
/// derivative segment, integrate, and compare with the direct evaluation.
ReconstructionResult reconstruct_via_kernel(const ValuationHandle& v,
                                            const PLFunction& g,
                                            const RecoverySettings& recovery,
                                            int lambda_samples = 33);

struct AbsContinuityCase {
  double nu_abs = 0;
  double h1 = 0;
  double bound = 0;  // 2 (C_g + 1) H^1
  bool ok = false;
};

struct AbsContinuityReport {
  double c_g = 0;
  std::vector<AbsContinuityCase> cases;
  bool all_ok = true;
};

/// Estimates C_g = sup theta over |lambda| <= sup|g|, gamma <= L(g), then
/// verifies |nu(A)| <= 2 (C_g + 1) H^1(A) on the supplied elements.
AbsContinuityReport absolute_continuity_check(
    const ValuationHandle& v, const PLFunction& g,
    std::span<const IntervalAlgebraElement> elements,
    const ControlSettings& control, int lambda_grid = 5);

}  // namespace circval
