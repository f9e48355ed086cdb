#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circval/kernel.hpp"
#include "circval/plfunction.hpp"

namespace circval {

// A valuation as an opaque evaluator plus the metadata flags that gate
// which checks and recoveries are admissible. Handles are immutable and
// the evaluator must be safe to call concurrently.
struct ValuationHandle {
  enum class Provenance { Kernel, Derived, External };

  std::function<double(const PLFunction&)> evaluator;
  bool rotation_invariant = false;
  bool vanishes_on_constants = false;
  Provenance provenance = Provenance::External;
  std::optional<KernelSpec> kernel;  // present when provenance == Kernel
  double quad_tol = 1e-10;

  double operator()(const PLFunction& f) const { return evaluator(f); }
};

ValuationHandle make_kernel_valuation(const KernelSpec& spec, double tol = 1e-10);

/// Same integral as make_kernel_valuation but presented as an external
/// black box (flags set truthfully, kernel spec hidden).
ValuationHandle make_opaque_kernel_valuation(const KernelSpec& spec,
                                             double tol = 1e-10);

ValuationHandle make_external_valuation(
    std::function<double(const PLFunction&)> evaluator, bool rotation_invariant,
    bool vanishes_on_constants);

/// V_lambda(f) = V(f + lambda) - V(lambda * 1); zero at f = 0 by construction.
ValuationHandle translate_valuation(const ValuationHandle& v, const Rat& lambda);

struct FlatSettings {
  int eta_samples = 512;   // lambda-grid resolution for black-box handles
  double range_margin = 0; // widen the sampled lambda range by this much
};

/// V_flat(f) = integral of eta(f(t)) dH^1 with eta(lambda) = V(lambda * 1).
/// Kernel handles decompose exactly through K(., 0); black boxes sample eta
/// on a grid and integrate the PL interpolant exactly.
ValuationHandle flat_component(const ValuationHandle& v, const FlatSettings& = {});

/// V_slope = V - V_flat; vanishes on constants.
ValuationHandle slope_component(const ValuationHandle& v, const FlatSettings& = {});

/// |V(f v g) + V(f ^ g) - V(f) - V(g)|
double check_valuation_identity(const ValuationHandle& v, const PLFunction& f,
                                const PLFunction& g);

/// |V(join of all) - alternating sum over meets of subfamilies|
double check_inclusion_exclusion(const ValuationHandle& v,
                                 std::span<const PLFunction> functions);

struct Transform {
  enum class Kind { Rotation, Reflection };
  Kind kind = Kind::Rotation;
  Rat amount;  // rotation angle in turns; unused for reflection

  static Transform rotation(Rat theta) {
    return {Kind::Rotation, std::move(theta)};
  }
  static Transform reflection() { return {Kind::Reflection, Rat(0)}; }
  PLFunction apply(const PLFunction& f) const;
};

double check_invariance(const ValuationHandle& v, const PLFunction& f,
                        std::span<const Transform> transforms);

struct TauProbeEntry {
  double d_tau_to_limit = 0;
  double value = 0;
  double deviation = 0;
  double lip = 0;
};

struct TauProbeReport {
  double lip_bound = 0;       // the constant C of the derivative condition
  double sup_norm_bound = 0;
  bool norm_cap_exceeded = false;
  double limit_value = 0;
  std::vector<TauProbeEntry> entries;
};

TauProbeReport tau_continuity_probe(const ValuationHandle& v,
                                    std::span<const PLFunction> sequence,
                                    const PLFunction& limit,
                                    std::optional<double> norm_cap = {});

struct ProbePair {
  double d_tau = 0;
  double delta_v = 0;
  std::string family;
};

struct UniformProbeReport {
  std::vector<ProbePair> pairs;
  double worst_delta = 0;
  double max_delta_with_dtau_below(double cap) const;
  double min_dtau_with_delta_at_least(double delta) const;
};

/// Stochastic search for pairs with small d_tau but large |V(f)-V(g)| among
/// functions of norm <= M. Purely diagnostic.
UniformProbeReport uniform_continuity_probe(const ValuationHandle& v, double m_bound,
                                            int budget, uint64_t seed);

}  // namespace circval
