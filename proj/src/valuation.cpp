#include "circval/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace circval {

ValuationHandle make_kernel_valuation(const KernelSpec& spec, double tol) {
  ValuationHandle handle;
  handle.rotation_invariant = true;
  handle.vanishes_on_constants = spec.flat_part_is_zero();
  handle.provenance = ValuationHandle::Provenance::Kernel;
  handle.kernel = spec;
  handle.quad_tol = tol;
  handle.evaluator = [spec, tol](const PLFunction& f) {
    return eval_kernel_valuation(spec, f, tol);
  };
  return handle;
}

ValuationHandle make_opaque_kernel_valuation(const KernelSpec& spec, double tol) {
  ValuationHandle handle;
  handle.rotation_invariant = true;
  handle.vanishes_on_constants = spec.flat_part_is_zero();
  handle.provenance = ValuationHandle::Provenance::External;
  handle.quad_tol = tol;
  handle.evaluator = [spec, tol](const PLFunction& f) {
    return eval_kernel_valuation(spec, f, tol);
  };
  return handle;
}

ValuationHandle make_external_valuation(
    std::function<double(const PLFunction&)> evaluator, bool rotation_invariant,
    bool vanishes_on_constants) {
  ValuationHandle handle;
  handle.evaluator = std::move(evaluator);
  handle.rotation_invariant = rotation_invariant;
  handle.vanishes_on_constants = vanishes_on_constants;
  handle.provenance = ValuationHandle::Provenance::External;
  return handle;
}

ValuationHandle translate_valuation(const ValuationHandle& v, const Rat& lambda) {
  ValuationHandle handle;
  handle.rotation_invariant = v.rotation_invariant;
  handle.vanishes_on_constants = v.vanishes_on_constants;
  handle.provenance = ValuationHandle::Provenance::Derived;
  handle.quad_tol = v.quad_tol;
  const double at_constant = v(PLFunction::constant(lambda));
  auto base = v.evaluator;
  handle.evaluator = [base, lambda, at_constant](const PLFunction& f) {
    return base(f.shifted(lambda)) - at_constant;
  };
  return handle;
}

namespace {

// Exact integral of the PL interpolant of eta over [x, y], given samples
// eta[k] at a + k*h (k = 0..n) and the prefix integrals at the grid nodes.
class SampledEta {
 public:
  SampledEta(double a, double h, std::vector<double> samples)
      : a_(a), h_(h), eta_(std::move(samples)) {
    prefix_.assign(eta_.size(), 0);
    for (size_t k = 1; k < eta_.size(); ++k)
      prefix_[k] = prefix_[k - 1] + 0.5 * h_ * (eta_[k - 1] + eta_[k]);
  }

  double at(double t) const {
    const size_t k = cell(t);
    const double frac = (t - (a_ + static_cast<double>(k) * h_)) / h_;
    return eta_[k] + frac * (eta_[k + 1] - eta_[k]);
  }

  double integral_from_start(double t) const {
    const size_t k = cell(t);
    const double left = a_ + static_cast<double>(k) * h_;
    return prefix_[k] + 0.5 * (t - left) * (eta_[k] + at(t));
  }

  double integral(double x, double y) const {
    return integral_from_start(y) - integral_from_start(x);
  }

 private:
  size_t cell(double t) const {
    const double raw = (t - a_) / h_;
    const long k = std::lround(std::floor(raw));
    return static_cast<size_t>(
        std::clamp<long>(k, 0, static_cast<long>(eta_.size()) - 2));
  }

  double a_, h_;
  std::vector<double> eta_;
  std::vector<double> prefix_;
};

}  // namespace

ValuationHandle flat_component(const ValuationHandle& v, const FlatSettings& settings) {
  if (v.provenance == ValuationHandle::Provenance::Kernel && v.kernel) {
    return make_kernel_valuation(v.kernel->flat_part(), v.quad_tol);
  }
  ValuationHandle handle;
  handle.rotation_invariant = true;  // averaging over the circle
  handle.vanishes_on_constants = v.vanishes_on_constants;
  handle.provenance = ValuationHandle::Provenance::Derived;
  handle.quad_tol = v.quad_tol;
  auto base = v.evaluator;
  const int n = std::max(2, settings.eta_samples);
  const double margin = settings.range_margin;
  handle.evaluator = [base, n, margin](const PLFunction& f) -> double {
    Rat lo = f.nodes().front().v;
    Rat hi = lo;
    for (const Breakpoint& bp : f.nodes()) {
      lo = std::min(lo, bp.v);
      hi = std::max(hi, bp.v);
    }
    if (lo == hi) return base(PLFunction::constant(lo));
    const double a = to_double(lo) - margin;
    const double b = to_double(hi) + margin;
    const double h = (b - a) / n;
    std::vector<double> samples(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
      samples[static_cast<size_t>(k)] =
          base(PLFunction::constant(Rat(a + h * k)));
    const SampledEta eta(a, h, std::move(samples));

    double total = 0;
    for (const auto& seg : f.segments()) {
      const double v0 = to_double(seg.v_begin);
      const double v1 = to_double(seg.v_end);
      const double len = to_double(seg.length());
      if (v0 == v1) {
        total += len * eta.at(v0);
      } else {
        const double x = std::min(v0, v1);
        const double y = std::max(v0, v1);
        total += len * eta.integral(x, y) / (y - x);
      }
    }
    return total;
  };
  return handle;
}

ValuationHandle slope_component(const ValuationHandle& v, const FlatSettings& settings) {
  if (v.provenance == ValuationHandle::Provenance::Kernel && v.kernel) {
    return make_kernel_valuation(v.kernel->slope_part(), v.quad_tol);
  }
  const ValuationHandle flat = flat_component(v, settings);
  ValuationHandle handle;
  handle.rotation_invariant = v.rotation_invariant;
  handle.vanishes_on_constants = true;
  handle.provenance = ValuationHandle::Provenance::Derived;
  handle.quad_tol = v.quad_tol;
  auto base = v.evaluator;
  auto flat_eval = flat.evaluator;
  handle.evaluator = [base, flat_eval](const PLFunction& f) {
    return base(f) - flat_eval(f);
  };
  return handle;
}

double check_valuation_identity(const ValuationHandle& v, const PLFunction& f,
                                const PLFunction& g) {
  const LatticePair pair = lattice(f, g);
  return std::fabs(v(pair.join) + v(pair.meet) - v(f) - v(g));
}

double check_inclusion_exclusion(const ValuationHandle& v,
                                 std::span<const PLFunction> functions) {
  const size_t n = functions.size();
  if (n < 2) throw std::invalid_argument("need at least two functions");
  if (n > 16) throw std::invalid_argument("family too large");

  PLFunction join_all = functions[0];
  for (size_t i = 1; i < n; ++i) join_all = lattice(join_all, functions[i]).join;

  double alternating = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::optional<PLFunction> meet;
    for (size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      meet = meet ? lattice(*meet, functions[i]).meet : functions[i];
    }
    const int bits = __builtin_popcount(mask);
    alternating += ((bits % 2) ? 1.0 : -1.0) * v(*meet);
  }
  return std::fabs(v(join_all) - alternating);
}

PLFunction Transform::apply(const PLFunction& f) const {
  return kind == Kind::Rotation ? f.rotated(amount) : f.reflected();
}

double check_invariance(const ValuationHandle& v, const PLFunction& f,
                        std::span<const Transform> transforms) {
  const double base = v(f);
  double worst = 0;
  for (const Transform& t : transforms)
    worst = std::max(worst, std::fabs(v(t.apply(f)) - base));
  return worst;
}

TauProbeReport tau_continuity_probe(const ValuationHandle& v,
                                    std::span<const PLFunction> sequence,
                                    const PLFunction& limit,
                                    std::optional<double> norm_cap) {
  TauProbeReport report;
  report.limit_value = v(limit);
  const FunctionNorms limit_norms = norms(limit);
  report.lip_bound = to_double(limit_norms.lip_per_turn);
  report.sup_norm_bound = to_double(limit_norms.sup_norm);
  for (const PLFunction& f : sequence) {
    const FunctionNorms fn = norms(f);
    TauProbeEntry entry;
    entry.d_tau_to_limit = to_double(d_tau(f, limit));
    entry.value = v(f);
    entry.deviation = std::fabs(entry.value - report.limit_value);
    entry.lip = to_double(fn.lip_per_turn);
    report.lip_bound = std::max(report.lip_bound, entry.lip);
    report.sup_norm_bound =
        std::max(report.sup_norm_bound, to_double(fn.sup_norm));
    report.entries.push_back(entry);
  }
  if (norm_cap)
    report.norm_cap_exceeded =
        std::max(report.lip_bound, report.sup_norm_bound) > *norm_cap;
  return report;
}

double UniformProbeReport::max_delta_with_dtau_below(double cap) const {
  double worst = 0;
  for (const ProbePair& p : pairs)
    if (p.d_tau <= cap) worst = std::max(worst, p.delta_v);
  return worst;
}

double UniformProbeReport::min_dtau_with_delta_at_least(double delta) const {
  double best = std::numeric_limits<double>::infinity();
  for (const ProbePair& p : pairs)
    if (p.delta_v >= delta) best = std::min(best, p.d_tau);
  return best;
}

}  // namespace circval
