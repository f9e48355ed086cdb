#include "circval/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circval {

namespace {

void require_constant_null(const ValuationHandle& v) {
  if (!v.vanishes_on_constants)
    throw std::invalid_argument(
        "nu is defined for valuations null on constants; decompose first");
}

const Rat kHalf = rat(1, 2);

}  // namespace

PLFunction make_gab(const PLFunction& g, const Rat& a, const Rat& b) {
  if (!(g == g.reflected()))
    throw std::invalid_argument("g_ab requires g symmetric about s = 1/2");
  if (a < 0 || a > b || b > kHalf)
    throw std::invalid_argument("g_ab requires 0 <= a <= b <= 1/2");
  const Rat ga = g.eval(a);
  if (a == b) return PLFunction::constant(ga);
  const Rat gb = g.eval(b);

  std::vector<Breakpoint> nodes{{a, ga}, {b, gb}, {1 - b, gb}, {mod1(1 - a), ga}};
  for (const Breakpoint& bp : g.nodes()) {
    if (bp.s > a && bp.s < b) nodes.push_back(bp);
    if (bp.s > 1 - b && bp.s < 1 - a) nodes.push_back(bp);
  }
  return pl_from_nodes(std::move(nodes));
}

double nu_raw(const ValuationHandle& v, const PLFunction& g, const Rat& a,
              const Rat& b) {
  require_constant_null(v);
  return v(make_gab(g, a, b));
}

IntervalAlgebraElement IntervalAlgebraElement::from_arcs(std::vector<Arc> arcs) {
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& x, const Arc& y) { return x.a < y.a; });
  for (size_t i = 0; i < arcs.size(); ++i) {
    if (arcs[i].b > 1 || !(arcs[i].b <= kHalf || arcs[i].a >= kHalf))
      throw std::invalid_argument(
          "algebra arcs must lie within one half-circle");
    if (i > 0 && arcs[i].a < arcs[i - 1].b)
      throw std::invalid_argument("algebra arcs must be disjoint");
  }
  IntervalAlgebraElement element;
  element.arcs_ = std::move(arcs);
  return element;
}

IntervalAlgebraElement IntervalAlgebraElement::from_interval(const Rat& lo,
                                                             const Rat& hi) {
  const Rat len = hi - lo;
  if (len <= 0 || len > 1)
    throw std::invalid_argument("interval length must be in (0,1]");
  const Rat start = mod1(lo);
  std::vector<std::pair<Rat, Rat>> spans;  // non-wrapping (x, y], y <= 1
  if (start + len <= 1) {
    spans.emplace_back(start, start + len);
  } else {
    spans.emplace_back(start, Rat(1));
    spans.emplace_back(Rat(0), start + len - 1);
  }
  std::vector<Arc> arcs;
  for (const auto& [x, y] : spans) {
    if (x < kHalf && y > kHalf) {
      arcs.emplace_back(x, kHalf);
      arcs.emplace_back(kHalf, y);
    } else {
      arcs.emplace_back(x, y);
    }
  }
  return from_arcs(std::move(arcs));
}

Rat IntervalAlgebraElement::h1() const {
  Rat total(0);
  for (const Arc& arc : arcs_) total += arc.length();
  return total;
}

namespace {

// Even extension of the restriction of g to one half-circle.
PLFunction symmetric_extension(const PLFunction& g, bool lower_half) {
  std::vector<Breakpoint> nodes{{Rat(0), g.eval(Rat(0))},
                                {kHalf, g.eval(kHalf)}};
  for (const Breakpoint& bp : g.nodes()) {
    const bool inside =
        lower_half ? (bp.s > 0 && bp.s < kHalf) : (bp.s > kHalf && bp.s < 1);
    if (!inside) continue;
    nodes.push_back(bp);
    nodes.push_back({1 - bp.s, bp.v});
  }
  return pl_from_nodes(std::move(nodes));
}

}  // namespace

NuRecord make_nu_record(const PLFunction& g) {
  return NuRecord{g, symmetric_extension(g, true), symmetric_extension(g, false),
                  {}, {}};
}

namespace {

double cached_nu_raw(const ValuationHandle& v, const PLFunction& g,
                     std::map<std::pair<Rat, Rat>, double>& cache, const Rat& a,
                     const Rat& b) {
  const auto key = std::make_pair(a, b);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double value = nu_raw(v, g, a, b);
  cache.emplace(key, value);
  return value;
}

}  // namespace

double nu(const ValuationHandle& v, const NuRecord& record,
          const IntervalAlgebraElement& element) {
  require_constant_null(v);
  double total = 0;
  for (const Arc& arc : element.arcs()) {
    if (arc.b <= kHalf) {
      total += cached_nu_raw(v, record.g1, record.cache1, arc.a, arc.b);
    } else {
      // The upper half mirrors through s -> 1-s onto the lower algebra.
      total += cached_nu_raw(v, record.g2, record.cache2, 1 - arc.b, 1 - arc.a);
    }
  }
  return total / 2;
}

namespace {

double nu_subinterval(const ValuationHandle& v, const NuRecord& record,
                      const Rat& lo, const Rat& hi) {
  if (lo == hi) return 0;
  return nu(v, record, IntervalAlgebraElement::from_interval(lo, hi));
}

}  // namespace

double nu_additivity_check(const ValuationHandle& v, const PLFunction& g,
                           std::span<const std::array<Rat, 3>> triples) {
  const NuRecord record = make_nu_record(g);
  double worst = 0;
  for (const auto& [a, b, c] : triples) {
    if (a > b || b > c) throw std::invalid_argument("triple must be ordered");
    const double lhs = nu_subinterval(v, record, a, b) +
                       nu_subinterval(v, record, b, c);
    const double rhs = nu_subinterval(v, record, a, c);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

RNEstimate radon_nikodym_estimate(const ValuationHandle& v, const NuRecord& record,
                                  const Rat& t, std::span<const Rat> eps_schedule) {
  if (eps_schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  const Rat t0 = mod1(t);
  for (const Breakpoint& bp : record.g.nodes())
    if (bp.s == t0)
      throw std::invalid_argument(
          "derivative undefined at a breakpoint of g");

  RNEstimate estimate;
  for (const Rat& eps : eps_schedule) {
    if (eps <= 0 || eps >= rat(1, 4))
      throw std::invalid_argument("epsilon must lie in (0, 1/4)");
    const double window = nu(
        v, record, IntervalAlgebraElement::from_interval(t0 - eps, t0 + eps));
    estimate.trace.push_back(window / to_double(2 * eps));
  }
  estimate.value = estimate.trace.back();
  const size_t n = estimate.trace.size();
  const size_t window = std::min<size_t>(3, n);
  for (size_t i = n - window; i + 1 < n; ++i)
    estimate.cauchy_residual = std::max(
        estimate.cauchy_residual,
        std::fabs(estimate.trace[i + 1] - estimate.trace[i]));
  return estimate;
}

namespace {

Rat slope_at(const PLFunction& g, const Rat& t) {
  const Rat t0 = mod1(t);
  for (const auto& seg : g.segments()) {
    const Rat offset = mod1(t0 - seg.s_begin);
    if (offset > 0 && offset < seg.length()) return seg.slope;
  }
  throw std::invalid_argument("point is not interior to a segment");
}

}  // namespace

double kernel_consistency_check(const ValuationHandle& v, const PLFunction& g,
                                std::span<const Rat> points,
                                const RecoverySettings& recovery,
                                std::span<const Rat> eps_schedule) {
  if (!v.rotation_invariant)
    throw std::invalid_argument("kernel consistency requires rotation invariance");
  const NuRecord record = make_nu_record(g);
  double worst = 0;
  for (const Rat& t : points) {
    const RNEstimate derivative =
        radon_nikodym_estimate(v, record, t, eps_schedule);
    const RecoveryPoint recovered = recover_kernel_point(
        v, g.eval(t), abs(slope_at(g, t)), recovery);
    worst = std::max(worst, std::fabs(derivative.value - recovered.extracted));
  }
  return worst;
}

ReconstructionResult reconstruct_via_kernel(const ValuationHandle& v,
                                            const PLFunction& g,
                                            const RecoverySettings& recovery,
                                            int lambda_samples) {
  if (!v.rotation_invariant || !v.vanishes_on_constants)
    throw std::invalid_argument(
        "reconstruction requires a rotation-invariant valuation null on "
        "constants");
  if (lambda_samples < 1) throw std::invalid_argument("need lambda samples");

  ReconstructionResult result;
  result.direct = v(g);

  const SymmetrizePair sym = symmetrize(g);
  double total = 0;
  for (const PLFunction* half : {&sym.join_sym, &sym.meet_sym}) {
    for (const auto& seg : half->segments()) {
      SegmentKernelSamples samples;
      const Rat sigma = abs(seg.slope);
      samples.sigma = to_double(sigma);
      samples.length = to_double(seg.length());
      if (seg.v_begin == seg.v_end || lambda_samples == 1) {
        const RecoveryPoint point =
            recover_kernel_point(v, seg.v_begin, sigma, recovery);
        result.oscillation_warning |= point.oscillation;
        samples.lambdas.push_back(to_double(seg.v_begin));
        samples.kernel_values.push_back(point.extracted);
        total += samples.length * point.extracted;
      } else {
        int n = lambda_samples;
        if (n % 2 == 0) ++n;  // composite Simpson needs an odd count
        double weighted = 0;
        for (int k = 0; k < n; ++k) {
          const Rat lambda =
              seg.v_begin + (seg.v_end - seg.v_begin) * k / (n - 1);
          const RecoveryPoint point =
              recover_kernel_point(v, lambda, sigma, recovery);
          result.oscillation_warning |= point.oscillation;
          samples.lambdas.push_back(to_double(lambda));
          samples.kernel_values.push_back(point.extracted);
          const double weight =
              (k == 0 || k == n - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
          weighted += weight * point.extracted;
        }
        total += samples.length * weighted / (3.0 * (n - 1));
      }
      result.segments.push_back(std::move(samples));
    }
  }
  result.reconstructed = total / 2;
  result.residual = std::fabs(result.reconstructed - result.direct);
  return result;
}

AbsContinuityReport absolute_continuity_check(
    const ValuationHandle& v, const PLFunction& g,
    std::span<const IntervalAlgebraElement> elements,
    const ControlSettings& control, int lambda_grid) {
  const FunctionNorms g_norms = norms(g);
  const ArcSet probe_region = ArcSet::from_arcs({Arc(Rat(0), rat(1, 4))});

  AbsContinuityReport report;
  std::vector<Rat> lambdas;
  if (g_norms.sup_norm == 0 || lambda_grid <= 1) {
    lambdas.push_back(Rat(0));
  } else {
    for (int i = 0; i < lambda_grid; ++i)
      lambdas.push_back(-g_norms.sup_norm +
                        2 * g_norms.sup_norm * i / (lambda_grid - 1));
  }
  for (const Rat& lambda : lambdas) {
    const ControlEstimate estimate = control_measure_estimate(
        v, lambda, g_norms.lip_per_turn, probe_region, control);
    report.c_g = std::max(report.c_g, estimate.theta);
  }

  const NuRecord record = make_nu_record(g);
  for (const IntervalAlgebraElement& element : elements) {
    AbsContinuityCase item;
    item.nu_abs = std::fabs(nu(v, record, element));
    item.h1 = to_double(element.h1());
    item.bound = 2 * (report.c_g + 1) * item.h1;
    item.ok = item.nu_abs <= item.bound + 1e-12 * std::max(1.0, item.bound);
    report.all_ok = report.all_ok && item.ok;
    report.cases.push_back(item);
  }
  return report;
}

}  // namespace circval
