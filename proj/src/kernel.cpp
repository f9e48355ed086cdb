#include "circval/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "circval/quadrature.hpp"

namespace circval {

namespace {

double ipow(double base, int exp) {
  double out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

double bilinear(const TabulatedKernel& table, double x, double y) {
  const auto& xs = table.lambda_grid;
  const auto& ys = table.gamma_grid;
  if (xs.empty() || ys.empty()) throw std::domain_error("empty tabulated kernel");
  if (x < xs.front() || x > xs.back() || y < ys.front() || y > ys.back())
    throw std::domain_error("tabulated kernel queried outside its grid");
  auto cell = [](const std::vector<double>& grid, double value) -> size_t {
    if (grid.size() == 1) return 0;
    size_t i = static_cast<size_t>(
        std::upper_bound(grid.begin(), grid.end(), value) - grid.begin());
    if (i > 0) --i;
    if (i + 1 >= grid.size()) i = grid.size() - 2;
    return i;
  };
  if (xs.size() == 1 && ys.size() == 1) return table.values[0][0];
  if (ys.size() == 1) {
    const size_t i = cell(xs, x);
    const double tx = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1 - tx) * table.values[i][0] + tx * table.values[i + 1][0];
  }
  if (xs.size() == 1) {
    const size_t j = cell(ys, y);
    const double ty = (y - ys[j]) / (ys[j + 1] - ys[j]);
    return (1 - ty) * table.values[0][j] + ty * table.values[0][j + 1];
  }
  const size_t i = cell(xs, x);
  const size_t j = cell(ys, y);
  const double tx = (x - xs[i]) / (xs[i + 1] - xs[i]);
  const double ty = (y - ys[j]) / (ys[j + 1] - ys[j]);
  return (1 - tx) * (1 - ty) * table.values[i][j] +
         tx * (1 - ty) * table.values[i + 1][j] +
         (1 - tx) * ty * table.values[i][j + 1] +
         tx * ty * table.values[i + 1][j + 1];
}

double convert_gamma(SlopeUnit unit, double gamma_per_turn) {
  return unit == SlopeUnit::PerRadian
             ? gamma_per_turn / (2 * std::numbers::pi)
             : gamma_per_turn;
}

// H^1 of {f >= threshold} within one linear segment, exact.
Rat segment_measure_at_least(const PLFunction::Segment& seg, const Rat& threshold) {
  if (seg.slope == 0) return seg.v_begin >= threshold ? seg.length() : Rat(0);
  const Rat& v0 = seg.v_begin;
  const Rat& v1 = seg.v_end;
  Rat fraction = (v1 > v0) ? (v1 - threshold) / (v1 - v0)
                           : (v0 - threshold) / (v0 - v1);
  fraction = std::min(Rat(1), std::max(Rat(0), fraction));
  return fraction * seg.length();
}

}  // namespace

double KernelSpec::eval(double lambda, double gamma_per_turn) const {
  const double gamma = convert_gamma(slope_unit, gamma_per_turn);
  if (const auto* poly = std::get_if<PolynomialKernel>(&form)) {
    double sum = 0;
    for (const PolyTerm& term : poly->terms)
      sum += term.coeff * ipow(lambda, term.lambda_pow) * ipow(gamma, term.slope_pow);
    return sum;
  }
  if (const auto* step = std::get_if<StepSlopeKernel>(&form))
    return lambda >= step->threshold ? gamma : 0.0;
  return bilinear(std::get<TabulatedKernel>(form), lambda, gamma);
}

bool KernelSpec::flat_part_is_zero() const {
  if (const auto* poly = std::get_if<PolynomialKernel>(&form)) {
    std::map<int, double> by_power;
    for (const PolyTerm& term : poly->terms)
      if (term.slope_pow == 0) by_power[term.lambda_pow] += term.coeff;
    for (const auto& [pow, coeff] : by_power)
      if (coeff != 0) return false;
    return true;
  }
  if (std::holds_alternative<StepSlopeKernel>(form)) return true;
  const auto& table = std::get<TabulatedKernel>(form);
  if (table.gamma_grid.empty() || table.gamma_grid.front() != 0) return false;
  for (const auto& row : table.values)
    if (row.front() != 0) return false;
  return true;
}

KernelSpec KernelSpec::flat_part() const {
  if (const auto* poly = std::get_if<PolynomialKernel>(&form)) {
    PolynomialKernel flat;
    for (const PolyTerm& term : poly->terms)
      if (term.slope_pow == 0) flat.terms.push_back(term);
    return {flat, slope_unit};
  }
  if (std::holds_alternative<StepSlopeKernel>(form))
    return {PolynomialKernel{}, slope_unit};
  const auto& table = std::get<TabulatedKernel>(form);
  if (table.gamma_grid.empty() || table.gamma_grid.front() != 0)
    throw std::domain_error("tabulated kernel grid does not reach gamma = 0");
  TabulatedKernel flat;
  flat.lambda_grid = table.lambda_grid;
  flat.gamma_grid = {0};
  for (const auto& row : table.values) flat.values.push_back({row.front()});
  return {flat, slope_unit};
}

KernelSpec KernelSpec::slope_part() const {
  if (const auto* poly = std::get_if<PolynomialKernel>(&form)) {
    PolynomialKernel slope;
    for (const PolyTerm& term : poly->terms)
      if (term.slope_pow != 0) slope.terms.push_back(term);
    return {slope, slope_unit};
  }
  if (std::holds_alternative<StepSlopeKernel>(form)) return *this;
  const auto& table = std::get<TabulatedKernel>(form);
  if (table.gamma_grid.empty() || table.gamma_grid.front() != 0)
    throw std::domain_error("tabulated kernel grid does not reach gamma = 0");
  TabulatedKernel slope = table;
  for (auto& row : slope.values) {
    const double flat = row.front();
    for (double& v : row) v -= flat;
  }
  return {slope, slope_unit};
}

KernelSpec make_polynomial_kernel(std::vector<PolyTerm> terms, SlopeUnit unit) {
  return {PolynomialKernel{std::move(terms)}, unit};
}

KernelSpec make_step_kernel(double threshold, SlopeUnit unit) {
  return {StepSlopeKernel{threshold}, unit};
}

KernelValuationResult eval_kernel_valuation_ex(const KernelSpec& kernel,
                                               const PLFunction& f, double tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  const auto segments = f.segments();

  if (const auto* poly = std::get_if<PolynomialKernel>(&kernel.form)) {
    double total = 0;
    for (const auto& seg : segments) {
      const double gamma =
          convert_gamma(kernel.slope_unit, std::fabs(to_double(seg.slope)));
      const double v0 = to_double(seg.v_begin);
      const double v1 = to_double(seg.v_end);
      const double len = to_double(seg.length());
      for (const PolyTerm& term : poly->terms) {
        // integral over the segment of lambda(s)^i ds, lambda affine in s:
        // len * (sum_{p=0..i} v0^p v1^(i-p)) / (i+1)
        double moment = 0;
        for (int p = 0; p <= term.lambda_pow; ++p)
          moment += ipow(v0, p) * ipow(v1, term.lambda_pow - p);
        moment /= term.lambda_pow + 1;
        total += term.coeff * ipow(gamma, term.slope_pow) * moment * len;
      }
    }
    return {total, 0};
  }

  if (const auto* step = std::get_if<StepSlopeKernel>(&kernel.form)) {
    // Exact: split each segment at the threshold crossing and accumulate
    // slope * measure rationally; doubles only on the way out.
    const Rat threshold(step->threshold);
    Rat acc(0);
    for (const auto& seg : segments)
      acc += abs(seg.slope) * segment_measure_at_least(seg, threshold);
    const double value = kernel.slope_unit == SlopeUnit::PerRadian
                             ? to_double(acc) / (2 * std::numbers::pi)
                             : to_double(acc);
    return {value, 0};
  }

  const auto& table = std::get<TabulatedKernel>(kernel.form);
  double total = 0;
  double err = 0;
  for (const auto& seg : segments) {
    const double gamma =
        convert_gamma(kernel.slope_unit, std::fabs(to_double(seg.slope)));
    const double v0 = to_double(seg.v_begin);
    const double v1 = to_double(seg.v_end);
    const double len = to_double(seg.length());
    const auto integrand = [&](double x) {
      return bilinear(table, v0 + (v1 - v0) * x, gamma);
    };
    const QuadratureResult r =
        integrate_adaptive(integrand, 0.0, 1.0, tol * std::max(len, 1e-3));
    total += r.value * len;
    err += r.error_estimate * len;
  }
  return {total, err};
}

double eval_kernel_valuation(const KernelSpec& kernel, const PLFunction& f,
                             double tol) {
  return eval_kernel_valuation_ex(kernel, f, tol).value;
}

}  // namespace circval
