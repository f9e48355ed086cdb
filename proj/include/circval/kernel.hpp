#pragma once

#include <variant>
#include <vector>

#include "circval/plfunction.hpp"

namespace circval {

// Which unit the kernel's slope argument expects. The canonical slope of
// the library is per-turn; per-radian kernels receive slope/(2*pi), the one
// place where an irrational constant enters.
enum class SlopeUnit { PerTurn, PerRadian };

struct PolyTerm {
  int lambda_pow = 0;
  int slope_pow = 0;
  double coeff = 0;
};

// K(lambda, gamma) = sum of coeff * lambda^i * gamma^j.
struct PolynomialKernel {
  std::vector<PolyTerm> terms;
};

// K(lambda, gamma) = gamma * indicator[lambda >= threshold].
struct StepSlopeKernel {
  double threshold = 0;
};

// Rectangular grid with bilinear interpolation; undefined outside the grid.
struct TabulatedKernel {
  std::vector<double> lambda_grid;               // strictly increasing
  std::vector<double> gamma_grid;                // strictly increasing, >= 0
  std::vector<std::vector<double>> values;       // values[i][j] = K(lambda_i, gamma_j)
};

struct KernelSpec {
  std::variant<PolynomialKernel, StepSlopeKernel, TabulatedKernel> form;
  SlopeUnit slope_unit = SlopeUnit::PerTurn;

  /// Pointwise evaluation; gamma is given in per-turn units and converted
  /// according to slope_unit. Throws std::domain_error off a tabulated grid.
  double eval(double lambda, double gamma_per_turn) const;

  /// K(., 0) identically zero (slope-type kernel)?
  bool flat_part_is_zero() const;

  /// Kernel lambda -> K(lambda, 0). Throws when a tabulated grid does not
  /// reach gamma = 0.
  KernelSpec flat_part() const;

  /// K - K(., 0); vanishes at gamma = 0 by construction.
  KernelSpec slope_part() const;
};

KernelSpec make_polynomial_kernel(std::vector<PolyTerm> terms,
                                  SlopeUnit unit = SlopeUnit::PerTurn);
KernelSpec make_step_kernel(double threshold, SlopeUnit unit = SlopeUnit::PerTurn);

struct KernelValuationResult {
  double value = 0;
  double error_estimate = 0;  // 0 for closed-form (polynomial/step) kernels
};

/// V_K(f) = integral of K(f(s), |f'(s)|) dH^1(s). Polynomial kernels are
/// integrated by antiderivative, step kernels by exact splitting at the
/// threshold crossings, tabulated kernels by adaptive quadrature to tol.
KernelValuationResult eval_kernel_valuation_ex(const KernelSpec& kernel,
                                               const PLFunction& f, double tol);
double eval_kernel_valuation(const KernelSpec& kernel, const PLFunction& f,
                             double tol = 1e-10);

}  // namespace circval
