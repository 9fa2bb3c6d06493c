#pragma once

#include <functional>
#include <utility>

namespace shellflow::numeric {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145182;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;

double erf(double u);
/// Inverse error function on (-1, 1); throws DomainError otherwise.
double erfinv(double v);

/// ln(u + sqrt(u^2 - 1)); arguments within 1e-12 below 1 are clamped.
double arccosh(double u);
/// arccosh(1 + d) for d >= 0 without cancellation.
double arccosh1p(double d);
/// arccos with the [-1, 1] clamping tolerance of 1e-12.
double arccos(double u);
/// arcsin with the same clamping rule.
double arcsin(double u);

struct QuadOptions {
  double tol = 1e-11;  ///< relative to the L1 norm of the integrand, with the same absolute floor
  int max_depth = 30;
};

struct QuadResult {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod (G10/K21). Throws ToleranceError with the best
/// estimate when the subdivision cap is hit before the tolerance is met.
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         QuadOptions opt = {});

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
  return adaptive_quad(f, a, b, {tol, 30}).value;
}

/// Safeguarded Newton for g(s) = target on a bracket [lo, hi] where g is
/// increasing. eval returns {g(s), g'(s)}.
struct NewtonResult {
  double s;
  double residual;
  int iterations;
};
NewtonResult solve_increasing(const std::function<std::pair<double, double>(double)>& eval,
                              double target, double lo, double hi, double seed,
                              double ftol);

}  // namespace shellflow::numeric
