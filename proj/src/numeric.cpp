#include "shellflow/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shellflow/errors.hpp"

namespace shellflow::numeric {

namespace {
constexpr double kClamp = 1e-12;
}

double erf(double u) { return std::erf(u); }

double erfinv(double v) {
  if (!(std::abs(v) < 1.0)) throw DomainError("erfinv: argument must lie in (-1, 1)");
  return boost::math::erf_inv(v);
}

double arccosh(double u) {
  if (u < 1.0) {
    if (u < 1.0 - kClamp) throw DomainError("arccosh: argument below 1");
    return 0.0;
  }
  return std::log(u + std::sqrt((u - 1.0) * (u + 1.0)));
}

double arccosh1p(double d) {
  if (d < 0.0) {
    if (d < -kClamp) throw DomainError("arccosh1p: negative offset");
    return 0.0;
  }
  // cosh(2w) = 1 + 2 sinh^2 w
  return 2.0 * std::asinh(std::sqrt(0.5 * d));
}

double arccos(double u) {
  if (std::abs(u) > 1.0) {
    if (std::abs(u) > 1.0 + kClamp) throw DomainError("arccos: argument outside [-1, 1]");
    u = std::copysign(1.0, u);
  }
  return std::acos(u);
}

double arcsin(double u) {
  if (std::abs(u) > 1.0) {
    if (std::abs(u) > 1.0 + kClamp) throw DomainError("arcsin: argument outside [-1, 1]");
    u = std::copysign(1.0, u);
  }
  return std::asin(u);
}

namespace {

struct Panel {
  double value, error, l1;
};

// One GK21 panel. Boost 1.74 reports the K-G difference of the rule mapped to
// [-1, 1], so the error is rescaled by the half-width here.
Panel gk21(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err, &l1);
  return {v, err * 0.5 * std::abs(b - a), l1};
}

Panel refine(const std::function<double(double)>& f, double a, double b, const Panel& whole,
             double abs_tol, int depth) {
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * whole.l1;
  if (depth == 0 || whole.error <= std::max(abs_tol, floor)) return whole;
  const double mid = 0.5 * (a + b);
  if (!(mid > std::min(a, b) && mid < std::max(a, b))) return whole;
  const Panel left = refine(f, a, mid, gk21(f, a, mid), 0.5 * abs_tol, depth - 1);
  const Panel right = refine(f, mid, b, gk21(f, mid, b), 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error, left.l1 + right.l1};
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         QuadOptions opt) {
  if (a == b) return {0.0, 0.0};
  const Panel first = gk21(f, a, b);
  const double scale0 = std::max(std::abs(first.value), first.l1);
  const Panel p = refine(f, a, b, first, opt.tol * scale0, opt.max_depth);
  if (!std::isfinite(p.value)) throw ToleranceError("adaptive_quad: non-finite integral", p.value, p.error);
  const double scale = std::max({std::abs(p.value), p.l1, 1e-300});
  // The K21-G10 difference overestimates the true error of smooth integrands
  // by many orders of magnitude, so a small slack over tol is harmless.
  if (p.error > 10.0 * opt.tol * scale && p.error > 1e-300)
    throw ToleranceError("adaptive_quad: tolerance not met", p.value, p.error);
  return {p.value, p.error};
}

NewtonResult solve_increasing(const std::function<std::pair<double, double>(double)>& eval,
                              double target, double lo, double hi, double seed,
                              double ftol) {
  double s = std::clamp(seed, lo, hi);
  double best_s = s;
  double best_r = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= 200; ++it) {
    const auto [g, dg] = eval(s);
    const double r = g - target;
    if (std::abs(r) < best_r) {
      best_r = std::abs(r);
      best_s = s;
    }
    if (r == 0.0) return {s, 0.0, it};
    if (r > 0.0)
      hi = s;
    else
      lo = s;
    double next = (dg > 0.0 && std::isfinite(dg)) ? s - r / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    if (std::abs(r) <= ftol && step <= 1e-14 * std::max(std::abs(s), 1e-300)) return {s, std::abs(r), it};
    s = next;
    // Stop once the iterate no longer moves at double resolution and the
    // residual is within tolerance.
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(s), 1e-300) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(s), 1e-300)) {
      const auto [g2, dg2] = eval(s);
      (void)dg2;
      if (std::abs(g2 - target) < best_r) {
        best_r = std::abs(g2 - target);
        best_s = s;
      }
      if (best_r <= ftol) return {best_s, best_r, it};
      break;
    }
  }
  if (best_r <= ftol) return {best_s, best_r, 200};
  throw ToleranceError("solve_increasing: residual " + std::to_string(best_r) +
                           " above tolerance",
                       best_s, best_r);
}

}  // namespace shellflow::numeric
