#include "shellflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shellflow/errors.hpp"
#include "shellflow/numeric.hpp"

namespace shellflow::kernels {

namespace {

using numeric::kSqrt2;
using numeric::kSqrtPi;

// Kernel quadratures run tighter than the library default so that the
// inverse map and finite-difference checks see a smooth F.
constexpr double kKernelTol = 1e-14;
// e^{-z^2} is below 1e-35 beyond this point.
constexpr double kGravityCylCutoff = 9.0;

void check_y(KernelKind kind, double y) {
  if (!kind.is_relativistic()) return;
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("kernel: y must be >= 0");
  if (!kind.is_em() && kind.is_sphere() && !(y < 1.0))
    throw QuasiRelativismError("kernel: gravity sphere requires y < 1", 0.0, y);
}

double eff_y(KernelKind kind, double y) { return kind.is_relativistic() ? y : 0.0; }

// Cylinder integrands; sg = +1 expansion (e^{z^2}), -1 collapse (e^{-z^2}).
double cyl_h(double z, double y) { return (1.0 + y * z * z) / std::sqrt(2.0 + y * z * z); }

double cyl_F(KernelKind kind, double a, double y) {
  if (a == 0.0) return 0.0;
  const double sg = kind.is_em() ? 1.0 : -1.0;
  if (!kind.is_relativistic()) {
    if (!kind.is_em()) return 0.5 * kSqrtPi * std::erf(a);
    return numeric::integrate([](double z) { return std::exp(z * z); }, 0.0, a, kKernelTol);
  }
  return kSqrt2 * numeric::integrate(
                      [&](double z) { return cyl_h(z, y) * std::exp(sg * z * z); }, 0.0, a,
                      kKernelTol);
}

double cyl_dFdy(KernelKind kind, double a, double y) {
  if (a == 0.0 || !kind.is_relativistic()) return 0.0;
  const double sg = kind.is_em() ? 1.0 : -1.0;
  auto g = [&](double z) {
    const double w = 2.0 + y * z * z;
    return (3.0 + y * z * z) * z * z * std::exp(sg * z * z) / (w * std::sqrt(w));
  };
  return numeric::integrate(g, 0.0, a, kKernelTol) / kSqrt2;
}

double cyl_dFda(KernelKind kind, double a, double y) {
  const double sg = kind.is_em() ? 1.0 : -1.0;
  if (!kind.is_relativistic()) return std::exp(sg * a * a);
  return kSqrt2 * cyl_h(a, y) * std::exp(sg * a * a);
}

}  // namespace

double x_from_root(KernelKind kind, double s) {
  if (kind.is_sphere()) return kind.is_em() ? 1.0 + s * s : (1.0 - s) * (1.0 + s);
  if (std::isinf(s)) return kind.is_em() ? std::numeric_limits<double>::infinity() : 0.0;
  return std::exp(kind.is_em() ? s * s : -s * s);
}

double root_from_x(KernelKind kind, double x) {
  if (kind.is_em()) {
    if (!(x >= 1.0) || !std::isfinite(x))
      throw DomainError("kernel: EM kinds need x >= 1, got " + std::to_string(x));
    return kind.is_sphere() ? std::sqrt(x - 1.0) : std::sqrt(std::log(x));
  }
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("kernel: gravity kinds need 0 <= x <= 1, got " + std::to_string(x));
  if (kind.is_sphere()) return std::sqrt(1.0 - x);
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(-std::log(x));
}

RootSample evaluate_root(KernelKind kind, double s, double y, bool with_dy) {
  check_y(kind, y);
  y = eff_y(kind, y);
  RootSample out;
  out.s = s;
  out.x = x_from_root(kind, s);

  if (kind.is_sphere() && kind.is_em()) {
    const double b = 2.0 / (y + 2.0);
    const double q = std::sqrt(s * s + b);  // sqrt(x - y/(y+2))
    const double k = std::sqrt(0.5 * (y + 2.0));
    const double ach = 2.0 * std::asinh(k * s);  // arccosh((y+2)x - 1 - y)
    out.F = s * q + ach / ((y + 1.0) * (y + 2.0));
    out.dF_ds = (2.0 * s * s + b + 2.0 / ((y + 1.0) * (y + 2.0))) / q;
    out.inv_dF_dx = 2.0 * s / out.dF_ds;
    if (with_dy && kind.is_relativistic()) {
      const double pre = -1.0 / ((2.0 + y) * (2.0 + y) * (1.0 + y));
      out.dF_dy = pre * (y * s / q + (2.0 * y + 3.0) / (1.0 + y) * ach);
    }
    return out;
  }

  if (kind.is_sphere()) {
    if (s < 0.0 || s > 1.0) throw DomainError("kernel: gravity sphere root outside [0, 1]");
    const double x = out.x;
    const double w = x + y / (2.0 - y);  // b - s^2, factored
    const double q = std::sqrt(w);
    const double k = std::sqrt(0.5 * (2.0 - y));
    const double acs = 2.0 * numeric::arcsin(k * s);  // arccos((2-y)x - 1 + y)
    out.F = s * q + acs / ((1.0 - y) * (2.0 - y));
    const double num = 2.0 * x + 2.0 * y / (1.0 - y);
    out.dF_ds = (w > 0.0) ? num / q : 0.0;
    out.inv_dF_dx = (out.dF_ds > 0.0) ? -2.0 * s / out.dF_ds
                                      : -std::numeric_limits<double>::infinity();
    if (with_dy && kind.is_relativistic()) {
      const double pre = 1.0 / ((2.0 - y) * (2.0 - y) * (1.0 - y));
      out.dF_dy = pre * (-y * s / q + (3.0 - 2.0 * y) / (1.0 - y) * acs);
    }
    return out;
  }

  // cylinders: s is a = sqrt(|ln x|)
  const double a = s;
  if (std::isinf(a)) {
    if (kind.is_em()) throw DomainError("kernel: infinite EM cylinder root");
    out.F = collapse_endpoint(kind, y);
    out.dF_ds = 0.0;
    out.inv_dF_dx = -std::numeric_limits<double>::infinity();
    if (with_dy && kind.is_relativistic()) out.dF_dy = cyl_dFdy(kind, kGravityCylCutoff, y);
    return out;
  }
  out.F = cyl_F(kind, a, y);
  out.dF_ds = cyl_dFda(kind, a, y);
  const double sg = kind.is_em() ? 1.0 : -1.0;
  if (!kind.is_relativistic())
    out.inv_dF_dx = sg * 2.0 * a;
  else
    out.inv_dF_dx = sg * kSqrt2 * a / cyl_h(a, y);
  if (with_dy) out.dF_dy = cyl_dFdy(kind, a, y);
  return out;
}

double collapse_endpoint(KernelKind kind, double y) {
  if (kind.is_em()) throw NotApplicableError("collapse_endpoint: EM kinds expand without bound");
  check_y(kind, y);
  y = eff_y(kind, y);
  if (kind.is_sphere()) return evaluate_root(kind, 1.0, y, false).F;
  if (!kind.is_relativistic()) return 0.5 * kSqrtPi;
  return cyl_F(kind, kGravityCylCutoff, y);
}

double inverse_root(KernelKind kind, double f, double y) {
  check_y(kind, y);
  y = eff_y(kind, y);
  if (!(f >= 0.0) || !std::isfinite(f)) throw DomainError("inverse_map: f must be finite and >= 0");
  if (f == 0.0) return 0.0;
  const double ftol = 1e-12 * std::max(1.0, f);

  auto eval = [&](double s) {
    const RootSample r = evaluate_root(kind, s, y, false);
    return std::make_pair(r.F, r.dF_ds);
  };

  if (!kind.is_em()) {
    const double end = collapse_endpoint(kind, y);
    if (f > end) {
      if (f - end <= ftol) return kind.is_sphere() ? 1.0 : std::numeric_limits<double>::infinity();
      throw PastCollapseError("inverse_map: value beyond the collapse endpoint", end);
    }
  }

  if (kind.is_sphere()) {
    const double slope0 = evaluate_root(kind, 0.0, y, false).dF_ds;
    double seed = std::min(f / slope0, std::sqrt(f));
    double hi = 1.0;
    if (kind.is_em()) {
      hi = std::max(2.0 * seed, 1.0);
      while (eval(hi).first < f) hi *= 2.0;
    } else {
      seed = std::min(seed, 1.0);
    }
    return numeric::solve_increasing(eval, f, 0.0, hi, seed, ftol).s;
  }

  if (!kind.is_em() && !kind.is_relativistic()) {
    const double v = 2.0 * f / kSqrtPi;
    if (v >= 1.0) return std::numeric_limits<double>::infinity();
    const double a0 = numeric::erfinv(v);
    // erf is flat far out; only polish where Newton is well conditioned.
    return numeric::solve_increasing(eval, f, 0.0, std::max(2.0 * a0, 1.0), a0, ftol).s;
  }

  // small-F seed: the integrand is 1 at z = 0, so F ~ a
  const double seed = std::min(f, std::sqrt(std::log1p(f)) + 0.5);
  double hi = std::max(2.0 * seed, 0.5);
  while (eval(hi).first < f) {
    hi *= 2.0;
    if (!kind.is_em() && hi > kGravityCylCutoff) {
      hi = kGravityCylCutoff;
      break;
    }
  }
  return numeric::solve_increasing(eval, f, 0.0, hi, seed, ftol).s;
}

double forward_map(KernelKind kind, double x, double y) {
  check_y(kind, y);
  return evaluate_root(kind, root_from_x(kind, x), y, false).F;
}

double d_forward_dx(KernelKind kind, double x, double y) {
  check_y(kind, y);
  const double s = root_from_x(kind, x);
  if (s == 0.0) throw SingularityError("d_forward_dx: singular at x = 1");
  if (!kind.is_em() && x == 0.0) throw DomainError("d_forward_dx: x = 0 is the collapse endpoint");
  const RootSample r = evaluate_root(kind, s, y, false);
  return 1.0 / r.inv_dF_dx;
}

double d_forward_dy(KernelKind kind, double x, double y) {
  check_y(kind, y);
  const double s = root_from_x(kind, x);
  if (!kind.is_relativistic() || s == 0.0) return 0.0;
  if (!kind.is_em() && x == 0.0 && !kind.is_sphere())
    throw DomainError("d_forward_dy: x = 0 is the collapse endpoint");
  return evaluate_root(kind, s, y, true).dF_dy;
}

double inverse_map(KernelKind kind, double f, double y) {
  return x_from_root(kind, inverse_root(kind, f, y));
}

}  // namespace shellflow::kernels
