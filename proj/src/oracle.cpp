#include "shellflow/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "shellflow/errors.hpp"
#include "shellflow/numeric.hpp"

namespace shellflow::oracle {

namespace {

struct Dyn {
  double theta_sq, c, r0, sign;
  int k;
  bool rel;

  // state (R, w): w = gamma*Rdot or Rdot
  double rdot(double w) const { return rel ? w / std::sqrt(1.0 + (w / c) * (w / c)) : w; }
  std::array<double, 2> rhs(const std::array<double, 2>& y) const {
    const double Rk = k == 2 ? y[0] * y[0] : y[0];
    return {rdot(y[1]), sign * theta_sq / Rk};
  }
};

Dyn make_dyn(const LayerCoefficients& lc) {
  return {lc.theta_sq, lc.c, lc.r, lc.kind.is_em() ? 1.0 : -1.0, lc.kind.dim_power(),
          lc.kind.is_relativistic()};
}

// gamma - 1 (relativistic) or v^2 (classical) at R = r0 (1 +- u^2).
double energy_gain(const LayerCoefficients& lc, double u) {
  const bool em = lc.kind.is_em();
  const double u2 = u * u;
  double shape;  // dimensionless potential drop
  if (lc.kind.is_sphere())
    shape = em ? u2 / (1.0 + u2) : u2 / ((1.0 - u) * (1.0 + u));
  else
    shape = em ? std::log1p(u2) : -std::log1p(-u2);
  const double pot = lc.kind.is_sphere() ? lc.theta_sq / lc.r : lc.theta_sq;
  if (lc.kind.is_relativistic()) return pot / (lc.c * lc.c) * shape;
  return 2.0 * pot * shape;
}

double speed_from_gain(const LayerCoefficients& lc, double g) {
  if (!lc.kind.is_relativistic()) return std::sqrt(g);
  if (std::isinf(g)) return lc.c;
  return lc.c * std::sqrt(g * (g + 2.0)) / (1.0 + g);
}

double root_of(const LayerCoefficients& lc, double R) {
  const double d = R / lc.r - 1.0;
  if (lc.kind.is_em()) {
    if (d < 0.0) throw DomainError("oracle: EM layers only move outward");
    return std::sqrt(d);
  }
  if (d > 0.0 || R < 0.0) throw DomainError("oracle: gravity layers only move inward");
  return std::sqrt(-d);
}

}  // namespace

double first_integral(const LayerCoefficients& lc, double R, double Rdot) {
  const double sg = lc.kind.is_em() ? 1.0 : -1.0;
  // potential per unit mass: sg*theta^2/R (sphere), -sg*theta^2 ln R (cylinder)
  const double pot = lc.kind.is_sphere() ? sg * lc.theta_sq / R : -sg * lc.theta_sq * std::log(R);
  if (lc.kind.is_relativistic()) {
    const double b = Rdot / lc.c;
    return 1.0 / std::sqrt((1.0 - b) * (1.0 + b)) + pot / (lc.c * lc.c);
  }
  return 0.5 * Rdot * Rdot + pot;
}

double first_integral_speed(const LayerCoefficients& lc, double R) {
  return speed_from_gain(lc, energy_gain(lc, root_of(lc, R)));
}

double time_of_flight(const LayerCoefficients& lc, double R_target, double tol) {
  const double uT = root_of(lc, R_target);
  if (uT == 0.0) return 0.0;
  if (lc.theta_sq <= 0.0) throw DomainError("time_of_flight: static layer never moves");
  auto f = [&](double u) { return 2.0 * lc.r * u / speed_from_gain(lc, energy_gain(lc, u)); };
  return numeric::adaptive_quad(f, 0.0, uT, {tol, 60}).value;
}

double radius_from_time_of_flight(const LayerCoefficients& lc, double t, double R_seed) {
  double R = R_seed;
  const double dir = lc.kind.is_em() ? 1.0 : -1.0;
  for (int it = 0; it < 20; ++it) {
    const double v = first_integral_speed(lc, R);
    const double dR = dir * (t - time_of_flight(lc, R)) * v;
    R += dR;
    if (!lc.kind.is_em()) R = std::min(R, lc.r);
    if (std::abs(dR) <= 1e-15 * lc.r) break;
  }
  return R;
}

OdeResult integrate_layer_ode(const LayerCoefficients& lc, std::span<const double> times,
                              const OdeOptions& opt) {
  OdeResult res;
  const Dyn dyn = make_dyn(lc);
  if (!std::is_sorted(times.begin(), times.end()))
    throw DomainError("integrate_layer_ode: sample times must be sorted");

  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

  using V = std::array<double, 2>;
  auto axpy = [](const V& y, double h, std::initializer_list<std::pair<double, const V*>> terms) {
    V out = y;
    for (const auto& [w, k] : terms) {
      out[0] += h * w * (*k)[0];
      out[1] += h * w * (*k)[1];
    }
    return out;
  };

  V y{lc.r, 0.0};
  double t = 0.0;
  const double vscale =
      lc.theta_sq > 0.0 ? std::sqrt(lc.theta_sq / (dyn.k == 2 ? lc.r : 1.0)) : 1.0;
  const double tscale = lc.r / vscale;
  const double atolR = opt.atol_fraction * lc.r;
  const double atolW = opt.atol_fraction * vscale;
  const double floorR = opt.floor_fraction * lc.r;
  double h = 1e-4 * tscale;
  const double I0 = first_integral(lc, y[0], 0.0);
  const double Iscale = lc.kind.is_relativistic() ? 1.0 : vscale * vscale;

  V k1 = dyn.rhs(y);
  for (double ts : times) {
    if (ts < t) throw DomainError("integrate_layer_ode: negative sample time");
    while (t < ts && !res.reached_floor) {
      if (lc.theta_sq <= 0.0) {
        t = ts;
        break;
      }
      if (res.steps_taken + res.rejections > opt.max_steps)
        throw ToleranceError("integrate_layer_ode: step budget exhausted", y[0], t);
      double hs = std::min(h, ts - t);
      const bool clipped = hs < h;
      V y2 = axpy(y, hs, {{a21, &k1}});
      if (y2[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k2 = dyn.rhs(y2);
      V y3 = axpy(y, hs, {{a31, &k1}, {a32, &k2}});
      if (y3[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k3 = dyn.rhs(y3);
      V y4 = axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      if (y4[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k4 = dyn.rhs(y4);
      V y5 = axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      if (y5[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k5 = dyn.rhs(y5);
      V y6 = axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      if (y6[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k6 = dyn.rhs(y6);
      V yn = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      if (yn[0] <= 0.0) { h *= 0.25; ++res.rejections; continue; }
      V k7 = dyn.rhs(yn);
      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double est = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
        const double sc = (i == 0 ? atolR : atolW) +
                          opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
        err = std::max(err, std::abs(est) / sc);
      }
      if (err <= 1.0) {
        t = clipped ? ts : t + hs;
        y = yn;
        k1 = k7;
        ++res.steps_taken;
        const double drift = std::abs(first_integral(lc, y[0], dyn.rdot(y[1])) - I0) / Iscale;
        res.max_first_integral_drift = std::max(res.max_first_integral_drift, drift);
        if (!lc.kind.is_em() && y[0] <= floorR) {
          res.reached_floor = true;
          res.floor_time = t;
        }
        if (dyn.rel && !(std::abs(dyn.rdot(y[1])) < lc.c))
          throw DomainError("integrate_layer_ode: speed reached c");
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!clipped) h = hs * fac;
      } else {
        ++res.rejections;
        h = hs * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      }
      if (h < 1e-15 * std::max(t, tscale))
        throw ToleranceError("integrate_layer_ode: step size underflow", y[0], t);
    }
    if (res.reached_floor) break;
    res.samples.push_back({t, y[0], dyn.rdot(y[1])});
  }
  return res;
}

OdeResult integrate_layer_ode(const LayerCoefficients& lc, double t_end, double tol, int n) {
  if (!(t_end > 0.0)) throw DomainError("integrate_layer_ode: t_end must be > 0");
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) times[static_cast<std::size_t>(i)] = t_end * i / n;
  OdeOptions opt;
  opt.rtol = tol;
  return integrate_layer_ode(lc, times, opt);
}

}  // namespace shellflow::oracle
