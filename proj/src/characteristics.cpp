#include "shellflow/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shellflow/errors.hpp"
#include "shellflow/kernels.hpp"
#include "shellflow/numeric.hpp"

namespace shellflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double arrival_time(const LayerCoefficients& lc) {
  if (lc.kind.is_em() || lc.lam <= 0.0) return kInf;
  return kernels::collapse_endpoint(lc.kind, lc.y()) / lc.lam;
}

LayerState layer_state(const LayerCoefficients& lc, double t, bool with_jacobian) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("layer_state: t must be finite and >= 0");
  LayerState st;
  st.t = t;
  st.R = lc.r;
  if (t == 0.0 || lc.lam <= 0.0) return st;

  const KernelKind kind = lc.kind;
  const double y = lc.y();
  double s = 0.0;
  try {
    s = kernels::inverse_root(kind, lc.lam * t, y);
  } catch (const PastCollapseError& e) {
    throw PastCollapseError("layer r0=" + std::to_string(lc.r) + " reached the center",
                            e.endpoint() / lc.lam);
  }
  const bool need_dy = with_jacobian && kind.is_relativistic() && lc.dy() != 0.0;
  if (std::isinf(s)) {
    st.P = 0.0;
    st.R = 0.0;
    st.jac = 0.0;
    st.speed = kInf;
    return st;
  }
  const kernels::RootSample k = kernels::evaluate_root(kind, s, y, need_dy);
  st.P = k.x;
  st.R = lc.r * k.x;
  st.speed = lc.r * lc.lam * std::abs(k.inv_dF_dx);
  if (with_jacobian) {
    const double drive = lc.d_lam * t - (need_dy ? lc.dy() * k.dF_dy : 0.0);
    st.jac = k.x + (drive == 0.0 ? 0.0 : lc.r * drive * k.inv_dF_dx);
  }
  return st;
}

double layer_radius(const LayerCoefficients& lc, double t) {
  return layer_state(lc, t, false).R;
}

LayerSpeed layer_speed(const LayerCoefficients& lc, double t) {
  const LayerState st = layer_state(lc, t, false);
  LayerSpeed out;
  out.speed = st.speed;
  out.velocity = lc.kind.is_em() ? st.speed : -st.speed;
  if (lc.kind.is_relativistic()) {
    out.beta = out.velocity / lc.c;
    if (lc.kind.is_em()) {
      // (P-1)/P for spheres, ln P for cylinders
      double kappa = 0.0;
      if (t > 0.0 && lc.lam > 0.0) {
        const double s = kernels::root_from_x(lc.kind, st.P);
        kappa = lc.kind.is_sphere() ? s * s / st.P : s * s;
      }
      const double y = lc.y();
      out.beta_algebraic = std::sqrt(y) * std::sqrt(kappa * (2.0 + y * kappa)) / (1.0 + y * kappa);
    }
  }
  return out;
}

Asymptote speed_asymptote(const LayerCoefficients& lc) {
  if (!lc.kind.is_em()) throw NotApplicableError("speed_asymptote: gravity kinds collapse");
  Asymptote a;
  if (lc.kind.is_sphere()) {
    if (lc.kind.is_relativistic()) {
      const double e2 = lc.eta_sq;
      a.value = std::sqrt(e2) * std::sqrt(2.0 + e2) / (1.0 + e2);
    } else {
      a.value = lc.r * lc.lam;
      a.is_beta = false;
    }
  } else if (lc.kind.is_relativistic()) {
    a.value = lc.lam > 0.0 ? 1.0 : 0.0;
  } else {
    a.bounded = false;
    a.value = kInf;
    a.is_beta = false;
  }
  return a;
}

PackingEstimate eta_from_beta_inf(double beta_inf) {
  if (!(beta_inf >= 0.0 && beta_inf < 1.0))
    throw DomainError("eta_from_beta_inf: need 0 <= beta_inf < 1");
  const double eta_sq = 1.0 / std::sqrt((1.0 - beta_inf) * (1.0 + beta_inf)) - 1.0;
  // The packing law has the same algebraic form as the beta_inf(eta) law.
  return {eta_sq, std::sqrt(eta_sq)};
}

double beta_inf_from_packing(double n) {
  if (!(n >= 0.0)) throw DomainError("beta_inf_from_packing: n must be >= 0");
  return n * std::sqrt(2.0 + n * n) / (1.0 + n * n);
}

LayerTrajectory trajectory(const LayerCoefficients& lc, std::span<const double> times) {
  LayerTrajectory tr;
  tr.r0 = lc.r;
  for (double t : times) {
    try {
      const LayerState st = layer_state(lc, t, false);
      const double v = lc.kind.is_em() ? st.speed : -st.speed;
      tr.samples.push_back({t, st.R, v / lc.c});
    } catch (const PastCollapseError&) {
      break;
    }
  }
  if (lc.kind.is_em()) tr.asymptote = speed_asymptote(lc);
  return tr;
}

const char* to_string(ShockReport::Kind k) {
  switch (k) {
    case ShockReport::Kind::None: return "none";
    case ShockReport::Kind::Caustic: return "caustic";
    case ShockReport::Kind::CentralCollapse: return "central_collapse";
  }
  return "none";
}

double jacobian_zero_time(const LayerCoefficients& lc, double t_max, const ShockOptions& opt) {
  if (lc.lam <= 0.0) return kInf;
  double t_end = t_max;
  const double t_arr = arrival_time(lc);
  // Stop just short of the center, where J -> 0 for homogeneous collapse.
  if (std::isfinite(t_arr)) t_end = std::min(t_end, t_arr * (1.0 - 1e-9));
  auto J = [&](double t) { return layer_state(lc, t, true).jac; };
  const int n = std::max(opt.time_steps, 1);
  double t_prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double t = t_end * i / n;
    if (J(t) <= 0.0) {
      double lo = t_prev, hi = t;
      while (hi - lo > opt.bisect_rel * hi) {
        const double mid = 0.5 * (lo + hi);
        if (J(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    }
    t_prev = t;
  }
  return kInf;
}

ShockReport shock_time(const Model& model, std::span<const double> r_grid, double t_max,
                       const ShockOptions& opt) {
  if (r_grid.empty()) throw ConfigError("shock_time: empty layer grid");
  if (!(t_max > 0.0)) throw ConfigError("shock_time: t_max must be > 0");
  ShockReport rep;
  const bool gravity = !model.kind().is_em();

  std::size_t best = r_grid.size();
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const LayerCoefficients lc = model.layer_coefficients(r_grid[i]);
    const double tj = jacobian_zero_time(lc, t_max, opt);
    rep.scan.push_back({r_grid[i], tj, arrival_time(lc)});
    if (std::isfinite(tj) && (best == r_grid.size() || tj < rep.scan[best].t_J0)) best = i;
  }

  if (best < r_grid.size()) {
    double t_best = rep.scan[best].t_J0;
    double r_best = r_grid[best];
    if (opt.refine && r_grid.size() > 1) {
      double a = r_grid[best == 0 ? 0 : best - 1];
      double b = r_grid[std::min(best + 1, r_grid.size() - 1)];
      const double t_lim = std::min(t_max, 2.0 * t_best);
      auto g = [&](double r) {
        return jacobian_zero_time(model.layer_coefficients(r), t_lim, opt);
      };
      const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      double g1 = g(x1), g2 = g(x2);
      while (b - a > 1e-7 * b) {
        if (g1 <= g2) {
          b = x2;
          x2 = x1;
          g2 = g1;
          x1 = b - inv_phi * (b - a);
          g1 = g(x1);
        } else {
          a = x1;
          x1 = x2;
          g1 = g2;
          x2 = a + inv_phi * (b - a);
          g2 = g(x2);
        }
      }
      const double xm = g1 <= g2 ? x1 : x2;
      const double gm = std::min(g1, g2);
      if (gm < t_best) {
        t_best = gm;
        r_best = xm;
      }
    }
    rep.t_c = t_best;
    rep.r_star = r_best;
    rep.R_c = layer_radius(model.layer_coefficients(r_best), t_best);
  }

  double t_first = kInf, t_last = 0.0;
  for (const auto& e : rep.scan) {
    if (!std::isfinite(e.t_arrival)) continue;
    t_first = std::min(t_first, e.t_arrival);
    t_last = std::max(t_last, e.t_arrival);
  }
  const bool caustic_found = std::isfinite(rep.t_c);
  const bool central_radius = caustic_found && rep.R_c < opt.central_fraction * model.r_ref();

  if (caustic_found && !central_radius && (!gravity || rep.t_c < t_first)) {
    rep.kind = ShockReport::Kind::Caustic;
    return rep;
  }
  if (gravity && t_first <= t_max) {
    rep.kind = ShockReport::Kind::CentralCollapse;
    rep.t_first = t_first;
    rep.simultaneous = (t_last - t_first) <= opt.simultaneous_rel * t_first;
    return rep;
  }
  rep.kind = ShockReport::Kind::None;
  return rep;
}

CollapseTimes collapse_times(const Model& model) {
  const Scenario& s = model.scenario();
  if (s.interaction != Interaction::Gravity || s.regime != Regime::Classical ||
      !model.profile().is_uniform())
    throw NotApplicableError("collapse_times: needs classical gravity with a uniform profile");
  const double rho = std::get<Uniform>(model.profile().variant()).rho0;
  if (!(rho > 0.0)) throw ConfigError("collapse_times: rho0 must be > 0");
  const double rho_vol = s.symmetry == Symmetry::Sphere ? rho : rho / s.ell;
  CollapseTimes ct;
  ct.T_s = 0.25 * std::sqrt(3.0 * numeric::kPi / (2.0 * s.G * rho_vol));
  ct.T_c = 0.5 / std::sqrt(s.G * rho_vol);
  ct.T = s.symmetry == Symmetry::Sphere ? ct.T_s : ct.T_c;
  ct.ratio = ct.T_s / ct.T_c;
  return ct;
}

}  // namespace shellflow
