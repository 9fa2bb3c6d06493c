#include "shellflow/density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "shellflow/characteristics.hpp"
#include "shellflow/errors.hpp"
#include "shellflow/numeric.hpp"

namespace shellflow {

namespace {
constexpr double kNearCaustic = 1e-9;
}

const char* to_string(LayerStatus s) {
  switch (s) {
    case LayerStatus::Ok: return "ok";
    case LayerStatus::NearCaustic: return "near_caustic";
    case LayerStatus::PastShock: return "past_shock";
    case LayerStatus::PastCollapse: return "past_collapse";
  }
  return "ok";
}

DensityPoint density_at(const Model& model, double r, double t) {
  const LayerCoefficients lc = model.layer_coefficients(r);
  const LayerState st = layer_state(lc, t, true);
  DensityPoint p;
  p.r0 = r;
  p.R = st.R;
  p.jac = st.jac;
  if (!(st.jac > 0.0))
    throw PastShockError("density_at: Jacobian <= 0 at r0 = " + std::to_string(r), r, st.jac);
  const double Pk = lc.kind.is_sphere() ? st.P * st.P : st.P;
  p.rho = lc.rho0 == 0.0 ? 0.0 : lc.rho0 / (Pk * st.jac);
  // J(0) = 1
  if (st.jac < kNearCaustic) p.status = LayerStatus::NearCaustic;
  return p;
}

DensitySnapshot snapshot(const Model& model, std::span<const double> r_grid, double t) {
  DensitySnapshot snap;
  snap.t = t;
  snap.symmetry = model.scenario().symmetry;
  snap.points.reserve(r_grid.size());
  for (double r : r_grid) {
    try {
      snap.points.push_back(density_at(model, r, t));
    } catch (const PastShockError& e) {
      DensityPoint p;
      p.r0 = r;
      p.R = layer_radius(model.layer_coefficients(r), t);
      p.jac = e.jac();
      p.rho = std::numeric_limits<double>::quiet_NaN();
      p.status = LayerStatus::PastShock;
      snap.points.push_back(p);
    } catch (const PastCollapseError&) {
      DensityPoint p;
      p.r0 = r;
      p.R = 0.0;
      p.jac = 0.0;
      p.rho = std::numeric_limits<double>::quiet_NaN();
      p.status = LayerStatus::PastCollapse;
      snap.points.push_back(p);
    }
  }
  return snap;
}

double conservation_check(const Model& model, double r1, double r2, double t) {
  if (!(r1 > 0.0 && r1 < r2)) throw DomainError("conservation_check: need 0 < r1 < r2");
  const double dq0 = model.enclosed(r2) - model.enclosed(r1);
  if (!(dq0 > 0.0)) throw DomainError("conservation_check: shell carries no charge or mass");
  if (t == 0.0) return 0.0;

  const bool sph = model.kind().is_sphere();
  const double geom = sph ? 4.0 * numeric::kPi : 2.0 * numeric::kPi;
  const LayerCoefficients c1 = model.layer_coefficients(r1);
  const LayerCoefficients c2 = model.layer_coefficients(r2);
  const double R1 = layer_radius(c1, t);
  const double R2 = layer_radius(c2, t);
  for (double r : {r1, r2}) density_at(model, r, t);  // throws past the shock

  auto layer_of = [&](double x) {
    auto eval = [&](double r) {
      const LayerState st = layer_state(model.layer_coefficients(r), t, true);
      if (!(st.jac > 0.0)) throw PastShockError("conservation_check: crossed layers", r, st.jac);
      return std::make_pair(st.R, st.jac);
    };
    const double seed = r1 + (r2 - r1) * (x - R1) / (R2 - R1);
    return numeric::solve_increasing(eval, x, r1, r2, seed, 1e-13 * x).s;
  };
  auto integrand = [&](double x) {
    const double rho = density_at(model, layer_of(x), t).rho;
    return rho * (sph ? x * x : x);
  };
  const double dq = geom * numeric::integrate(integrand, R1, R2, 1e-11);
  return std::abs(dq - dq0) / dq0;
}

}  // namespace shellflow
