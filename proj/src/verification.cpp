#include "shellflow/verification.hpp"

#include <algorithm>
#include <cmath>

#include "shellflow/characteristics.hpp"
#include "shellflow/oracle.hpp"

namespace shellflow {

AgreementReport three_way_agreement(const Model& model, std::span<const double> layers,
                                    double t_end, int n_samples) {
  AgreementReport rep;
  rep.kind = model.kind();
  rep.t_end = t_end;
  std::vector<double> times;
  for (int i = 1; i <= n_samples; ++i) times.push_back(t_end * i / n_samples);

  for (double r0 : layers) {
    const LayerCoefficients lc = model.layer_coefficients(r0);
    LayerAgreement la;
    la.r0 = r0;
    const oracle::OdeResult ode = oracle::integrate_layer_ode(lc, times);
    la.ode_steps = ode.steps_taken;
    la.ode_rejections = ode.rejections;
    la.max_first_integral_drift = ode.max_first_integral_drift;
    for (std::size_t i = 0; i < ode.samples.size(); ++i) {
      const double t = ode.samples[i].t;
      const double Rc = layer_radius(lc, t);
      la.max_ode_rel = std::max(la.max_ode_rel, std::abs(Rc - ode.samples[i].R) / r0);
      if (lc.theta_sq > 0.0) {
        const double Rq = oracle::radius_from_time_of_flight(lc, t, Rc);
        la.max_quad_rel = std::max(la.max_quad_rel, std::abs(Rc - Rq) / r0);
      }
    }
    if (ode.samples.size() < times.size()) la.max_ode_rel = std::max(la.max_ode_rel, 1.0);
    rep.max_ode_rel = std::max(rep.max_ode_rel, la.max_ode_rel);
    rep.max_quad_rel = std::max(rep.max_quad_rel, la.max_quad_rel);
    rep.max_first_integral_drift = std::max(rep.max_first_integral_drift, la.max_first_integral_drift);
    rep.layers.push_back(la);
  }
  return rep;
}

double verification_horizon(const Model& model, double t_search) {
  const auto grid = model.default_grid(64);
  const ShockReport sr = shock_time(model, grid, t_search);
  if (sr.kind == ShockReport::Kind::Caustic) return 0.95 * sr.t_c;
  if (sr.kind == ShockReport::Kind::CentralCollapse) return 0.95 * sr.t_first;
  return 3.0 * model.r_ref() / model.scenario().c;
}

}  // namespace shellflow
