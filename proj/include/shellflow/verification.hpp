#pragma once

#include <span>
#include <vector>

#include "shellflow/model.hpp"

namespace shellflow {

struct LayerAgreement {
  double r0 = 0.0;
  double max_ode_rel = 0.0;   ///< max |R_closed - R_ode| / r0
  double max_quad_rel = 0.0;  ///< max |R_closed - R_quadrature| / r0
  double max_first_integral_drift = 0.0;
  long ode_steps = 0;
  long ode_rejections = 0;
};

struct AgreementReport {
  KernelKind kind;
  double t_end = 0.0;
  std::vector<LayerAgreement> layers;
  double max_ode_rel = 0.0;
  double max_quad_rel = 0.0;
  double max_first_integral_drift = 0.0;
};

/// Compares closed-form characteristics with the ODE and time-of-flight oracles
/// at n_samples equally spaced times in (0, t_end].
AgreementReport three_way_agreement(const Model& model, std::span<const double> layers,
                                    double t_end, int n_samples = 40);

/// 0.95 of the first caustic or arrival time if one occurs before t_search,
/// otherwise three light-crossing times of the profile.
double verification_horizon(const Model& model, double t_search);

}  // namespace shellflow
