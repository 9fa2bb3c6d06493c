#pragma once

#include "shellflow/model.hpp"

namespace shellflow::kernels {

/// Characteristic map F(x, y). EM kinds live on x >= 1, gravity kinds on 0 <= x <= 1.
double forward_map(KernelKind kind, double x, double y);
double d_forward_dx(KernelKind kind, double x, double y);
double d_forward_dy(KernelKind kind, double x, double y);
/// x with F(x, y) = f. Gravity kinds throw PastCollapseError beyond F(0, y).
double inverse_map(KernelKind kind, double f, double y);
/// F(0, y) for gravity kinds (value of the map at arrival in the center).
double collapse_endpoint(KernelKind kind, double y);

// The maps are smooth in a root variable s with x = 1 + s^2 (EM sphere),
// 1 - s^2 (gravity sphere), exp(s^2) (EM cylinder), exp(-s^2) (gravity
// cylinder). Working in s keeps x - 1 exact near the start of the motion and
// removes the square-root singularity of dF/dx.

double x_from_root(KernelKind kind, double s);
double root_from_x(KernelKind kind, double x);

struct RootSample {
  double s = 0.0;
  double x = 1.0;
  double F = 0.0;
  double dF_ds = 0.0;
  double inv_dF_dx = 0.0;  ///< 1 / (dF/dx), zero at x = 1
  double dF_dy = 0.0;      ///< only filled when requested
};

RootSample evaluate_root(KernelKind kind, double s, double y, bool with_dy);
double inverse_root(KernelKind kind, double f, double y);

}  // namespace shellflow::kernels
