#pragma once

#include <limits>
#include <span>
#include <vector>

#include "shellflow/model.hpp"

// Independent verification path: direct integration of the equation of motion
// and quadrature of the energy integral. Uses LayerCoefficients only (theta^2,
// c, r0, kind), never the characteristic maps.

namespace shellflow::oracle {

struct OdeSample {
  double t, R, Rdot;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol_fraction = 1e-13;   ///< absolute tolerance on R in units of r0
  double floor_fraction = 1e-8;   ///< gravitational stop radius in units of r0
  long max_steps = 20'000'000;
};

struct OdeResult {
  std::vector<OdeSample> samples;
  double max_rel_err_vs_closed_form = std::numeric_limits<double>::quiet_NaN();
  double max_first_integral_drift = 0.0;
  long steps_taken = 0;
  long rejections = 0;
  bool reached_floor = false;
  double floor_time = std::numeric_limits<double>::quiet_NaN();
};

/// Dormand-Prince 5(4) on (R, gamma*Rdot) for relativistic kinds, (R, Rdot)
/// classically. Samples are taken exactly at the requested (sorted) times.
OdeResult integrate_layer_ode(const LayerCoefficients& lc, std::span<const double> times,
                              const OdeOptions& opt = {});
/// Convenience form sampling n+1 equally spaced times on [0, t_end].
OdeResult integrate_layer_ode(const LayerCoefficients& lc, double t_end, double tol = 1e-10,
                              int n = 100);

/// Conserved energy-like quantity for state (R, Rdot).
double first_integral(const LayerCoefficients& lc, double R, double Rdot);
/// |Rdot| at radius R from the energy integral with zero initial speed.
double first_integral_speed(const LayerCoefficients& lc, double R);
/// Time to travel from r0 to R_target.
double time_of_flight(const LayerCoefficients& lc, double R_target, double tol = 1e-13);
/// R reached at time t, by Newton iteration on time_of_flight seeded at R_seed.
double radius_from_time_of_flight(const LayerCoefficients& lc, double t, double R_seed);

}  // namespace shellflow::oracle
