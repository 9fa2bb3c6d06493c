#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "shellflow/model.hpp"

namespace shellflow {

/// State of one Lagrangian layer at time t.
struct LayerState {
  double t = 0.0;
  double P = 1.0;    ///< R / r0
  double R = 0.0;
  double jac = 1.0;  ///< dR/dr0
  double speed = 0.0;
};

/// Full state; gravity kinds throw PastCollapseError (endpoint = arrival time)
/// beyond the center-arrival time.
LayerState layer_state(const LayerCoefficients& lc, double t, bool with_jacobian = true);
double layer_radius(const LayerCoefficients& lc, double t);
/// Center-arrival time F(0, y)/lambda for gravity kinds (+inf for a static layer).
double arrival_time(const LayerCoefficients& lc);

struct LayerSpeed {
  double speed = 0.0;     ///< |v|
  double velocity = 0.0;  ///< signed: + outward (EM), - inward (gravity)
  std::optional<double> beta;            ///< v / c from r0 lambda / dF/dx
  std::optional<double> beta_algebraic;  ///< closed speed law (EM kinds)
};
LayerSpeed layer_speed(const LayerCoefficients& lc, double t);

struct Asymptote {
  bool bounded = true;
  double value = 0.0;    ///< beta_inf (relativistic) or v_inf (classical)
  bool is_beta = true;
};
Asymptote speed_asymptote(const LayerCoefficients& lc);

struct PackingEstimate {
  double eta_sq;
  double packing_ratio;  ///< n = R0 / r_e
};
PackingEstimate eta_from_beta_inf(double beta_inf);
double beta_inf_from_packing(double n);

struct TrajectorySample {
  double t, R, beta;
};
struct LayerTrajectory {
  double r0 = 0.0;
  std::vector<TrajectorySample> samples;
  std::optional<Asymptote> asymptote;
};
/// Samples past a gravitational arrival are dropped; beta is v/c in both regimes.
LayerTrajectory trajectory(const LayerCoefficients& lc, std::span<const double> times);

struct ShockOptions {
  int time_steps = 400;
  double bisect_rel = 1e-12;
  double central_fraction = 1e-6;  ///< R_c below this times R_ref counts as central
  double simultaneous_rel = 1e-8;
  bool refine = true;
};

struct ShockScanEntry {
  double r;
  double t_J0;       ///< +inf when J stays positive
  double t_arrival;  ///< +inf for EM kinds
};

struct ShockReport {
  enum class Kind { None, Caustic, CentralCollapse };
  Kind kind = Kind::None;
  double t_c = std::numeric_limits<double>::infinity();
  double R_c = 0.0;
  double r_star = 0.0;
  double t_first = std::numeric_limits<double>::infinity();
  bool simultaneous = false;
  std::vector<ShockScanEntry> scan;
};
const char* to_string(ShockReport::Kind k);

/// Earliest Jacobian zero of one layer in (0, t_max], or +inf.
double jacobian_zero_time(const LayerCoefficients& lc, double t_max, const ShockOptions& opt = {});
ShockReport shock_time(const Model& model, std::span<const double> r_grid, double t_max,
                       const ShockOptions& opt = {});

struct CollapseTimes {
  double T = 0.0;    ///< for the scenario's own symmetry
  double T_s = 0.0;  ///< spherical time at the same volumetric density
  double T_c = 0.0;  ///< cylindrical time at the same volumetric density
  double ratio = 0.0;
};
CollapseTimes collapse_times(const Model& model);

}  // namespace shellflow
