#pragma once

#include <span>
#include <vector>

#include "shellflow/density.hpp"
#include "shellflow/model.hpp"

namespace shellflow {

struct PotentialPoint {
  double R = 0.0;
  double Q = 0.0;
  bool low_confidence = false;  ///< one-sided boundary stencil
};

struct PotentialProfile {
  double t = 0.0;
  double hbar = 1.0;
  std::vector<PotentialPoint> points;
};

/// Q = (hbar^2 / 2m) Lap(sqrt f) / sqrt f with f = rho/m, radial Laplacian
/// f'' + (k/R) f' by finite differences on the snapshot's (nonuniform) radii.
PotentialProfile quantum_potential(const DensitySnapshot& snap, double m, double hbar);
/// Same operator on raw samples; R strictly increasing and positive.
PotentialProfile quantum_potential(std::span<const double> R, std::span<const double> rho,
                                   Symmetry sym, double m, double hbar);

/// Linear velocity field of the homogeneous classical solution, <v>(R, t) = +-R b(t).
struct VelocityCoefficient {
  double t = 0.0;
  double b = 0.0;
  double b_dot = 0.0;       ///< centered finite difference
  double stiffness = 0.0;   ///< b_dot + b^2 (EM) or b_dot - b^2 (gravity), from b_dot
  double stiffness_exact = 0.0;  ///< lambda^2 / (2 P^3) for spheres
  double b_lagrangian = 0.0;     ///< |v| = r0 * b_lagrangian
};
VelocityCoefficient effective_velocity_coefficient(const Model& model, double t);

}  // namespace shellflow
