#pragma once

#include <span>
#include <vector>

#include "shellflow/model.hpp"

namespace shellflow {

enum class LayerStatus { Ok, NearCaustic, PastShock, PastCollapse };
const char* to_string(LayerStatus s);

struct DensityPoint {
  double r0 = 0.0;
  double R = 0.0;
  double rho = 0.0;
  double jac = 1.0;
  LayerStatus status = LayerStatus::Ok;
  bool near_caustic() const { return status == LayerStatus::NearCaustic; }
};

struct DensitySnapshot {
  double t = 0.0;
  Symmetry symmetry = Symmetry::Sphere;
  std::vector<DensityPoint> points;
};

/// rho = rho0(r) / (P^k J); throws PastShockError when J <= 0.
DensityPoint density_at(const Model& model, double r, double t);
/// Layers past a shock or the center keep their slot with a status flag.
DensitySnapshot snapshot(const Model& model, std::span<const double> r_grid, double t);
/// Relative change of the charge (mass) between layers r1 < r2. The density is
/// integrated over the current radius, each node mapped back to its layer.
double conservation_check(const Model& model, double r1, double r2, double t);

}  // namespace shellflow
