#include "shellflow/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "shellflow/characteristics.hpp"
#include "shellflow/errors.hpp"
#include "shellflow/kernels.hpp"

namespace shellflow {

namespace {

// Fornberg weights for derivatives 0..2 at z on nodes x.
std::vector<std::array<double, 3>> fd_weights(double z, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::array<double, 3>> c(n, {0.0, 0.0, 0.0});
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 2);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace

PotentialProfile quantum_potential(std::span<const double> R, std::span<const double> rho,
                                   Symmetry sym, double m, double hbar) {
  const std::size_t n = R.size();
  if (rho.size() != n) throw DomainError("quantum_potential: size mismatch");
  if (n < 7) throw DomainError("quantum_potential: need at least 5 interior points");
  if (!(m > 0.0)) throw DomainError("quantum_potential: m must be > 0");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i]))
      throw DomainError("quantum_potential: density must be positive");
    if (!(R[i] > 0.0) || (i > 0 && !(R[i] > R[i - 1])))
      throw DomainError("quantum_potential: radii must be positive and increasing");
    g[i] = std::sqrt(rho[i] / m);
  }
  const double k = sym == Symmetry::Sphere ? 2.0 : 1.0;
  PotentialProfile out;
  out.hbar = hbar;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i == 0 ? 0 : i - 1;
    std::size_t cnt = 3;
    if (i == 0) cnt = 4;
    if (i == n - 1) {
      lo = n - 4;
      cnt = 4;
    }
    const auto w = fd_weights(R[i], R.subspan(lo, cnt));
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < cnt; ++j) {
      d1 += w[j][1] * g[lo + j];
      d2 += w[j][2] * g[lo + j];
    }
    const double lap = d2 + k / R[i] * d1;
    out.points.push_back({R[i], hbar * hbar / (2.0 * m) * lap / g[i], i == 0 || i == n - 1});
  }
  return out;
}

PotentialProfile quantum_potential(const DensitySnapshot& snap, double m, double hbar) {
  std::vector<double> R, rho;
  for (const auto& p : snap.points) {
    if (p.status == LayerStatus::PastShock || p.status == LayerStatus::PastCollapse)
      throw PastShockError("quantum_potential: snapshot is past the shock", p.r0, p.jac);
    R.push_back(p.R);
    rho.push_back(p.rho);
  }
  PotentialProfile out = quantum_potential(R, rho, snap.symmetry, m, hbar);
  out.t = snap.t;
  return out;
}

VelocityCoefficient effective_velocity_coefficient(const Model& model, double t) {
  if (!model.profile().is_uniform() || model.kind().is_relativistic())
    throw NotApplicableError("effective_velocity_coefficient: needs a classical uniform profile");
  if (!(t >= 0.0)) throw DomainError("effective_velocity_coefficient: t must be >= 0");
  const double r_max = std::get<Uniform>(model.profile().variant()).r_max;
  const LayerCoefficients lc = model.layer_coefficients(0.5 * r_max);
  const bool em = model.kind().is_em();

  // |v| / R and |v| / r0 along any layer; both are r0-independent here.
  auto coeffs = [&](double tt) {
    const LayerState st = layer_state(lc, tt, false);
    return std::make_pair(st.speed / st.R, st.speed / lc.r);
  };
  VelocityCoefficient out;
  out.t = t;
  const auto [b, bl] = coeffs(t);
  out.b = b;
  out.b_lagrangian = bl;

  const double scale = 1.0 / lc.lam;
  double h = t > 0.0 ? 1e-3 * t : 1e-6 * scale;
  if (!em) h = std::min(h, 1e-3 * (arrival_time(lc) - t));
  if (t > 2.0 * h) {
    // Richardson-extrapolated centered difference
    auto cd = [&](double hh) { return (coeffs(t + hh).first - coeffs(t - hh).first) / (2.0 * hh); };
    out.b_dot = (4.0 * cd(h) - cd(2.0 * h)) / 3.0;
  } else {
    out.b_dot = (coeffs(t + h).first - b) / h;
  }
  out.stiffness = em ? out.b_dot + b * b : out.b_dot - b * b;

  const double P = layer_state(lc, t, false).P;
  const double lam2 = lc.lam * lc.lam;
  out.stiffness_exact = model.kind().is_sphere() ? lam2 / (2.0 * P * P * P) : 2.0 * lam2 / (P * P);
  return out;
}

}  // namespace shellflow
