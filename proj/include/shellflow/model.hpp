#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shellflow {

enum class Interaction { EM, Gravity };
enum class Symmetry { Sphere, Cylinder };
enum class Regime { Relativistic, Classical };

struct KernelKind {
  Interaction interaction = Interaction::EM;
  Symmetry symmetry = Symmetry::Sphere;
  Regime regime = Regime::Relativistic;

  bool is_em() const { return interaction == Interaction::EM; }
  bool is_sphere() const { return symmetry == Symmetry::Sphere; }
  bool is_relativistic() const { return regime == Regime::Relativistic; }
  /// Radial power of the geometry: 2 for spheres, 1 for cylinders.
  int dim_power() const { return is_sphere() ? 2 : 1; }

  std::string name() const;
  friend bool operator==(const KernelKind&, const KernelKind&) = default;
};

/// All eight kinds, EM before gravity, sphere before cylinder, relativistic first.
std::vector<KernelKind> all_kernel_kinds();

struct Scenario {
  Interaction interaction = Interaction::EM;
  Symmetry symmetry = Symmetry::Sphere;
  Regime regime = Regime::Relativistic;
  double q = 1.0;
  double m = 1.0;
  double c = 1.0;
  double eps0 = 1.0;
  double G = 1.0;
  double ell = 1.0;  ///< slab height of a cylindrical layer

  KernelKind kind() const { return {interaction, symmetry, regime}; }
  /// Throws ConfigError on violated invariants.
  void validate() const;
};

struct Uniform {
  double rho0 = 1.0;
  double r_max = 1.0;
};

/// Shell whose particle count is log-normally distributed in tau*r.
struct LogNormalShell {
  double f0 = 1.0;
  double tau = 2.0;
  double mu_r = 0.0;
  double sigma_r = 0.2;
};

struct Tabulated {
  std::vector<double> r;
  std::vector<double> rho;
  double r_max = 0.0;  ///< 0 means "last node"
};

class InitialProfile {
public:
  using Variant = std::variant<Uniform, LogNormalShell, Tabulated>;

  InitialProfile() : InitialProfile(Uniform{}) {}
  explicit InitialProfile(Uniform u);
  explicit InitialProfile(LogNormalShell s);
  explicit InitialProfile(Tabulated t);

  const Variant& variant() const { return v_; }
  bool is_uniform() const { return std::holds_alternative<Uniform>(v_); }

  /// Shape function g(r) >= 0; the physical density is g(r) for uniform and
  /// tabulated profiles and unit*g(r) for the log-normal shell (see Model).
  double shape(double r, Symmetry sym) const;
  /// Integral geom * int_0^r shape(x) x^k dx (geom = 4 pi or 2 pi).
  double enclosed_shape(double r, Symmetry sym) const;
  /// Radial interval carrying the bulk of the profile, used for default grids.
  std::pair<double, double> support() const;

private:
  Variant v_;
  std::vector<double> slope_;  // monotone cubic node slopes (tabulated)
  std::vector<double> cum_sphere_;
  std::vector<double> cum_cyl_;

  void prepare_tabulated();
  double tab_value(double r) const;
  double tab_segment_integral(std::size_t i, double a, double b, int k) const;
};

struct LayerCoefficients {
  KernelKind kind;
  double c = 1.0;
  double r = 0.0;
  double rho0 = 0.0;
  double N = 0.0;
  double theta_sq = 0.0;
  double beta_bar_sq = 0.0;
  double eta_sq = 0.0;
  double lam = 0.0;
  double d_eta_sq = 0.0;
  double d_beta_bar_sq = 0.0;
  double d_lam = 0.0;

  /// Kernel parameter: eta^2 for spheres, beta_bar^2 for cylinders, 0 classically.
  double y() const { return kind.is_sphere() ? eta_sq : beta_bar_sq; }
  double dy() const { return kind.is_sphere() ? d_eta_sq : d_beta_bar_sq; }
};

/// Scenario plus initial profile; the physical content of a run.
class Model {
public:
  Model(Scenario s, InitialProfile p);

  const Scenario& scenario() const { return s_; }
  const InitialProfile& profile() const { return p_; }
  KernelKind kind() const { return s_.kind(); }

  /// Charge (EM) or mass (gravity) density at t = 0, nonnegative.
  double rho0(double r) const;
  /// Enclosed charge magnitude (EM) or mass (gravity); per unit height for cylinders.
  double enclosed(double r) const;
  double cumulative_number(double r) const;
  LayerCoefficients layer_coefficients(double r) const;

  /// Geometric grid of n radii spanning the profile support.
  std::vector<double> default_grid(int n) const;
  double r_ref() const;

private:
  Scenario s_;
  InitialProfile p_;
  double unit_;      // |q| or m
  double coupling_;  // theta^2 = coupling_ * enclosed(r)
};

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace shellflow
