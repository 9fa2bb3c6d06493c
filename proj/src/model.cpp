#include "shellflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shellflow/errors.hpp"
#include "shellflow/numeric.hpp"

namespace shellflow {

using numeric::kPi;

std::string KernelKind::name() const {
  std::string s = is_em() ? "em" : "gravity";
  s += is_sphere() ? "-sphere" : "-cylinder";
  s += is_relativistic() ? "-rel" : "-classical";
  return s;
}

std::vector<KernelKind> all_kernel_kinds() {
  std::vector<KernelKind> out;
  for (auto in : {Interaction::EM, Interaction::Gravity})
    for (auto sy : {Symmetry::Sphere, Symmetry::Cylinder})
      for (auto rg : {Regime::Relativistic, Regime::Classical}) out.push_back({in, sy, rg});
  return out;
}

void Scenario::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("scenario: ") + name + " must be positive and finite");
  };
  positive(m, "m");
  positive(c, "c");
  positive(eps0, "eps0");
  positive(G, "G");
  positive(ell, "ell");
  if (interaction == Interaction::EM && (q == 0.0 || !std::isfinite(q)))
    throw ConfigError("scenario: EM interaction requires q != 0");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / numeric::kSqrt2); }

// ---------------------------------------------------------------- profile

InitialProfile::InitialProfile(Uniform u) : v_(u) {
  if (!(u.rho0 >= 0.0) || !std::isfinite(u.rho0)) throw ConfigError("uniform: rho0 must be >= 0");
  if (!(u.r_max > 0.0) || !std::isfinite(u.r_max)) throw ConfigError("uniform: r_max must be > 0");
}

InitialProfile::InitialProfile(LogNormalShell s) : v_(s) {
  if (!(s.f0 >= 0.0) || !std::isfinite(s.f0)) throw ConfigError("lognormal: f0 must be >= 0");
  if (!(s.tau > 0.0)) throw ConfigError("lognormal: tau must be > 0");
  if (!(s.sigma_r > 0.0)) throw ConfigError("lognormal: sigma_r must be > 0");
  if (!std::isfinite(s.mu_r)) throw ConfigError("lognormal: mu_r must be finite");
}

InitialProfile::InitialProfile(Tabulated t) : v_(std::move(t)) { prepare_tabulated(); }

void InitialProfile::prepare_tabulated() {
  auto& t = std::get<Tabulated>(v_);
  const std::size_t n = t.r.size();
  if (n < 2 || t.rho.size() != n) throw ConfigError("tabulated: need >= 2 matching (r, rho) nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(t.r[i]) || !std::isfinite(t.rho[i]))
      throw ConfigError("tabulated: non-finite node");
    if (t.rho[i] < 0.0) throw ConfigError("tabulated: negative density");
    if (i > 0 && !(t.r[i] > t.r[i - 1])) throw ConfigError("tabulated: r must be strictly increasing");
  }
  if (t.r.front() < 0.0) throw ConfigError("tabulated: negative radius");
  if (t.r_max == 0.0) t.r_max = t.r.back();
  if (t.r_max < t.r.back()) throw ConfigError("tabulated: r_max below last node");

  // Fritsch-Carlson monotone slopes.
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = t.r[i + 1] - t.r[i];
    d[i] = (t.rho[i + 1] - t.rho[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  slope_[0] = d[0];
  slope_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  if (n == 2) slope_[0] = slope_[1] = d[0];

  cum_sphere_.assign(n, 0.0);
  cum_cyl_.assign(n, 0.0);
  // Constant extension of the first node down to the origin.
  const double r0 = t.r.front();
  cum_sphere_[0] = t.rho.front() * r0 * r0 * r0 / 3.0;
  cum_cyl_[0] = t.rho.front() * r0 * r0 / 2.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cum_sphere_[i + 1] = cum_sphere_[i] + tab_segment_integral(i, t.r[i], t.r[i + 1], 2);
    cum_cyl_[i + 1] = cum_cyl_[i] + tab_segment_integral(i, t.r[i], t.r[i + 1], 1);
  }
}

double InitialProfile::tab_value(double r) const {
  const auto& t = std::get<Tabulated>(v_);
  if (r > t.r_max) return 0.0;
  if (r <= t.r.front()) return t.rho.front();
  if (r >= t.r.back()) return t.rho.back();
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(t.r.begin(), t.r.end(), r) - t.r.begin()) - 1;
  const double h = t.r[i + 1] - t.r[i];
  const double u = (r - t.r[i]) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return std::max(0.0, h00 * t.rho[i] + h10 * h * slope_[i] + h01 * t.rho[i + 1] +
                           h11 * h * slope_[i + 1]);
}

double InitialProfile::tab_segment_integral(std::size_t, double a, double b, int k) const {
  return numeric::integrate([&](double x) { return tab_value(x) * std::pow(x, k); }, a, b, 1e-14);
}

double InitialProfile::shape(double r, Symmetry sym) const {
  if (r < 0.0) throw DomainError("profile: negative radius");
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return r <= p.r_max ? p.rho0 : 0.0;
        } else if constexpr (std::is_same_v<T, LogNormalShell>) {
          if (r == 0.0) return 0.0;
          // tau * rho_n(tau r) with rho_n the log-normal pdf
          const double u = p.tau * r;
          const double z = (std::log(u) - p.mu_r) / p.sigma_r;
          const double pdf = std::exp(-0.5 * z * z) / (u * p.sigma_r * std::sqrt(2.0 * kPi));
          const double geom = sym == Symmetry::Sphere ? 4.0 * kPi * r * r : 2.0 * kPi * r;
          return p.f0 * p.tau * pdf / geom;
        } else {
          return tab_value(r);
        }
      },
      v_);
}

double InitialProfile::enclosed_shape(double r, Symmetry sym) const {
  if (r < 0.0) throw DomainError("profile: negative radius");
  const bool sph = sym == Symmetry::Sphere;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          const double a = std::min(r, p.r_max);
          return sph ? 4.0 * kPi / 3.0 * p.rho0 * a * a * a : kPi * p.rho0 * a * a;
        } else if constexpr (std::is_same_v<T, LogNormalShell>) {
          if (r == 0.0) return 0.0;
          return p.f0 * normal_cdf((std::log(p.tau * r) - p.mu_r) / p.sigma_r);
        } else {
          const double geom = sph ? 4.0 * kPi : 2.0 * kPi;
          const int k = sph ? 2 : 1;
          const auto& cum = sph ? cum_sphere_ : cum_cyl_;
          const double a = std::min(r, p.r_max);
          if (a <= p.r.front()) {
            return geom * p.rho.front() * std::pow(a, k + 1) / (k + 1);
          }
          if (a >= p.r.back()) {
            const double tail = p.rho.back() *
                                (std::pow(a, k + 1) - std::pow(p.r.back(), k + 1)) / (k + 1);
            return geom * (cum.back() + tail);
          }
          const std::size_t i =
              static_cast<std::size_t>(std::upper_bound(p.r.begin(), p.r.end(), a) - p.r.begin()) - 1;
          return geom * (cum[i] + tab_segment_integral(i, p.r[i], a, k));
        }
      },
      v_);
}

std::pair<double, double> InitialProfile::support() const {
  return std::visit(
      [&](const auto& p) -> std::pair<double, double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return {1e-2 * p.r_max, p.r_max};
        } else if constexpr (std::is_same_v<T, LogNormalShell>) {
          return {std::exp(p.mu_r - 5.0 * p.sigma_r) / p.tau,
                  std::exp(p.mu_r + 5.0 * p.sigma_r) / p.tau};
        } else {
          return {p.r.front() > 0.0 ? p.r.front() : 1e-2 * p.r_max, p.r_max};
        }
      },
      v_);
}

// ------------------------------------------------------------------ model

Model::Model(Scenario s, InitialProfile p) : s_(s), p_(std::move(p)) {
  s_.validate();
  const bool em = s_.interaction == Interaction::EM;
  const bool sph = s_.symmetry == Symmetry::Sphere;
  unit_ = em ? std::abs(s_.q) : s_.m;
  if (em)
    coupling_ = sph ? std::abs(s_.q) / (4.0 * kPi * s_.eps0 * s_.m)
                    : std::abs(s_.q) / (2.0 * kPi * s_.eps0 * s_.m * s_.ell);
  else
    coupling_ = sph ? s_.G : 2.0 * s_.G / s_.ell;
}

double Model::rho0(double r) const {
  const double g = p_.shape(r, s_.symmetry);
  return std::holds_alternative<LogNormalShell>(p_.variant()) ? unit_ * g : g;
}

double Model::enclosed(double r) const {
  const double g = p_.enclosed_shape(r, s_.symmetry);
  return std::holds_alternative<LogNormalShell>(p_.variant()) ? unit_ * g : g;
}

double Model::cumulative_number(double r) const { return enclosed(r) / unit_; }

LayerCoefficients Model::layer_coefficients(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("layer_coefficients: r must be > 0");
  const KernelKind kind = s_.kind();
  const bool sph = kind.is_sphere();
  const double c = s_.c;

  LayerCoefficients lc;
  lc.kind = kind;
  lc.c = c;
  lc.r = r;
  lc.rho0 = rho0(r);
  const double Q = enclosed(r);
  lc.N = Q / unit_;
  lc.theta_sq = coupling_ * Q;
  const double d_theta_sq = coupling_ * (sph ? 4.0 * kPi * r * r : 2.0 * kPi * r) * lc.rho0;

  if (lc.theta_sq <= 0.0) return lc;  // empty interior: the layer stays put

  const double theta = std::sqrt(lc.theta_sq);
  if (!kind.is_relativistic()) {
    if (sph) {
      lc.lam = numeric::kSqrt2 * theta / std::pow(r, 1.5);
      lc.d_lam = lc.lam * (d_theta_sq / (2.0 * lc.theta_sq) - 1.5 / r);
    } else {
      lc.lam = theta / (r * numeric::kSqrt2);
      lc.d_lam = lc.lam * (d_theta_sq / (2.0 * lc.theta_sq) - 1.0 / r);
    }
    return lc;
  }

  lc.beta_bar_sq = lc.theta_sq / (c * c);
  if (sph) {
    const double Y = lc.beta_bar_sq / r;
    const double dY = d_theta_sq / (c * c * r) - Y / r;
    const double sg = kind.is_em() ? 1.0 : -1.0;
    if (!kind.is_em() && Y >= 1.0)
      throw QuasiRelativismError("gravity sphere: eta^2 >= 1 at r = " + std::to_string(r), r, Y);
    lc.eta_sq = Y;
    lc.d_eta_sq = dY;
    lc.d_beta_bar_sq = d_theta_sq / (c * c);
    const double eta = std::sqrt(Y);
    const double g = 1.0 + sg * Y;
    lc.lam = c * eta * std::sqrt(2.0 + sg * Y) / (r * g);
    // d/dY [sqrt(Y(2 +- Y)) / (1 +- Y)] = 1 / (sqrt(Y(2 +- Y)) (1 +- Y)^2)
    lc.d_lam = c * dY / (r * std::sqrt(Y * (2.0 + sg * Y)) * g * g) - lc.lam / r;
  } else {
    lc.d_beta_bar_sq = d_theta_sq / (c * c);
    lc.lam = theta / (r * numeric::kSqrt2);
    lc.d_lam = lc.lam * (d_theta_sq / (2.0 * lc.theta_sq) - 1.0 / r);
  }
  return lc;
}

double Model::r_ref() const { return p_.support().second; }

std::vector<double> Model::default_grid(int n) const {
  if (n < 2) throw ConfigError("grid: need at least 2 layers");
  const auto [lo, hi] = p_.support();
  std::vector<double> g(static_cast<std::size_t>(n));
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i / (n - 1));
  g.back() = hi;
  return g;
}

}  // namespace shellflow
