// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shellflow/analysis.hpp"
#include "shellflow/characteristics.hpp"
#include "shellflow/cli.hpp"
#include "shellflow/config.hpp"
#include "shellflow/density.hpp"
#include "shellflow/kernels.hpp"
#include "shellflow/numeric.hpp"
#include "shellflow/verification.hpp"

using namespace shellflow;

namespace {

constexpr double kOdeTol = 1e-6;
constexpr double kQuadTol = 1e-9;
constexpr double kOracleSeconds = 60.0;
constexpr double kRoundtripTol = 1e-10;
constexpr double kDerivativeTol = 1e-7;
constexpr double kConservationTol = 1e-6;
constexpr double kKernelLimitTol = 1e-6;
constexpr double kPipelineLimitTol = 1e-4;
constexpr double kSimultaneousTol = 1e-8;
constexpr double kCollapseTol = 1e-10;
constexpr double kTerminalSpeedTol = 0.01;
constexpr double kBetaAtEtaOneTol = 1e-12;
constexpr double kConstantDensityTol = 1e-10;
constexpr double kMachineTol = 4.0 * std::numeric_limits<double>::epsilon();
constexpr double kQZeroTol = 1e-10;

const char* const kScenarios[] = {
    "em_sphere_uniform",       "em_sphere_lognormal",       "em_cylinder_uniform",
    "em_cylinder_lognormal",   "gravity_sphere_uniform",    "gravity_sphere_lognormal",
    "gravity_cylinder_uniform", "gravity_cylinder_lognormal",
};

std::string path_of(const std::string& name) {
  return std::string(SHELLFLOW_SOURCE_DIR) + "/scenarios/" + name + ".json";
}

ScenarioFile load(const std::string& name) { return load_scenario_file(path_of(name)); }

Model with_regime(const Model& m, Regime r, double c_scale = 1.0) {
  Scenario s = m.scenario();
  s.regime = r;
  s.c *= c_scale;
  return Model(s, m.profile());
}

Model uniform_model(KernelKind k, double rho0) {
  Scenario s;
  s.interaction = k.interaction;
  s.symmetry = k.symmetry;
  s.regime = k.regime;
  return Model(s, InitialProfile(Uniform{rho0, 1.0}));
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

double richardson(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::vector<double> pick(const std::vector<double>& grid, int k) {
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(grid[static_cast<std::size_t>(i) * (grid.size() - 1) / (k - 1)]);
  return out;
}

// 1
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double ode = 0.0, quad = 0.0;
  int runs = 0;
  for (const char* name : kScenarios) {
    const ScenarioFile sf = load(name);
    for (Regime r : {Regime::Relativistic, Regime::Classical}) {
      const Model m = with_regime(sf.model(), r);
      const double t_end = verification_horizon(m, sf.run.t_max);
      const auto layers = pick(m.default_grid(64), 4);
      const AgreementReport rep = three_way_agreement(m, layers, t_end, 40);
      ode = std::max(ode, rep.max_ode_rel);
      quad = std::max(quad, rep.max_quad_rel);
      ++runs;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ode <= kOdeTol && quad <= kQuadTol && secs <= kOracleSeconds,
          std::to_string(runs) + " kind/profile runs x 4 layers, max ODE " + num(ode) + " (<= " + num(kOdeTol) +
              "), max quadrature " + num(quad) + " (<= " + num(kQuadTol) + "), " + num(secs) + "s (<= 60s)"};
}

struct Domain {
  double x_lo, x_hi, y_hi;
};

Domain domain(KernelKind k) {
  if (k.is_em()) return {1.0 + 1e-6, 1e3, 10.0};
  return {1e-3, 1.0 - 1e-6, k.is_sphere() ? 0.95 : 10.0};
}

double sample_x(std::mt19937_64& rng, KernelKind k) {
  const Domain d = domain(k);
  const double lo = std::log(std::abs(d.x_lo - 1.0)), hi = std::log(std::abs(d.x_hi - 1.0));
  const double dist = std::exp(std::uniform_real_distribution<double>(std::min(lo, hi), std::max(lo, hi))(rng));
  return k.is_em() ? 1.0 + dist : 1.0 - dist;
}

// 2
Outcome roundtrip() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (const auto& k : all_kernel_kinds()) {
    std::uniform_real_distribution<double> ydist(0.0, domain(k).y_hi);
    for (int i = 0; i < 1000; ++i) {
      const double y = ydist(rng);
      const double x = sample_x(rng, k);
      worst = std::max(worst, rel_err(kernels::inverse_map(k, kernels::forward_map(k, x, y), y), x));
    }
  }
  return {worst <= kRoundtripTol, "8 kinds x 1000 points, max relative error " + num(worst)};
}

// 3
Outcome derivatives() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double wx = 0.0, wy = 0.0, wc = 0.0, wj = 0.0;
  for (const auto& k : all_kernel_kinds()) {
    Scenario s;
    s.interaction = k.interaction;
    s.symmetry = k.symmetry;
    s.regime = k.regime;
    const Model m(s, InitialProfile(LogNormalShell{0.5, 2.0, 0.0, 0.2}));
    const double y_hi = 0.9 * domain(k).y_hi;
    for (int i = 0; i < 200; ++i) {
      const double y = 0.05 + (y_hi - 0.05) * u(rng);
      const double x = k.is_em() ? 1.05 + 49.0 * u(rng) : 0.05 + 0.9 * u(rng);
      const double hx = 1e-3 * std::min(std::abs(x - 1.0), x);
      wx = std::max(wx, rel_err(kernels::d_forward_dx(k, x, y),
                                richardson([&](double v) { return kernels::forward_map(k, v, y); }, x, hx)));
      if (k.is_relativistic())
        wy = std::max(wy, rel_err(kernels::d_forward_dy(k, x, y),
                                  richardson([&](double v) { return kernels::forward_map(k, x, v); }, y, 1e-3 * y)));

      const double r = 0.3 + 0.6 * u(rng);
      const LayerCoefficients lc = m.layer_coefficients(r);
      wc = std::max(wc, rel_err(lc.d_lam, richardson([&](double v) { return m.layer_coefficients(v).lam; }, r, 1e-3 * r)));
      if (k.is_relativistic())
        wc = std::max(wc, rel_err(lc.dy(), richardson([&](double v) { return m.layer_coefficients(v).y(); }, r, 1e-3 * r)));

      const double t_hi = k.is_em() ? 5.0 / lc.lam : 0.8 * arrival_time(lc);
      const double t = t_hi * (0.05 + 0.95 * u(rng));
      const double fd = richardson([&](double v) { return layer_radius(m.layer_coefficients(v), t); }, r, 1e-4 * r);
      // J is O(1) before any caustic; measure against max(|J|, 1)
      wj = std::max(wj, std::abs(layer_state(lc, t).jac - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  const double worst = std::max({wx, wy, wc, wj});
  return {worst <= kDerivativeTol, "200 points per kind: dF/dx " + num(wx) + ", dF/dy " + num(wy) +
                                       ", coefficients " + num(wc) + ", Jacobian " + num(wj)};
}

// 4
Outcome conservation() {
  double worst = 0.0;
  int checks = 0;
  for (const char* name : kScenarios) {
    const ScenarioFile sf = load(name);
    const Model m = sf.model();
    const double t_end = verification_horizon(m, sf.run.t_max);
    const auto grid = m.default_grid(11);
    for (int j = 1; j <= 5; ++j) {
      const double t = t_end * j / 5.0;
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        worst = std::max(worst, conservation_check(m, grid[i], grid[i + 1], t));
        ++checks;
      }
    }
  }
  return {worst <= kConservationTol, std::to_string(checks) + " shell/time checks, max relative change " + num(worst)};
}

// 5
Outcome classical_limit() {
  std::mt19937_64 rng(5);
  double wk = 0.0;
  for (const auto& k : all_kernel_kinds()) {
    if (!k.is_relativistic()) continue;
    KernelKind cl = k;
    cl.regime = Regime::Classical;
    for (int i = 0; i < 200; ++i) {
      const double x = k.is_em() ? 1.0 + 99.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng)
                                 : std::uniform_real_distribution<double>(1e-3, 1.0)(rng);
      wk = std::max(wk, std::abs(kernels::forward_map(k, x, 1e-8) - kernels::forward_map(cl, x, 0.0)));
    }
  }
  double wp = 0.0;
  for (const char* name : kScenarios) {
    const Model base = load(name).model();
    const Model rel = with_regime(base, Regime::Relativistic, 1e6);
    const Model cla = with_regime(base, Regime::Classical, 1e6);
    const auto grid = cla.default_grid(16);
    const double t_end = 0.9 * verification_horizon(cla, 20.0);
    for (double f : {0.25, 0.5, 1.0}) {
      const DensitySnapshot a = snapshot(rel, grid, f * t_end);
      const DensitySnapshot b = snapshot(cla, grid, f * t_end);
      for (std::size_t i = 0; i < grid.size(); ++i) wp = std::max(wp, rel_err(a.points[i].rho, b.points[i].rho));
    }
  }
  return {wk <= kKernelLimitTol && wp <= kPipelineLimitTol,
          "kernels at y = 1e-8: " + num(wk) + " abs; pipeline with c x 1e6: " + num(wp) + " rel"};
}

// 6
Outcome collapse() {
  const double rho0 = 0.1;
  const Model ms = uniform_model({Interaction::Gravity, Symmetry::Sphere, Regime::Classical}, rho0);
  const Model mc = uniform_model({Interaction::Gravity, Symmetry::Cylinder, Regime::Classical}, rho0);
  double lo = INFINITY, hi = 0.0;
  for (double r : ms.default_grid(64)) {
    const double T = arrival_time(ms.layer_coefficients(r));
    lo = std::min(lo, T);
    hi = std::max(hi, T);
  }
  const double spread = (hi - lo) / lo;
  const ShockReport sr = shock_time(ms, ms.default_grid(64), 10.0);
  // G = 1: T_s = sqrt(3 pi / (32 rho0)), T_c = 1 / (2 sqrt(rho0))
  const double Ts = std::sqrt(3.0 * numeric::kPi / (32.0 * rho0));
  const double Tc = 0.5 / std::sqrt(rho0);
  const CollapseTimes ct = collapse_times(ms);
  const double eTs = std::max(rel_err(ct.T_s, Ts), rel_err(lo, Ts));
  const double eTc = std::max(rel_err(ct.T_c, Tc), rel_err(arrival_time(mc.layer_coefficients(0.5)), Tc));
  const double eR = std::abs(ct.ratio - std::sqrt(3.0 * numeric::kPi / 8.0));
  const bool ok = spread <= kSimultaneousTol && sr.kind == ShockReport::Kind::CentralCollapse && sr.simultaneous &&
                  eTs <= kCollapseTol && eTc <= kCollapseTol && eR <= kCollapseTol;
  return {ok, "spread " + num(spread) + ", T_s err " + num(eTs) + ", T_c err " + num(eTc) + ", ratio " +
                  std::to_string(ct.ratio) + " (err " + num(eR) + ")"};
}

// 7
Outcome speed_laws() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double max_beta = 0.0;
  for (const auto& k : all_kernel_kinds()) {
    if (!k.is_relativistic()) continue;
    const Model m = uniform_model(k, k.is_em() ? 30.0 : 0.2);
    for (int i = 0; i < 500; ++i) {
      const LayerCoefficients lc = m.layer_coefficients(0.01 + 0.99 * u(rng));
      const double t_hi = k.is_em() ? 1e4 / lc.lam : arrival_time(lc) * (1.0 - 1e-9);
      max_beta = std::max(max_beta, std::abs(*layer_speed(lc, t_hi * u(rng)).beta));
    }
  }
  // strongly relativistic sphere, eta^2(1) = 4
  const Model ms = uniform_model({Interaction::EM, Symmetry::Sphere, Regime::Relativistic}, 12.0);
  double terminal = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const LayerCoefficients lc = ms.layer_coefficients(i / 8.0);
    const double b_inf = speed_asymptote(lc).value;
    terminal = std::max(terminal, std::abs(*layer_speed(lc, 50.0 / lc.lam).beta - b_inf) / b_inf);
  }
  const Model mc = uniform_model({Interaction::EM, Symmetry::Cylinder, Regime::Relativistic}, 1.0);
  bool monotone = true;
  double last = 0.0;
  for (double r : {0.1, 0.5, 1.0}) {
    const LayerCoefficients lc = mc.layer_coefficients(r);
    monotone = monotone && speed_asymptote(lc).value == 1.0;
    double prev = 0.0;
    for (double t = 0.01 / lc.lam; t < 1e5 / lc.lam; t *= 1.2) {
      const double b = *layer_speed(lc, t).beta;
      monotone = monotone && b > prev && b < 1.0;
      prev = b;
    }
    last = prev;
  }
  const Model m1 = uniform_model({Interaction::EM, Symmetry::Sphere, Regime::Relativistic}, 3.0);
  const double e1 = std::abs(speed_asymptote(m1.layer_coefficients(1.0)).value - std::sqrt(3.0) / 2.0);
  const bool ok = max_beta < 1.0 && terminal <= kTerminalSpeedTol && monotone && e1 <= kBetaAtEtaOneTol;
  return {ok, "max beta " + std::to_string(max_beta) + ", sphere |beta(50/lambda) - beta_inf|/beta_inf " +
                  num(terminal) + ", cylinder monotone " + (monotone ? "yes" : "no") + " (beta " +
                  std::to_string(last) + " at 1e5/lambda), beta_inf(eta^2=1) err " + num(e1)};
}

// 8
Outcome shocks() {
  std::string d;
  bool ok = true;
  for (const char* name : {"em_sphere_uniform", "em_cylinder_uniform"}) {
    for (Regime r : {Regime::Relativistic, Regime::Classical}) {
      const Model m = with_regime(load(name).model(), r);
      const auto grid = m.default_grid(64);
      double lam_min = INFINITY;
      for (double x : grid) lam_min = std::min(lam_min, m.layer_coefficients(x).lam);
      ok = ok && shock_time(m, grid, 100.0 / lam_min).kind == ShockReport::Kind::None;
    }
  }
  d += std::string("uniform EM none: ") + (ok ? "yes" : "no");

  const ScenarioFile es = load("em_sphere_lognormal");
  const ShockReport er = shock_time(es.model(), es.model().default_grid(64), es.run.t_max);
  const Model ec = with_regime(es.model(), Regime::Classical);
  const ShockReport ecr = shock_time(ec, ec.default_grid(64), es.run.t_max);
  const bool em_ok = er.kind == ShockReport::Kind::Caustic && ecr.kind == ShockReport::Kind::Caustic && er.t_c > ecr.t_c;
  d += "; EM log-normal t_c rel " + num(er.t_c) + " > classical " + num(ecr.t_c);

  const ScenarioFile gs = load("gravity_sphere_lognormal");
  const ShockReport gr = shock_time(gs.model(), gs.model().default_grid(64), gs.run.t_max);
  const Model gc = with_regime(gs.model(), Regime::Classical);
  const ShockReport gcr = shock_time(gc, gc.default_grid(64), gs.run.t_max);
  const bool g_ok = gr.kind == ShockReport::Kind::Caustic && gcr.kind == ShockReport::Kind::Caustic &&
                    gr.R_c > 0.0 && gcr.R_c > 0.0 && gr.R_c < gcr.R_c;
  d += "; gravity log-normal R_c rel " + num(gr.R_c) + " < classical " + num(gcr.R_c);

  const ScenarioFile gu = load("gravity_sphere_uniform");
  const ShockReport ur = shock_time(gu.model(), gu.model().default_grid(64), gu.run.t_max);
  const bool u_ok = ur.kind == ShockReport::Kind::CentralCollapse && !ur.simultaneous;
  d += std::string("; uniform relativistic gravity ") + to_string(ur.kind) +
       (ur.simultaneous ? " simultaneous" : " non-simultaneous");
  return {ok && em_ok && g_ok && u_ok, d};
}

// 9
Outcome density_signs() {
  const Model rel = load("em_sphere_uniform").model();
  const auto grid = rel.default_grid(32);
  const DensitySnapshot late = snapshot(rel, grid, 20.0);
  const bool outer = late.points.back().rho > late.points.front().rho;

  double flat = 0.0;
  for (const char* name : {"em_sphere_uniform", "em_cylinder_uniform"}) {
    const Model cl = with_regime(load(name).model(), Regime::Classical);
    for (double t : {1.0, 20.0}) {
      const DensitySnapshot s = snapshot(cl, grid, t);
      for (const auto& p : s.points) flat = std::max(flat, rel_err(p.rho, s.points.front().rho));
    }
  }
  double initial = 0.0;
  for (const char* name : kScenarios) {
    for (Regime r : {Regime::Relativistic, Regime::Classical}) {
      const Model m = with_regime(load(name).model(), r);
      for (const auto& p : snapshot(m, m.default_grid(32), 0.0).points) initial = std::max(initial, rel_err(p.rho, m.rho0(p.r0)));
    }
  }
  return {outer && flat <= kConstantDensityTol && initial <= kMachineTol,
          std::string("relativistic outer/inner ") + std::to_string(late.points.back().rho / late.points.front().rho) +
              ", classical spread " + num(flat) + ", t=0 error " + num(initial)};
}

double gaussian_error(int n) {
  std::vector<double> R(static_cast<std::size_t>(n)), rho(R.size());
  for (int i = 0; i < n; ++i) {
    R[static_cast<std::size_t>(i)] = 0.5 + 2.5 * i / (n - 1);
    rho[static_cast<std::size_t>(i)] = std::exp(-0.5 * R[static_cast<std::size_t>(i)] * R[static_cast<std::size_t>(i)]);
  }
  double worst = 0.0;
  for (const auto& p : quantum_potential(R, rho, Symmetry::Sphere, 1.0, 1.0).points) {
    // sigma = m = hbar = 1, k = 2: Q = (R^2 / 4 - 3 / 2) / 2
    if (!p.low_confidence && p.R > 1.0 && p.R < 2.5)
      worst = std::max(worst, std::abs(p.Q - 0.5 * (0.25 * p.R * p.R - 1.5)));
  }
  return worst;
}

// 10
Outcome analysis() {
  double qzero = 0.0;
  for (const char* name : {"em_sphere_uniform", "gravity_cylinder_uniform"}) {
    const Model m = load(name).model();
    for (const auto& p : quantum_potential(snapshot(m, m.default_grid(32), 0.0), 1.0, 1.0).points)
      if (!p.low_confidence) qzero = std::max(qzero, std::abs(p.Q));
  }
  const double e1 = gaussian_error(41), e2 = gaussian_error(81), e3 = gaussian_error(161);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool second = r1 > 3.5 && r1 < 4.5 && r2 > 3.5 && r2 < 4.5;

  bool b_ok = true;
  for (const char* name : {"em_sphere_uniform", "em_cylinder_uniform", "gravity_sphere_uniform", "gravity_cylinder_uniform"}) {
    const Model m = with_regime(load(name).model(), Regime::Classical);
    const LayerCoefficients lc = m.layer_coefficients(0.5);
    const double t_end = m.kind().is_em() ? 50.0 / lc.lam : 0.99 * arrival_time(lc);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const VelocityCoefficient vc = effective_velocity_coefficient(m, t_end * i / 100.0);
      b_ok = b_ok && vc.b > 0.0 && vc.b_lagrangian > prev;
      prev = vc.b_lagrangian;
    }
  }
  return {qzero <= kQZeroTol && second && b_ok,
          "constant-density Q " + num(qzero) + ", Gaussian error ratios " + std::to_string(r1) + ", " +
              std::to_string(r2) + ", b positive and increasing " + (b_ok ? "yes" : "no")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 11
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "shellflow_acceptance";
  std::filesystem::create_directories(dir);
  const char* const cmds[] = {"characteristics", "density", "velocity", "shock", "collapse", "analyze", "verify", "schema"};
  int compared = 0, differing = 0;
  for (const char* name : kScenarios) {
    for (const char* cmd : cmds) {
      std::string outputs[2];
      for (int run = 0; run < 2; ++run) {
        const auto out = dir / (std::string(name) + "_" + cmd + "_" + std::to_string(run) + ".out");
        std::filesystem::remove(out);
        const std::string scen = path_of(name), outs = out.string();
        const char* argv[] = {"shellflow", cmd, "--scenario", scen.c_str(), "--out", outs.c_str()};
        std::ostringstream so, se;
        const int code = run_command(6, argv, so, se);
        std::string b;
        const auto bfile = dir / (out.stem().string() + "_b" + out.extension().string());
        if (std::filesystem::exists(bfile)) {
          b = slurp(bfile);
          std::filesystem::remove(bfile);
        }
        outputs[run] = std::to_string(code) + "\n" + slurp(out) + so.str() + se.str() + b;
      }
      ++compared;
      differing += outputs[0] != outputs[1];
    }
  }
  return {differing == 0, std::to_string(compared) + " command/scenario pairs run twice, " +
                              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "roundtrip inversion", roundtrip);
  report(3, "derivative fidelity", derivatives);
  report(4, "conservation", conservation);
  report(5, "classical limit", classical_limit);
  report(6, "collapse times", collapse);
  report(7, "speed laws", speed_laws);
  report(8, "shock phenomenology", shocks);
  report(9, "density structure", density_signs);
  report(10, "analysis", analysis);
  report(11, "determinism", determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
