#include "shellflow/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shellflow/analysis.hpp"
#include "shellflow/characteristics.hpp"
#include "shellflow/config.hpp"
#include "shellflow/density.hpp"
#include "shellflow/errors.hpp"
#include "shellflow/verification.hpp"

namespace shellflow {

using ojson = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

ojson jnum(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

struct Options {
  std::string scenario_path;
  std::string out_path;
  std::optional<double> t_max;
  std::optional<int> layers;
  std::optional<int> samples;
  std::optional<std::string> regime;
  std::optional<std::uint64_t> seed;  // reserved
};

class Csv {
public:
  Csv(std::ostream& os, std::initializer_list<const char*> header) : os_(os) {
    bool first = true;
    for (const char* h : header) {
      if (!first) os_ << ',';
      os_ << h;
      first = false;
    }
    os_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... vs) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(vs), first = false), ...);
    os_ << '\n';
  }

private:
  std::ostream& os_;
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
};

std::vector<double> time_grid(double t_max, int n) {
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = t_max * i / n;
  return t;
}

ScenarioFile load(const Options& o) {
  if (o.scenario_path.empty()) throw ConfigError("--scenario is required");
  ScenarioFile sf = load_scenario_file(o.scenario_path);
  if (o.t_max) {
    if (!(*o.t_max > 0.0)) throw ConfigError("--t-max: must be > 0");
    sf.run.t_max = *o.t_max;
  }
  if (o.layers) {
    if (*o.layers < 2) throw ConfigError("--layers: must be >= 2");
    sf.run.n_layers = *o.layers;
  }
  if (o.samples) {
    if (*o.samples < 1) throw ConfigError("--samples: must be >= 1");
    sf.run.n_time_samples = *o.samples;
  }
  if (o.regime) sf.scenario.regime = *o.regime == "classical" ? Regime::Classical : Regime::Relativistic;
  sf.scenario.validate();
  return sf;
}

ojson shock_json(const ShockReport& sr, const KernelKind& kind) {
  ojson j;
  j["kind"] = kind.name();
  j["shock"] = to_string(sr.kind);
  j["t_c"] = jnum(sr.t_c);
  j["R_c"] = jnum(sr.R_c);
  j["r_star"] = jnum(sr.r_star);
  j["t_first"] = jnum(sr.t_first);
  j["simultaneous"] = sr.simultaneous;
  ojson scan = ojson::array();
  for (const auto& e : sr.scan)
    scan.push_back({{"r0", jnum(e.r)}, {"t_J0", jnum(e.t_J0)}, {"t_arrival", jnum(e.t_arrival)}});
  j["scan"] = std::move(scan);
  return j;
}

int cmd_characteristics(const ScenarioFile& sf, std::ostream& os) {
  const Model model = sf.model();
  const auto times = time_grid(sf.run.t_max, sf.run.n_time_samples);
  Csv csv(os, {"t", "r0", "R", "beta"});
  for (double r0 : sf.layer_grid()) {
    const LayerTrajectory tr = trajectory(model.layer_coefficients(r0), times);
    for (const auto& s : tr.samples) csv.row(s.t, r0, s.R, s.beta);
  }
  return kExitOk;
}

int cmd_density(const ScenarioFile& sf, std::ostream& os, std::ostream& err) {
  const Model model = sf.model();
  const auto grid = sf.layer_grid();
  const std::vector<double> times =
      sf.run.t_snapshot ? std::vector<double>{*sf.run.t_snapshot}
                        : time_grid(sf.run.t_max, sf.run.n_time_samples);
  Csv csv(os, {"t", "r0", "R", "rho", "jac", "near_caustic"});
  for (double t : times) {
    const DensitySnapshot snap = snapshot(model, grid, t);
    for (const auto& p : snap.points) {
      if (p.status == LayerStatus::PastShock || p.status == LayerStatus::PastCollapse) {
        const ShockReport sr = shock_time(model, grid, t);
        err << "shock reached before t = " << format_number(t) << '\n'
            << shock_json(sr, model.kind()).dump(2) << '\n';
        return kExitShock;
      }
    }
    for (const auto& p : snap.points) csv.row(snap.t, p.r0, p.R, p.rho, p.jac, p.near_caustic());
  }
  return kExitOk;
}

int cmd_velocity(const ScenarioFile& sf, std::ostream& os) {
  const Model model = sf.model();
  const auto times = time_grid(sf.run.t_max, sf.run.n_time_samples);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Csv csv(os, {"t", "r0", "beta", "beta_inf"});
  for (double r0 : sf.layer_grid()) {
    const LayerTrajectory tr = trajectory(model.layer_coefficients(r0), times);
    double beta_inf = nan;
    if (tr.asymptote)
      beta_inf = tr.asymptote->is_beta ? tr.asymptote->value : tr.asymptote->value / sf.scenario.c;
    for (const auto& s : tr.samples) csv.row(s.t, r0, s.beta, beta_inf);
  }
  return kExitOk;
}

int cmd_shock(const ScenarioFile& sf, std::ostream& os) {
  const Model model = sf.model();
  const ShockReport sr = shock_time(model, sf.layer_grid(), sf.run.t_max);
  os << shock_json(sr, model.kind()).dump(2) << '\n';
  return kExitOk;
}

int cmd_collapse(const ScenarioFile& sf, std::ostream& os) {
  const Model model = sf.model();
  const CollapseTimes ct = collapse_times(model);
  ojson j;
  j["kind"] = model.kind().name();
  j["T"] = jnum(ct.T);
  j["T_s"] = jnum(ct.T_s);
  j["T_c"] = jnum(ct.T_c);
  j["ratio"] = jnum(ct.ratio);
  os << j.dump(2) << '\n';
  return kExitOk;
}

void write_b(const ScenarioFile& sf, const Model& model, std::ostream& os) {
  double t_end = sf.run.t_max;
  if (!model.kind().is_em()) {
    const auto lc = model.layer_coefficients(model.r_ref());
    t_end = std::min(t_end, 0.99 * arrival_time(lc));
  }
  Csv csv(os, {"t", "b", "b_dot", "stiffness", "stiffness_exact", "b_lagrangian"});
  for (double t : time_grid(t_end, sf.run.n_time_samples)) {
    const VelocityCoefficient vc = effective_velocity_coefficient(model, t);
    csv.row(vc.t, vc.b, vc.b_dot, vc.stiffness, vc.stiffness_exact, vc.b_lagrangian);
  }
}

int cmd_analyze(const ScenarioFile& sf, const Options& o, std::ostream& os, std::ostream& err) {
  const Model model = sf.model();
  const double t = sf.run.t_snapshot.value_or(sf.run.t_max);
  const DensitySnapshot snap = snapshot(model, sf.layer_grid(), t);
  const PotentialProfile qp = quantum_potential(snap, sf.scenario.m, sf.run.hbar);
  {
    Csv csv(os, {"R", "Q", "low_confidence"});
    for (const auto& p : qp.points) csv.row(p.R, p.Q, p.low_confidence);
  }
  const bool has_b = model.profile().is_uniform() && !model.kind().is_relativistic();
  if (!has_b) {
    err << "analyze: b(t) needs a uniform classical scenario; skipped\n";
    return kExitOk;
  }
  if (o.out_path.empty()) {
    os << '\n';
    write_b(sf, model, os);
    return kExitOk;
  }
  const std::filesystem::path p(o.out_path);
  const std::filesystem::path bp =
      p.parent_path() / (p.stem().string() + "_b" + p.extension().string());
  std::ofstream bf(bp, std::ios::binary);
  if (!bf) throw ConfigError("cannot open output file " + bp.string());
  write_b(sf, model, bf);
  return kExitOk;
}

std::vector<double> pick_layers(const std::vector<double>& grid, int k) {
  if (k == 1) return {grid[grid.size() / 2]};
  std::vector<double> out;
  const std::size_t n = grid.size();
  for (int i = 0; i < k; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i) * (n - 1) / static_cast<std::size_t>(k - 1);
    if (out.empty() || grid[idx] != out.back()) out.push_back(grid[idx]);
  }
  return out;
}

int cmd_verify(const ScenarioFile& sf, std::ostream& os) {
  const Model model = sf.model();
  const double t_end = verification_horizon(model, sf.run.t_max);
  const auto layers = pick_layers(sf.layer_grid(), sf.run.verify_layers);
  const AgreementReport rep = three_way_agreement(model, layers, t_end, sf.run.n_time_samples);
  const bool ok = rep.max_ode_rel <= sf.run.tolerances.verify_ode &&
                  rep.max_quad_rel <= sf.run.tolerances.verify_quadrature;
  ojson j;
  j["kind"] = rep.kind.name();
  j["t_end"] = jnum(rep.t_end);
  j["tolerance_ode"] = sf.run.tolerances.verify_ode;
  j["tolerance_quadrature"] = sf.run.tolerances.verify_quadrature;
  j["max_ode_rel"] = jnum(rep.max_ode_rel);
  j["max_quad_rel"] = jnum(rep.max_quad_rel);
  j["max_first_integral_drift"] = jnum(rep.max_first_integral_drift);
  j["pass"] = ok;
  ojson ls = ojson::array();
  for (const auto& la : rep.layers)
    ls.push_back({{"r0", jnum(la.r0)},
                  {"max_ode_rel", jnum(la.max_ode_rel)},
                  {"max_quad_rel", jnum(la.max_quad_rel)},
                  {"max_first_integral_drift", jnum(la.max_first_integral_drift)},
                  {"ode_steps", la.ode_steps},
                  {"ode_rejections", la.ode_rejections}});
  j["layers"] = std::move(ls);
  os << j.dump(2) << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form Lagrangian dynamics of charged and self-gravitating shells"};
  app.name("shellflow");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--scenario", o.scenario_path, "scenario JSON file");
  app.add_option("--out", o.out_path, "output file (default: standard output)");
  app.add_option("--t-max", o.t_max, "override run.t_max");
  app.add_option("--layers", o.layers, "override run.n_layers");
  app.add_option("--samples", o.samples, "override run.n_time_samples");
  app.add_option("--regime", o.regime, "override the regime")
      ->check(CLI::IsMember({"rel", "classical"}));
  app.add_option("--seed", o.seed, "reserved; all algorithms are deterministic");

  const std::vector<std::pair<const char*, const char*>> cmds = {
      {"characteristics", "layer trajectories: t, r0, R, beta"},
      {"density", "density snapshots: t, r0, R, rho, jac, near_caustic"},
      {"velocity", "speed scans: t, r0, beta, beta_inf"},
      {"shock", "first caustic or central collapse (JSON)"},
      {"collapse", "gravitational collapse times (JSON)"},
      {"analyze", "quantum potential and velocity coefficient (CSV)"},
      {"verify", "closed form vs ODE and quadrature oracles (JSON)"},
      {"schema", "print the scenario-file JSON schema"},
  };
  for (const auto& [name, help] : cmds) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_ss, e_ss;
    const int code = app.exit(e, o_ss, e_ss);
    out << o_ss.str();
    err << e_ss.str();
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    if (cmd == "schema") {
      out << scenario_schema() << '\n';
      return kExitOk;
    }
    const ScenarioFile sf = load(o);
    std::unique_ptr<std::ofstream> file;
    if (!o.out_path.empty()) {
      file = std::make_unique<std::ofstream>(o.out_path, std::ios::binary);
      if (!*file) throw ConfigError("cannot open output file " + o.out_path);
    }
    std::ostream& os = file ? *file : out;
    if (cmd == "characteristics") return cmd_characteristics(sf, os);
    if (cmd == "density") return cmd_density(sf, os, err);
    if (cmd == "velocity") return cmd_velocity(sf, os);
    if (cmd == "shock") return cmd_shock(sf, os);
    if (cmd == "collapse") return cmd_collapse(sf, os);
    if (cmd == "analyze") return cmd_analyze(sf, o, os, err);
    if (cmd == "verify") return cmd_verify(sf, os);
    err << "unknown command " << cmd << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PastShockError& e) {
    err << "shock reached: " << e.what() << " (r0 = " << format_number(e.r0()) << ")\n";
    return kExitShock;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace shellflow
