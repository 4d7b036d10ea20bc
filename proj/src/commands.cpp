#include "hch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "hch/analysis.hpp"
#include "hch/checkpoint.hpp"
#include "hch/field_io.hpp"
#include "hch/spectral.hpp"

namespace hch {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "check",       "converge", "decompose",
                                              "equilibrium", "lojasiewicz", "absorb",   "lipschitz"};
  return names;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"parseval",    "roundtrip", "power_group",    "projector",
                                              "assumptions", "bg_scale",  "energy_equality"};
  return names;
}

RunConfig effective_config(const CommandOptions& opt) {
  json j = json::object();
  fs::path base;
  if (!opt.config_path.empty()) {
    const fs::path p(opt.config_path);
    if (!fs::exists(p)) throw ConfigError("--config", "file not found: " + p.string());
    std::ifstream is(p);
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    base = p.parent_path();
  }
  if (!j.is_object()) throw ConfigError("<root>", "expected an object");
  if (opt.seed) j["seed"] = *opt.seed;
  if (opt.output_dir) j["output_dir"] = *opt.output_dir;
  return parse_config(j, base);
}

// ---------------------------------------------------------------------------
// check

namespace {

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

double max_abs_diff(const ModalField& a, const ModalField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const ModalField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

CheckResult check_parseval(const GridSpec& grid, std::uint64_t seed) {
  const ModalField z = random_band_limited(grid, grid.n_modes, 1.0, seed);
  NodalField sq = inverse_transform(z);
  for (double& x : sq.values()) x *= x;
  const double l2 = pairing(z, z);
  const double err = rel(std::abs(integrate(sq) - l2), l2);
  return {"parseval", grid.n_modes, err <= 1e-12, err, 1e-12, "relative |h^2 sum u^2 - sum c^2|"};
}

CheckResult check_roundtrip(const GridSpec& grid, std::uint64_t seed) {
  const ModalField z = random_band_limited(grid, grid.n_modes, 1.0, seed);
  const double e1 = rel(max_abs_diff(forward_transform(inverse_transform(z)), z), max_abs(z));
  NodalField x(grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (double& v : x.values()) v = unif(rng);
  const NodalField y = inverse_transform(forward_transform(x));
  double e2 = 0.0;
  for (std::size_t i = 0; i < x.values().size(); ++i) e2 = std::max(e2, std::abs(x.values()[i] - y.values()[i]));
  const double err = std::max(e1, e2);
  return {"roundtrip", grid.n_modes, err <= 1e-12, err, 1e-12, "max relative error of modal and nodal roundtrips"};
}

CheckResult check_power_group(const GridSpec& grid, std::uint64_t seed) {
  const ModalField z = random_band_limited(grid, grid.n_modes, 1.0, seed);
  double err = rel(max_abs_diff(apply_power(z, 0.0), z), max_abs(z));
  const std::pair<double, double> pairs[] = {{0.5, -0.5}, {1.0, 0.5}, {-1.0, 2.0}, {0.25, 0.75}};
  for (auto [s, t] : pairs) {
    const ModalField lhs = apply_power(apply_power(z, s), t);
    const ModalField rhs = apply_power(z, s + t);
    err = std::max(err, rel(max_abs_diff(lhs, rhs), max_abs(rhs)));
  }
  return {"power_group", grid.n_modes, err <= 1e-12, err, 1e-12, "A^s A^t = A^(s+t), A^0 = I"};
}

CheckResult check_projector(const GridSpec& grid, std::uint64_t seed) {
  const ModalField z = random_band_limited(grid, grid.n_modes, 1.0, seed);
  double err = 0.0;
  for (std::size_t m : {std::size_t{1}, grid.n_modes / 2, grid.n_modes}) {
    const ModalField p = project(z, m);
    err = std::max(err, max_abs_diff(project(p, m), p));
    err = std::max(err, rel(std::abs(pairing(p, z - p)), pairing(z, z)));
  }
  return {"projector", grid.n_modes, err <= 1e-14, err, 1e-14, "P_m idempotent and orthogonal to I - P_m"};
}

CheckResult check_assumptions_run(const Nonlinearity& nl, const GridSpec& grid) {
  CheckResult r{"assumptions", 0, false, 0.0, 0.0, ""};
  try {
    const AssumptionReport a = check_assumptions(nl, grid);
    r.passed = a.ok();
    r.value = a.min_df_sampled;
    r.threshold = -a.lambda;
    std::ostringstream os;
    os << "lambda=" << a.lambda << " M=" << a.m_bound << " r0=" << a.r0 << " f1=" << a.f1_holds
       << " f2=" << a.f2_holds << " f3=" << a.f3_holds;
    r.detail = os.str();
  } catch (const UnsupportedNonlinearity& e) {
    r.detail = e.what();
  }
  return r;
}

CheckResult check_bg_scale(const GridSpec& grid, std::uint64_t seed) {
  double err = 0.0;
  ModalField flat(grid);
  const auto lam = eigenvalues(grid);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 1.0 / lam[i];
  for (const ModalField& z : {random_band_limited(grid, std::min<std::size_t>(8, grid.n_modes), 1.0, seed), flat}) {
    const double base = bg_ratio(z).ratio;
    for (double c : {1e-3, 1.0, 1e3}) err = std::max(err, rel(std::abs(bg_ratio(c * z).ratio - base), base));
  }
  return {"bg_scale", grid.n_modes, err <= 1e-10, err, 1e-10, "ratio invariant under z -> c z"};
}

CheckResult check_energy_equality(const GridSpec& grid, const CheckBlock& b) {
  // E(0), E(1) from the closed-form mode, the dissipation integral from the run.
  const double lam = eigenvalue(grid, 1, 1);
  auto mode_energy = [lam](const ModeValue& m) { return 0.5 * (lam * m.u * m.u + m.v * m.v / lam); };
  const double drop = mode_energy(exact_linear_mode(lam, 1.0, 0.0, 0.0)) - mode_energy(exact_linear_mode(lam, 1.0, 0.0, 1.0));
  const State init(basis_mode(grid, 1, 1), ModalField(grid));
  std::vector<double> res, self;
  for (double dt : b.energy_dts) {
    SchemeConfig cfg;
    cfg.dt = dt;
    const TrajectoryLog log = simulate(init, Nonlinearity::zero(), SourceTerm::zero(grid), cfg, 1.0, 1000000);
    res.push_back(std::abs(log.samples.back().dissip_cum - drop));
    self.push_back(energy_equality_residual(log, 0, log.size() - 1));
  }
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < res.size(); ++i)
    order = std::min(order, std::log(res[i] / res[i + 1]) / std::log(b.energy_dts[i] / b.energy_dts[i + 1]));
  const bool ok = order >= b.min_order && res.back() <= b.energy_abs_tol;
  std::ostringstream os;
  os << "residuals";
  for (double r : res) os << ' ' << r;
  os << "; min order " << order << "; discrete-energy residuals";
  for (double r : self) os << ' ' << r;
  return {"energy_equality", grid.n_modes, ok, order, b.min_order, os.str()};
}

bool selected(const std::vector<std::string>& only, const std::string& name) {
  return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::vector<std::string>& only) {
  for (const auto& n : only)
    if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
      throw ConfigError("--only", "unknown check '" + n + "'");
  std::vector<CheckResult> out;
  if (selected(only, "assumptions")) out.push_back(check_assumptions_run(cfg.nl, cfg.grid));
  for (std::size_t n : cfg.check.resolutions) {
    const GridSpec grid(n, cfg.grid.side);
    const std::uint64_t s = cfg.seed + n;
    if (selected(only, "parseval")) out.push_back(check_parseval(grid, s));
    if (selected(only, "roundtrip")) out.push_back(check_roundtrip(grid, s));
    if (selected(only, "power_group")) out.push_back(check_power_group(grid, s));
    if (selected(only, "projector")) out.push_back(check_projector(grid, s));
    if (selected(only, "bg_scale")) out.push_back(check_bg_scale(grid, s));
    if (selected(only, "energy_equality")) out.push_back(check_energy_equality(grid, cfg.check));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  bool quiet;
  std::ostream& out;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setw(2) << j << '\n';
}

json report_head(const std::string& command, bool pass) {
  return {{"schema", 1}, {"command", command}, {"status", pass ? "pass" : "fail"}};
}

json log_json(const LogSample& s) {
  return {{"t", s.t},         {"norm0", s.norm0}, {"norm2", s.norm2}, {"ut_Vprime", s.ut_vprime},
          {"energy", s.energy}, {"calF", s.calF},   {"calG", s.calG},   {"calH", s.calH},
          {"dissip_cum", s.dissip_cum}};
}

int finish(Context& c, const std::string& name, json report, bool pass) {
  write_json(c.dir / (name + ".json"), report);
  if (!c.quiet) c.out << name << ": " << (pass ? "PASS" : "FAIL") << "  (" << (c.dir / (name + ".json")).string() << ")\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_simulate(Context& c) {
  const RunConfig& cfg = c.cfg;
  std::optional<Integrator> integ;
  if (!cfg.resume_from.empty()) {
    integ.emplace(resume(load_checkpoint(cfg.resume_from), cfg.grid, cfg.nl));
  } else {
    integ.emplace(Model(cfg.grid, cfg.nl, build_source(cfg)), cfg.scheme, build_initial(cfg));
  }
  const double energy0 = integ->energy();
  TrajectoryLog log;
  auto observer = [&](const Integrator& it, const LogSample& s) {
    log.samples.push_back(s);
    if (cfg.snapshot_every > 0 && it.steps() % cfg.snapshot_every == 0) {
      std::ostringstream name;
      name << "snap_" << std::setw(8) << std::setfill('0') << it.steps();
      save_mfld(c.dir / (name.str() + "_u.mfld"), it.state().u, it.state().time, "u");
      save_mfld(c.dir / (name.str() + "_ut.mfld"), it.state().v, it.state().time, "ut");
    }
  };
  std::string failure;
  double fail_time = 0.0;
  try {
    run(*integ, cfg.t_end, cfg.sample_every, coercivity_params(cfg.nl, cfg.grid), observer);
  } catch (const InstabilityError& e) {
    failure = e.what();
    fail_time = e.time;
  } catch (const StepFailure& e) {
    failure = e.what();
    fail_time = e.time;
  }
  log.save_csv((c.dir / "trajectory.csv").string());
  save_mfld(c.dir / "u_final.mfld", integ->state().u, integ->state().time, "u");
  save_mfld(c.dir / "ut_final.mfld", integ->state().v, integ->state().time, "ut");
  save_checkpoint(c.dir / "final.ckpt", capture(*integ, cfg.seed));

  json rep = report_head("simulate", failure.empty());
  rep["t_final"] = integ->state().time;
  rep["steps"] = integ->steps();
  rep["energy_initial"] = energy0;
  rep["final"] = log_json(log.samples.back());
  rep["dissipation"] = integ->dissipation();
  rep["scheme_dissipation"] = integ->scheme_dissipation();
  rep["energy_equality_residual"] = energy_equality_residual(log, 0, log.size() - 1);
  if (!failure.empty()) {
    rep["error"] = failure;
    rep["failed_at"] = fail_time;
  }
  write_json(c.dir / "summary.json", rep);
  if (!failure.empty()) {
    c.out << "simulate: FAIL at t=" << fail_time << ": " << failure << '\n';
    return kExitFail;
  }
  if (!c.quiet)
    c.out << "simulate: t=" << integ->state().time << " energy=" << integ->energy()
          << " dissipation=" << integ->dissipation() << "  (" << (c.dir / "summary.json").string() << ")\n";
  return kExitPass;
}

int cmd_check(Context& c, const std::vector<std::string>& only) {
  const auto results = run_checks(c.cfg, only);
  bool pass = true;
  json rows = json::array();
  for (const auto& r : results) {
    pass = pass && r.passed;
    rows.push_back({{"name", r.name},
                    {"n_modes", r.n_modes},
                    {"passed", r.passed},
                    {"value", r.value},
                    {"threshold", r.threshold},
                    {"detail", r.detail}});
    if (!c.quiet) {
      c.out << std::left << std::setw(16) << r.name << std::setw(6) << (r.n_modes ? std::to_string(r.n_modes) : "-")
            << (r.passed ? "PASS  " : "FAIL  ") << std::setw(12) << r.value << "  " << r.detail << '\n';
    }
  }
  json rep = report_head("check", pass);
  rep["checks"] = rows;
  return finish(c, "check", rep, pass);
}

int cmd_converge(Context& c) {
  const auto& b = c.cfg.converge;
  const ConvergenceReport r = galerkin_convergence(build_initial(c.cfg), c.cfg.nl, build_source(c.cfg), c.cfg.scheme,
                                                   b.resolutions, b.n_ref, b.t_star, b.samples);
  const double ratio = r.gaps.back() / r.gaps.front();
  const bool pass = r.strictly_decreasing() && ratio <= b.max_gap_ratio &&
                    std::none_of(r.unstable.begin(), r.unstable.end(), [](bool u) { return u; });
  json rep = report_head("converge", pass);
  rep["resolutions"] = r.resolutions;
  rep["gaps"] = r.gaps;
  rep["unstable"] = r.unstable;
  rep["n_ref"] = r.n_ref;
  rep["t_star"] = r.t_star;
  rep["exponent"] = r.exponent;
  rep["c1_analog"] = r.c1_analog;
  rep["fit_r2"] = r.fit_r2;
  rep["gap_ratio"] = ratio;
  rep["strictly_decreasing"] = r.strictly_decreasing();
  return finish(c, "converge", rep, pass);
}

int cmd_decompose(Context& c) {
  const auto& b = c.cfg.decompose;
  DecompositionOptions opt;
  opt.fit_t0 = b.fit_t0;
  opt.fit_t1 = b.fit_t1.value_or(-1.0);
  opt.max_doublings = b.max_doublings;
  opt.min_r2 = b.min_r2;
  opt.sample_every = c.cfg.sample_every;
  const double big_l = b.big_l.value_or(default_big_l(c.cfg.nl));
  const DecompositionRun r =
      decomposition_probe(build_initial(c.cfg), c.cfg.nl, build_source(c.cfg), c.cfg.scheme, big_l, b.t_end, opt);
  const bool pass = r.sum_error_relative <= b.sum_tol && r.fitted_kappa > 0.0 && r.fit_r2 >= b.min_r2;
  json rep = report_head("decompose", pass);
  rep["big_l"] = r.big_l;
  rep["doublings"] = r.doublings;
  rep["sum_error"] = r.sum_error;
  rep["sum_error_relative"] = r.sum_error_relative;
  rep["fitted_kappa"] = r.fitted_kappa;
  rep["fit_r2"] = r.fit_r2;
  rep["times"] = r.times;
  rep["w_norm_trace"] = r.w_norm_trace;
  return finish(c, "decompose", rep, pass);
}

json equilibrium_json(const EquilibriumResult& e) {
  return {{"residual", e.residual},
          {"newton_iters", e.newton_iters},
          {"energy_at", e.energy_at},
          {"stability_indicator", e.stability_indicator},
          {"converged", e.converged},
          {"norm_V", norm_Hs(e.u_star, 0.5)},
          {"amplitude_11", e.u_star.at(1, 1)},
          {"residual_history", e.residual_history}};
}

int cmd_equilibrium(Context& c) {
  const auto& b = c.cfg.equilibrium;
  const ModalField seed = b.seed_field ? build_field(*b.seed_field, c.cfg.grid, "equilibrium.seed_field")
                                       : build_initial(c.cfg).u;
  const EquilibriumResult e = find_equilibrium(seed, c.cfg.nl, build_source(c.cfg), b.tol, b.max_iter);
  save_mfld(c.dir / "u_star.mfld", e.u_star, 0.0, "u");
  json rep = report_head("equilibrium", e.converged);
  rep.update(equilibrium_json(e));
  return finish(c, "equilibrium", rep, e.converged);
}

int cmd_lojasiewicz(Context& c) {
  const auto& b = c.cfg.lojasiewicz;
  const LojasiewiczReport r = lojasiewicz_probe(build_initial(c.cfg), c.cfg.nl, build_source(c.cfg), c.cfg.scheme,
                                                b.t_end, b.tol, b.eq_tol, b.eq_max_iter);
  const bool pass =
      r.reached_tol && r.equilibrium.converged && r.distance_v <= b.distance_tol && r.energy_gap >= -1e-10;
  save_mfld(c.dir / "u_final.mfld", r.u_final, r.t_end, "u");
  save_mfld(c.dir / "u_star.mfld", r.equilibrium.u_star, 0.0, "u");
  json rep = report_head("lojasiewicz", pass);
  rep["t_end"] = r.t_end;
  rep["ut_final"] = r.ut_final;
  rep["reached_tol"] = r.reached_tol;
  rep["distance_V"] = r.distance_v;
  rep["energy_gap"] = r.energy_gap;
  rep["equilibrium"] = equilibrium_json(r.equilibrium);
  return finish(c, "lojasiewicz", rep, pass);
}

int cmd_absorb(Context& c) {
  const auto& b = c.cfg.absorb;
  AbsorbingOptions opt;
  opt.band = b.band;
  opt.seed = c.cfg.seed + 11;
  opt.floor = b.floor;
  opt.rel_tol = b.rel_tol;
  opt.min_tail = b.min_tail;
  opt.sample_every = c.cfg.sample_every;
  const AbsorbingReport r =
      absorbing_probe(c.cfg.grid, b.radii, b.n_per_radius, c.cfg.nl, build_source(c.cfg), c.cfg.scheme, b.t_end, opt);
  json rows = json::array();
  for (const auto& e : r.entries)
    rows.push_back(
        {{"radius", e.radius}, {"tail_sup0", e.tail_sup0}, {"tail_sup2", e.tail_sup2}, {"settled", e.settled}});
  const bool pass = r.status != ProbeStatus::Fail;
  json rep = report_head("absorb", pass);
  rep["status"] = to_string(r.status);
  rep["entries"] = rows;
  rep["floor"] = r.floor;
  rep["rel_tol"] = r.rel_tol;
  rep["min_tail"] = r.min_tail;
  return finish(c, "absorb", rep, pass);
}

int cmd_lipschitz(Context& c) {
  const auto& b = c.cfg.lipschitz;
  const State init = build_initial(c.cfg);
  const SourceTerm g = build_source(c.cfg);
  const std::uint64_t seed = c.cfg.seed + 7;
  const LipschitzReport full =
      lipschitz_dependence(init, b.scale, c.cfg.nl, g, c.cfg.scheme, b.t_end, seed, c.cfg.sample_every);
  const LipschitzReport half =
      lipschitz_dependence(init, 0.5 * b.scale, c.cfg.nl, g, c.cfg.scheme, b.t_end, seed, c.cfg.sample_every);
  const double spread = std::abs(full.c7 - half.c7);
  const bool stable = spread <= b.c7_rel_tol * std::max(std::abs(full.c7), std::abs(half.c7)) + 1e-8;
  const bool pass = stable && !full.superexponential && !half.superexponential;
  auto one = [](const LipschitzReport& r) {
    return json{{"perturbation_scale", r.perturbation_scale},
                {"c6", r.c6},
                {"c7", r.c7},
                {"fit_r2", r.fit_r2},
                {"superexponential", r.superexponential},
                {"max_rho", r.max_rho},
                {"times", r.times},
                {"rho", r.rho}};
  };
  json rep = report_head("lipschitz", pass);
  rep["runs"] = json::array({one(full), one(half)});
  rep["c7_spread"] = spread;
  return finish(c, "lipschitz", rep, pass);
}

}  // namespace

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  if (std::find(command_names().begin(), command_names().end(), name) == command_names().end()) {
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
  }
  std::optional<RunConfig> cfg;
  try {
    cfg = effective_config(opt);
    if (name != "check" && !opt.only.empty()) throw ConfigError("--only", "only applies to 'check'");
    fs::create_directories(cfg->output_dir);
    write_json(fs::path(cfg->output_dir) / "config.json", to_json(*cfg));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Context c{*cfg, fs::path(cfg->output_dir), opt.quiet, out};
  try {
    if (name == "simulate") return cmd_simulate(c);
    if (name == "check") return cmd_check(c, opt.only);
    if (name == "converge") return cmd_converge(c);
    if (name == "decompose") return cmd_decompose(c);
    if (name == "equilibrium") return cmd_equilibrium(c);
    if (name == "lojasiewicz") return cmd_lojasiewicz(c);
    if (name == "absorb") return cmd_absorb(c);
    return cmd_lipschitz(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InstabilityError& e) {
    err << "error at t=" << e.time << ": " << e.what() << '\n';
    return kExitFail;
  } catch (const StepFailure& e) {
    err << "error at t=" << e.time << ": " << e.what() << '\n';
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace hch
