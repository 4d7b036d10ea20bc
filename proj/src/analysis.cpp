#include "hch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "hch/krylov.hpp"
#include "hch/nodal_kernels.hpp"
#include "hch/sine_transform.hpp"
#include "hch/spectral.hpp"

namespace hch {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.points = x.size();
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Galerkin convergence

bool ConvergenceReport::strictly_decreasing() const {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (unstable[i]) continue;
    if (!(gaps[i] < prev)) return false;
    prev = gaps[i];
  }
  return true;
}

namespace {

double max_band(const ModalField& z) {
  std::size_t band = 0;
  for (std::size_t j = 1; j <= z.n(); ++j)
    for (std::size_t k = 1; k <= z.n(); ++k)
      if (z.at(j, k) != 0.0) band = std::max({band, j, k});
  return static_cast<double>(band);
}

State resample_state(const State& s, const GridSpec& grid) {
  return {resample(s.u, grid), resample(s.v, grid), s.time};
}

}  // namespace

ConvergenceReport galerkin_convergence(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                       const SchemeConfig& cfg, const std::vector<std::size_t>& resolutions,
                                       std::size_t n_ref, double t_star, std::size_t samples) {
  if (resolutions.empty()) throw std::invalid_argument("galerkin_convergence: no resolutions");
  if (!std::is_sorted(resolutions.begin(), resolutions.end()) ||
      std::adjacent_find(resolutions.begin(), resolutions.end()) != resolutions.end())
    throw std::invalid_argument("galerkin_convergence: resolutions must be strictly increasing");
  if (2 * resolutions.back() > n_ref)
    throw std::invalid_argument("galerkin_convergence: n_ref must be >= 2 * max(resolutions)");
  if (max_band(initial.u) > static_cast<double>(resolutions.front()) ||
      max_band(initial.v) > static_cast<double>(resolutions.front()))
    throw std::invalid_argument("galerkin_convergence: initial data not band-limited within min(resolutions)");
  if (!(t_star > 0.0)) throw std::invalid_argument("galerkin_convergence: t_star must be > 0");

  const double side = initial.grid().side;
  const GridSpec ref_grid(n_ref, side);
  const std::uint64_t n_steps = step_count(initial.time, initial.time + t_star, cfg.dt);
  const std::uint64_t every = std::max<std::uint64_t>(1, n_steps / std::max<std::size_t>(1, samples));

  Integrator ref(Model(ref_grid, nl, SourceTerm(resample(g.g_modal, ref_grid))), cfg,
                 resample_state(initial, ref_grid));
  std::vector<std::unique_ptr<Integrator>> coarse;
  ConvergenceReport rep;
  rep.resolutions = resolutions;
  rep.n_ref = n_ref;
  rep.t_star = t_star;
  rep.gaps.assign(resolutions.size(), 0.0);
  rep.unstable.assign(resolutions.size(), false);
  for (std::size_t n : resolutions) {
    const GridSpec grid(n, side);
    coarse.push_back(std::make_unique<Integrator>(Model(grid, nl, SourceTerm(resample(g.g_modal, grid))), cfg,
                                                  resample_state(initial, grid)));
  }

  auto measure = [&] {
    for (std::size_t r = 0; r < coarse.size(); ++r) {
      if (rep.unstable[r]) continue;
      const State& c = coarse[r]->state();
      const ModalField du = resample(ref.state().u, c.grid()) - c.u;
      const ModalField dv = resample(ref.state().v, c.grid()) - c.v;
      rep.gaps[r] = std::max(rep.gaps[r], norm_pair(du, dv, -1.0));
    }
  };
  measure();
  for (std::uint64_t i = 1; i <= n_steps; ++i) {
    ref.step();
    for (std::size_t r = 0; r < coarse.size(); ++r) {
      if (rep.unstable[r]) continue;
      try {
        coarse[r]->step();
      } catch (const InstabilityError&) {
        rep.unstable[r] = true;
      } catch (const StepFailure&) {
        rep.unstable[r] = true;
      }
    }
    if (i % every == 0 || i == n_steps) measure();
  }

  std::vector<double> x, y;
  for (std::size_t r = 0; r < resolutions.size(); ++r) {
    if (rep.unstable[r] || !(rep.gaps[r] > 0.0)) continue;
    x.push_back(std::log(lambda_max(GridSpec(resolutions[r], side))));
    y.push_back(std::log(rep.gaps[r]));
  }
  if (x.size() >= 2) {
    const LineFit fit = fit_line(x, y);
    rep.exponent = -fit.slope;
    rep.fit_r2 = fit.r2;
    rep.c1_analog = (2.0 * fit.slope + 0.5) / t_star;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Compact / decaying splitting

double default_big_l(const Nonlinearity& nl) {
  const double lambda = nl.lambda_bound();
  return std::isfinite(lambda) ? std::max(10.0, 2.0 * lambda) : 10.0;
}

DecompositionRun decomposition_run(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                   const SchemeConfig& cfg, double big_l, double t_end,
                                   const DecompositionOptions& opt) {
  if (!(big_l > 0.0)) throw std::invalid_argument("decomposition_run: L must be > 0");
  cfg.validate();
  const GridSpec& grid = initial.grid();
  const Model model(grid, nl, g);
  const auto& lam = model.lambda();
  const std::size_t m = lam.size();
  const double dt = cfg.dt;
  const std::uint64_t n_steps = step_count(initial.time, t_end, dt);

  std::vector<double> k_u(m), k_l(m);
  for (std::size_t i = 0; i < m; ++i) {
    k_u[i] = lam[i] * lam[i];
    k_l[i] = lam[i] * lam[i] + big_l;
  }

  // u: full equation; v: forced by L u + g from zero data; w: from U0.
  ModalField u = initial.u, ut = initial.v;
  ModalField v(grid), vt(grid);
  ModalField w = initial.u, wt = initial.v;
  ModalField nu = model.nonlinear(u), nv = model.nonlinear(v);
  std::optional<ModalField> nu_prev, nv_prev;
  const ModalField& gm = g.g_modal;

  DecompositionRun run;
  run.big_l = big_l;
  auto record = [&](double t) {
    const ModalField su = v + w - u;
    const ModalField sv = vt + wt - ut;
    const double err = norm_pair(su, sv, 0.0);
    run.sum_error = std::max(run.sum_error, err);
    run.sum_error_relative = std::max(run.sum_error_relative, err / (1.0 + norm_pair(u, ut, 0.0)));
    run.times.push_back(t);
    run.w_norm_trace.push_back(norm_pair(w, wt, 0.0));
  };
  record(initial.time);

  ModalField fu(grid), fv(grid), fw(grid);
  for (std::uint64_t step = 1; step <= n_steps; ++step) {
    for (std::size_t i = 0; i < m; ++i) {
      const double nu_star = nu_prev ? 1.5 * nu[i] - 0.5 * (*nu_prev)[i] : nu[i];
      const double nv_star = nv_prev ? 1.5 * nv[i] - 0.5 * (*nv_prev)[i] : nv[i];
      fu[i] = gm[i] - lam[i] * nu_star;
      fv[i] = gm[i] - lam[i] * nv_star;
      fw[i] = -lam[i] * (nu_star - nv_star);
    }
    const ModalField u_old = u;
    detail::cn_advance(k_u, dt, fu, u, ut);
    for (std::size_t i = 0; i < m; ++i) fv[i] += 0.5 * big_l * (u_old[i] + u[i]);
    detail::cn_advance(k_l, dt, fv, v, vt);
    detail::cn_advance(k_l, dt, fw, w, wt);

    nu_prev = std::move(nu);
    nv_prev = std::move(nv);
    nu = model.nonlinear(u);
    nv = model.nonlinear(v);
    if (!u.is_finite() || !v.is_finite() || !w.is_finite())
      throw InstabilityError("decomposition_run: non-finite state", initial.time + static_cast<double>(step) * dt);
    if (step % opt.sample_every == 0 || step == n_steps)
      record(initial.time + static_cast<double>(step) * dt);
  }

  const double t1 = opt.fit_t1 < 0.0 ? t_end : opt.fit_t1;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    if (run.times[i] < opt.fit_t0 - 1e-12 || run.times[i] > t1 + 1e-12) continue;
    if (!(run.w_norm_trace[i] > 0.0)) continue;
    x.push_back(run.times[i]);
    y.push_back(std::log(run.w_norm_trace[i]));
  }
  if (x.size() >= 2) {
    const LineFit fit = fit_line(x, y);
    run.fitted_kappa = -fit.slope;
    run.fit_r2 = fit.r2;
  }
  return run;
}

DecompositionRun decomposition_probe(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                     const SchemeConfig& cfg, double big_l, double t_end,
                                     const DecompositionOptions& opt) {
  double l = big_l;
  for (int d = 0;; ++d) {
    DecompositionRun run = decomposition_run(initial, nl, g, cfg, l, t_end, opt);
    run.doublings = d;
    if ((run.fitted_kappa > 0.0 && run.fit_r2 >= opt.min_r2) || d >= opt.max_doublings) return run;
    l *= 2.0;
  }
}

// ---------------------------------------------------------------------------
// Continuous dependence

LipschitzReport lipschitz_dependence(const State& initial, double perturbation_scale, const Nonlinearity& nl,
                                     const SourceTerm& g, const SchemeConfig& cfg, double t_end,
                                     std::uint64_t seed, std::size_t sample_every) {
  if (!(perturbation_scale > 0.0))
    throw std::invalid_argument("lipschitz_dependence: perturbation_scale must be > 0");
  const GridSpec& grid = initial.grid();
  const std::size_t band = std::min<std::size_t>(grid.n_modes, 4);
  // Direction with ||(du, dv)||_0 = scale, split evenly between u and u_t.
  ModalField du = random_band_limited(grid, band, 1.0, seed);
  ModalField dv = random_band_limited(grid, band, 1.0, seed + 1);
  dv = apply_power(dv, 1.0);  // ||A^{-1/2} dv|| = ||A^{1/2} dv_orig||
  const double n0 = norm_pair(du, dv, 0.0);
  du *= perturbation_scale / n0;
  dv *= perturbation_scale / n0;

  State perturbed(initial.u + du, initial.v + dv, initial.time);
  const Model model(grid, nl, g);
  Integrator a(model, cfg, initial);
  Integrator b(model, cfg, perturbed);
  const double d0 = norm_pair(b.state().u - a.state().u, b.state().v - a.state().v, 0.0);

  LipschitzReport rep;
  rep.perturbation_scale = perturbation_scale;
  auto record = [&] {
    const double d = norm_pair(b.state().u - a.state().u, b.state().v - a.state().v, 0.0);
    rep.times.push_back(a.state().time);
    rep.rho.push_back(d / d0);
  };
  record();
  const std::uint64_t n_steps = step_count(initial.time, t_end, cfg.dt);
  for (std::uint64_t i = 1; i <= n_steps; ++i) {
    a.step();
    b.step();
    if (i % sample_every == 0 || i == n_steps) record();
  }
  rep.max_rho = *std::max_element(rep.rho.begin(), rep.rho.end());

  const double t_mid = initial.time + 0.5 * (t_end - initial.time);
  auto fit_range = [&](double lo, double hi) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      if (rep.times[i] >= lo - 1e-12 && rep.times[i] <= hi + 1e-12 && rep.rho[i] > 0.0) {
        x.push_back(rep.times[i]);
        y.push_back(std::log(rep.rho[i]));
      }
    return x.size() >= 2 ? fit_line(x, y) : LineFit{};
  };
  const LineFit late = fit_range(t_mid, t_end);
  rep.c7 = late.slope;
  rep.fit_r2 = late.r2;
  // Smallest c6 with rho(t) <= c6 exp(c7 t) at every sample.
  double log_c6 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.rho[i] > 0.0) log_c6 = std::max(log_c6, std::log(rep.rho[i]) - rep.c7 * rep.times[i]);
  rep.c6 = std::exp(log_c6);

  // Growth faster than the exponential rate seen on the first half.
  const LineFit early = fit_range(initial.time, t_mid);
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.times[i] > t_mid && rep.rho[i] > 0.0 &&
        std::log(rep.rho[i]) > early.intercept + early.slope * rep.times[i] + std::log(10.0))
      rep.superexponential = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Brezis-Gallouet

BGRecord bg_ratio(const ModalField& z, const std::string& label) {
  constexpr double eps0 = 1e-300;
  BGRecord r;
  r.label = label;
  const NodalField zn = synthesize(z, transform::fine_points(z.n()));
  r.sup = kernels::max_abs(zn.values());
  r.norm_v = norm_Hs(z, 0.5);
  r.norm_da = norm_Hs(z, 1.0);
  const double denom = r.norm_v * (1.0 + std::sqrt(std::log1p(r.norm_da / std::max(r.norm_v, eps0))));
  r.ratio = denom > 0.0 ? r.sup / denom : 0.0;
  return r;
}

BGReport brezis_gallouet_scan(const GridSpec& grid, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("brezis_gallouet_scan: n_samples must be >= 1");
  BGReport rep;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t band = 1 + (s * 7919 + seed) % grid.n_modes;
    rep.records.push_back(bg_ratio(random_band_limited(grid, band, 1.0, seed + s), "random_band_" + std::to_string(band)));
  }
  ModalField flat(grid);
  const auto lam = eigenvalues(grid);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 1.0 / lam[i];
  rep.records.push_back(bg_ratio(flat, "flat_spectrum"));
  rep.adversarial_ratio = rep.records.back().ratio;
  for (const auto& r : rep.records) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  return rep;
}

// ---------------------------------------------------------------------------
// Equilibria

double stability_indicator(const ModalField& u_star, const Nonlinearity& nl) {
  const GridSpec& grid = u_star.grid();
  const Model model(grid, nl, SourceTerm::zero(grid));
  const auto& lam = model.lambda();
  const NodalField un = model.nodal(u_star);
  // K = A^{-1/2} (A + P f') A^{-1/2} = I + A^{-1/2} P f' A^{-1/2} has the inertia of A + P f'.
  krylov::Operator op = [&](const ModalField& z) {
    ModalField w(z);
    for (std::size_t i = 0; i < lam.size(); ++i) w[i] /= std::sqrt(lam[i]);
    ModalField out = nl.is_zero() ? ModalField(grid) : model.linearized(un, w);
    for (std::size_t i = 0; i < lam.size(); ++i) out[i] = out[i] / std::sqrt(lam[i]) + z[i];
    return out;
  };
  const auto est = krylov::lanczos_smallest(op, grid, 80);
  ModalField w(est.vector);
  for (std::size_t i = 0; i < lam.size(); ++i) w[i] /= std::sqrt(lam[i]);
  ModalField jw = nl.is_zero() ? ModalField(grid) : model.linearized(un, w);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    num += w[i] * (lam[i] * w[i] + jw[i]);
    den += w[i] * w[i];
  }
  return num / den;
}

EquilibriumResult find_equilibrium(const ModalField& seed, const Nonlinearity& nl, const SourceTerm& g, double tol,
                                   int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_equilibrium: tol must be > 0");
  const GridSpec& grid = seed.grid();
  const Model model(grid, nl, g);
  const auto& lam = model.lambda();
  const auto& gm = g.g_modal;
  const std::size_t m = lam.size();

  auto residual = [&](const ModalField& u, double* merit) {
    double pot = 0.0;
    const ModalField pf = model.nonlinear(u, &pot);
    ModalField r(grid);
    double quad = 0.0, forcing = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = lam[i] * u[i] + pf[i] - gm[i] / lam[i];
      quad += lam[i] * u[i] * u[i];
      forcing += gm[i] * u[i] / lam[i];
    }
    if (merit != nullptr) *merit = 0.5 * quad + pot - forcing;
    return r;
  };
  auto l2 = [](const ModalField& z) { return std::sqrt(pairing(z, z)); };

  EquilibriumResult res;
  ModalField u = seed;
  double merit = 0.0;
  ModalField r = residual(u, &merit);
  double rn = l2(r);
  res.residual_history.push_back(rn);
  const double lambda_f = std::isfinite(nl.lambda_bound()) ? nl.lambda_bound() : 1.0;

  int it = 0;
  while (rn > tol && it < max_iter) {
    const NodalField un = model.nodal(u);
    double mu = 0.0;
    krylov::CgResult cg;
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<double> inv_diag(m);
      for (std::size_t i = 0; i < m; ++i) inv_diag[i] = 1.0 / ((1.0 + mu) * lam[i]);
      krylov::Operator jac = [&](const ModalField& w) {
        ModalField out = nl.is_zero() ? ModalField(grid) : model.linearized(un, w);
        for (std::size_t i = 0; i < m; ++i) out[i] += (1.0 + mu) * lam[i] * w[i];
        return out;
      };
      const double inner_tol = std::max(1e-14, std::min(1e-2, rn));
      cg = krylov::pcg(jac, inv_diag, -r, inner_tol, 1000);
      if (!cg.negative_curvature) break;
      mu = mu == 0.0 ? std::max(1.0, 2.0 * lambda_f / lam[0]) : 4.0 * mu;
    }
    const ModalField& d = cg.x;
    const double slope = pairing(r, d);

    // Near a root energy differences are at round-off level, so plain
    // residual reduction is accepted for unshifted Newton steps there.
    const bool near_root = rn <= 1e-6 * (1.0 + norm_Hs(u, 1.0));
    double alpha = 1.0;
    ModalField trial(grid);
    double trial_merit = 0.0;
    ModalField trial_r(grid);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = u;
      for (std::size_t i = 0; i < m; ++i) trial[i] += alpha * d[i];
      trial_r = residual(trial, &trial_merit);
      const bool armijo = trial_merit <= merit + 1e-4 * alpha * slope;
      const bool reduces = mu == 0.0 && near_root && l2(trial_r) < rn;
      if (armijo || reduces) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    u = std::move(trial);
    r = std::move(trial_r);
    merit = trial_merit;
    rn = l2(r);
    res.residual_history.push_back(rn);
    ++it;
  }
  res.u_star = u;
  res.residual = rn;
  res.newton_iters = it;
  res.converged = rn <= tol;
  res.energy_at = model.energy(State(u, ModalField(grid))).total;
  res.stability_indicator = stability_indicator(u, nl);
  return res;
}

LojasiewiczReport lojasiewicz_probe(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                    const SchemeConfig& cfg, double t_end, double tol, double eq_tol,
                                    int eq_max_iter) {
  const GridSpec& grid = initial.grid();
  Integrator integ(Model(grid, nl, g), cfg, initial);
  const std::uint64_t n = step_count(initial.time, t_end, cfg.dt);
  for (std::uint64_t i = 0; i < n; ++i) integ.step();

  LojasiewiczReport rep;
  rep.t_end = t_end;
  rep.u_final = integ.state().u;
  rep.ut_final = norm_Hs(integ.state().v, -0.5);
  rep.reached_tol = rep.ut_final <= tol;
  rep.equilibrium = find_equilibrium(rep.u_final, nl, g, eq_tol, eq_max_iter);
  rep.distance_v = norm_Hs(rep.u_final - rep.equilibrium.u_star, 0.5);
  rep.energy_gap = integ.energy() - rep.equilibrium.energy_at;
  return rep;
}

// ---------------------------------------------------------------------------
// Absorbing set

std::string to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Pass:
      return "pass";
    case ProbeStatus::Fail:
      return "fail";
    case ProbeStatus::Inconclusive:
      break;
  }
  return "inconclusive";
}

AbsorbingReport absorbing_probe(const GridSpec& grid, const std::vector<double>& radii, std::size_t n_per_radius,
                                const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg, double t_end,
                                const AbsorbingOptions& opt) {
  if (radii.empty()) throw std::invalid_argument("absorbing_probe: no radii");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("absorbing_probe: radii must be positive");
  if (n_per_radius < 1) throw std::invalid_argument("absorbing_probe: n_per_radius must be >= 1");
  AbsorbingReport rep;
  rep.floor = opt.floor;
  rep.rel_tol = opt.rel_tol;
  rep.min_tail = opt.min_tail;
  const Model model(grid, nl, g);
  const std::size_t band = std::min(opt.band, grid.n_modes);
  const std::uint64_t n_steps = step_count(0.0, t_end, cfg.dt);

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    AbsorbingEntry e;
    e.radius = radii[ri];
    double q3 = 0.0, q4 = 0.0;  // tail sups over [T/2, 3T/4] and (3T/4, T]
    for (std::size_t k = 0; k < n_per_radius; ++k) {
      const std::uint64_t s = opt.seed + 1000 * ri + 2 * k;
      ModalField u = random_band_limited(grid, band, 1.0, s);
      ModalField v = random_band_limited(grid, band, 1.0, s + 1);
      const double n2 = norm_pair(u, v, 2.0);
      u *= e.radius / n2;
      v *= e.radius / n2;
      Integrator integ(model, cfg, State(u, v, 0.0));
      for (std::uint64_t i = 1; i <= n_steps; ++i) {
        integ.step();
        const double t = integ.state().time;
        if (t < 0.5 * t_end - 1e-12 || (i % opt.sample_every != 0 && i != n_steps)) continue;
        const double s0 = norm_pair(integ.state().u, integ.state().v, 0.0);
        e.tail_sup0 = std::max(e.tail_sup0, s0);
        e.tail_sup2 = std::max(e.tail_sup2, norm_pair(integ.state().u, integ.state().v, 2.0));
        if (t <= 0.75 * t_end) q3 = std::max(q3, s0);
        else q4 = std::max(q4, s0);
      }
    }
    e.settled = 0.5 * t_end >= opt.min_tail && (e.tail_sup0 <= opt.floor || std::abs(q3 - q4) <= opt.rel_tol * std::max(q3, q4));
    rep.entries.push_back(e);
  }

  bool settled = true, agree = true;
  for (const auto& a : rep.entries) {
    settled = settled && a.settled;
    for (const auto& b : rep.entries) {
      const double hi = std::max(a.tail_sup0, b.tail_sup0);
      if (hi > opt.floor && std::abs(a.tail_sup0 - b.tail_sup0) > opt.rel_tol * hi) agree = false;
    }
  }
  rep.status = !settled ? ProbeStatus::Inconclusive : (agree ? ProbeStatus::Pass : ProbeStatus::Fail);
  return rep;
}

}  // namespace hch
