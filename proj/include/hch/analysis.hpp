// Numerical experiments on the long-time structure of the flow: Galerkin
// convergence, the compact/decaying splitting, continuous dependence,
// the Brezis-Gallouet ratio, equilibria and absorbing-set probes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hch/integrator.hpp"

namespace hch {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit y ~ slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------

struct ConvergenceReport {
  std::vector<std::size_t> resolutions;
  std::vector<double> gaps;  // sup over sampled t in [0, t*] of ||P_N U_ref - U_N||_{-1}
  std::vector<bool> unstable;
  std::size_t n_ref = 0;
  double t_star = 0.25;
  double exponent = 0.0;   // q in gap ~ lambda_N^{-q}
  double c1_analog = 0.0;  // C1 in gap^2 <= C2 t lambda_N^{C1 t - 1/2}
  double fit_r2 = 0.0;

  bool strictly_decreasing() const;
};

ConvergenceReport galerkin_convergence(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                       const SchemeConfig& cfg, const std::vector<std::size_t>& resolutions,
                                       std::size_t n_ref, double t_star, std::size_t samples = 25);

// ---------------------------------------------------------------------------

struct DecompositionRun {
  double big_l = 0.0;
  double sum_error = 0.0;           // max_t ||(v + w) - u||_0 (pair norm)
  double sum_error_relative = 0.0;  // max_t ||(v + w) - u||_0 / (1 + ||U||_0)
  std::vector<double> times;
  std::vector<double> w_norm_trace;  // ||W(t)||_0
  double fitted_kappa = 0.0;
  double fit_r2 = 0.0;
  int doublings = 0;
};

struct DecompositionOptions {
  double fit_t0 = 1.0;
  double fit_t1 = -1.0;  // < 0: end of run
  int max_doublings = 3;
  double min_r2 = 0.9;
  std::size_t sample_every = 10;
};

/// Default L = max(10, 2 lambda).
double default_big_l(const Nonlinearity& nl);

/// Single run at fixed L.
DecompositionRun decomposition_run(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                   const SchemeConfig& cfg, double big_l, double t_end,
                                   const DecompositionOptions& opt = {});

/// Run at L, doubling L (at most opt.max_doublings times) while the fitted
/// decay rate is not positive or the fit quality is below opt.min_r2.
DecompositionRun decomposition_probe(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                     const SchemeConfig& cfg, double big_l, double t_end,
                                     const DecompositionOptions& opt = {});

// ---------------------------------------------------------------------------

struct LipschitzReport {
  double perturbation_scale = 0.0;
  std::vector<double> times;
  std::vector<double> rho;  // ||dU(t)||_0 / ||dU(0)||_0
  double c6 = 0.0;
  double c7 = 0.0;
  double fit_r2 = 0.0;
  bool superexponential = false;
  double max_rho = 0.0;
};

LipschitzReport lipschitz_dependence(const State& initial, double perturbation_scale, const Nonlinearity& nl,
                                     const SourceTerm& g, const SchemeConfig& cfg, double t_end,
                                     std::uint64_t seed = 7, std::size_t sample_every = 10);

// ---------------------------------------------------------------------------

struct BGRecord {
  std::string label;
  double sup = 0.0;
  double norm_v = 0.0;
  double norm_da = 0.0;
  double ratio = 0.0;
};

struct BGReport {
  std::vector<BGRecord> records;
  double max_ratio = 0.0;
  double adversarial_ratio = 0.0;
};

/// ||z||_inf / (||z||_V (1 + log^{1/2}(1 + ||z||_{D(A)} / max(||z||_V, eps0)))), sup sampled on the fine grid.
BGRecord bg_ratio(const ModalField& z, const std::string& label = "");

BGReport brezis_gallouet_scan(const GridSpec& grid, std::size_t n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct EquilibriumResult {
  ModalField u_star;
  double residual = 0.0;  // ||A u + P_N f(u) - A^{-1} g||
  int newton_iters = 0;
  double energy_at = 0.0;  // E(u*, 0)
  double stability_indicator = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Newton on R(u) = A u + P_N f(u) - A^{-1} g with matrix-free Jacobian
/// A + P_N f'(u), inner PCG preconditioned by A^{-1}; when negative
/// curvature is met the Jacobian is shifted by mu A and steps are
/// globalized by backtracking on E(u, 0).
EquilibriumResult find_equilibrium(const ModalField& seed, const Nonlinearity& nl, const SourceTerm& g, double tol,
                                   int max_iter);

/// Smallest Rayleigh quotient of A + P_N f'(u*) (via Lanczos on the A^{-1/2}-congruent operator).
double stability_indicator(const ModalField& u_star, const Nonlinearity& nl);

// ---------------------------------------------------------------------------

struct LojasiewiczReport {
  double t_end = 0.0;
  double ut_final = 0.0;  // ||u_t(t_end)||_{V'}
  bool reached_tol = false;
  double distance_v = 0.0;  // ||u(t_end) - u*||_V
  double energy_gap = 0.0;  // E(t_end) - E(u*, 0)
  EquilibriumResult equilibrium;
  ModalField u_final;
};

LojasiewiczReport lojasiewicz_probe(const State& initial, const Nonlinearity& nl, const SourceTerm& g,
                                    const SchemeConfig& cfg, double t_end, double tol, double eq_tol = 1e-11,
                                    int eq_max_iter = 50);

// ---------------------------------------------------------------------------

enum class ProbeStatus { Pass, Fail, Inconclusive };
std::string to_string(ProbeStatus s);

struct AbsorbingEntry {
  double radius = 0.0;
  double tail_sup0 = 0.0;
  double tail_sup2 = 0.0;
  bool settled = true;
};

struct AbsorbingReport {
  std::vector<AbsorbingEntry> entries;
  double floor = 1e-3;
  double rel_tol = 0.1;
  double min_tail = 10.0;
  ProbeStatus status = ProbeStatus::Inconclusive;
};

struct AbsorbingOptions {
  std::size_t band = 4;
  std::uint64_t seed = 11;
  double floor = 1e-3;     // tail sups below this count as equal
  double rel_tol = 0.1;    // tail sups must agree within this relative tolerance
  double min_tail = 10.0;  // shorter tail windows are inconclusive (linear damping time is 2)
  std::size_t sample_every = 10;
};

/// Random initial states with ||U0||_2 = r for each radius; tail window [t_end/2, t_end].
AbsorbingReport absorbing_probe(const GridSpec& grid, const std::vector<double>& radii, std::size_t n_per_radius,
                                const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg, double t_end,
                                const AbsorbingOptions& opt = {});

}  // namespace hch
