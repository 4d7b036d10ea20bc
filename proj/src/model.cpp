#include "hch/model.hpp"

#include <cmath>
#include <limits>

#include "hch/nodal_kernels.hpp"
#include "hch/sine_transform.hpp"
#include "hch/spectral.hpp"

namespace hch {

double SourceTerm::dual_norm() const { return norm_Hs(g_modal, -0.5); }

Model::Model(const GridSpec& grid, Nonlinearity nl, SourceTerm g)
    : grid_(grid),
      nl_(nl),
      g_(std::move(g)),
      lam_(eigenvalues(grid)),
      points_(transform::dealias_points(grid.n_modes)) {
  if (!(g_.g_modal.grid() == grid_)) throw DimensionError("Model: source term grid mismatch");
}

NodalField Model::nodal(const ModalField& z) const { return synthesize(z, points_); }

ModalField Model::nonlinear(const ModalField& u, double* potential) const {
  u.require_same_grid(g_.g_modal);
  if (nl_.is_zero()) {
    if (potential != nullptr) *potential = 0.0;
    return ModalField(grid_);
  }
  NodalField un = nodal(u);
  NodalField fn(grid_, points_);
  const double sum_f = kernels::apply_f(nl_, un.values(), fn.values(), points_);
  if (potential != nullptr) {
    const double h = un.spacing();
    *potential = h * h * sum_f;
  }
  return analyze(fn);
}

double Model::potential(const ModalField& u) const {
  if (nl_.is_zero()) return 0.0;
  NodalField un = nodal(u);
  const double h = un.spacing();
  return h * h * kernels::sum_potential(nl_, un.values(), points_);
}

ModalField Model::linearized(const NodalField& u_nodal, const ModalField& w) const {
  NodalField wn = nodal(w);
  NodalField out(grid_, points_);
  kernels::apply_df(nl_, u_nodal.values(), wn.values(), out.values());
  return analyze(out);
}

EnergyBreakdown Model::energy(const State& s) const { return energy(s, potential(s.u)); }

EnergyBreakdown Model::energy(const State& s, double potential) const {
  EnergyBreakdown e;
  double quad = 0.0, forcing = 0.0;
  const auto& g = g_.g_modal;
  for (std::size_t i = 0; i < lam_.size(); ++i) {
    quad += lam_[i] * s.u[i] * s.u[i] + s.v[i] * s.v[i] / lam_[i];
    forcing += g[i] * s.u[i] / lam_[i];
  }
  e.quad = 0.5 * quad;
  e.potential = potential;
  e.forcing = forcing;
  e.total = e.quad + e.potential - e.forcing;
  return e;
}

ModalField Model::acceleration(const State& s) const { return acceleration(s, nonlinear(s.u)); }

ModalField Model::acceleration(const State& s, const ModalField& pf) const {
  ModalField a(grid_);
  const auto& g = g_.g_modal;
  for (std::size_t i = 0; i < lam_.size(); ++i)
    a[i] = g[i] - s.v[i] - lam_[i] * lam_[i] * s.u[i] - lam_[i] * pf[i];
  return a;
}

double Model::residual(const State& s, const ModalField& u_tt) const {
  const ModalField pf = nonlinear(s.u);
  const auto& g = g_.g_modal;
  double total = 0.0;
  for (std::size_t i = 0; i < lam_.size(); ++i) {
    const double r = u_tt[i] + s.v[i] + lam_[i] * lam_[i] * s.u[i] + lam_[i] * pf[i] - g[i];
    total += r * r / lam_[i];
  }
  return std::sqrt(total);
}

double Model::calF(const State& s, const DiagnosticParams& p) const {
  const ModalField vt = acceleration(s);
  const ModalField& v = s.v;
  double norm_v_sq = 0.0, cross = 0.0, vprime_sq = 0.0;
  for (std::size_t i = 0; i < lam_.size(); ++i) {
    norm_v_sq += lam_[i] * v[i] * v[i] + vt[i] * vt[i] / lam_[i];
    cross += vt[i] * v[i] / lam_[i];
    vprime_sq += v[i] * v[i] / lam_[i];
  }
  double df_term = 0.0;
  if (!nl_.is_zero()) {
    const NodalField un = nodal(s.u);
    const NodalField vn = nodal(v);
    const double h = un.spacing();
    df_term = h * h * kernels::sum_df_ab(nl_, un.values(), vn.values(), vn.values(), points_);
  }
  return 0.5 * norm_v_sq + p.beta * cross + 0.5 * p.beta * vprime_sq + 0.5 * df_term + p.big_l * vprime_sq;
}

HigherFunctionals Model::higher(const State& s) const {
  const ModalField& u = s.u;
  const ModalField& ut = s.v;
  const auto& g = g_.g_modal;
  double u2_sq = 0.0, g_au = 0.0, ut_au = 0.0, grad_sq = 0.0;
  for (std::size_t i = 0; i < lam_.size(); ++i) {
    const double l = lam_[i];
    u2_sq += l * l * l * u[i] * u[i] + l * ut[i] * ut[i];
    g_au += l * g[i] * u[i];
    ut_au += l * ut[i] * u[i];
    grad_sq += l * u[i] * u[i];
  }

  double df_lap = 0.0, h0 = 0.0;
  if (!nl_.is_zero()) {
    ModalField au(u), aut(ut);
    for (std::size_t i = 0; i < lam_.size(); ++i) {
      au[i] *= lam_[i];
      aut[i] *= lam_[i];
    }
    const NodalField un = nodal(u);
    const NodalField utn = nodal(ut);
    NodalField lap = nodal(au);
    for (double& x : lap.values()) x = -x;
    const NodalField autn = nodal(aut);
    const NodalField ux = synthesize(u, points_, Derivative::X);
    const NodalField uy = synthesize(u, points_, Derivative::Y);
    const double w = un.spacing() * un.spacing();
    const std::size_t c = points_;
    auto U = un.values();
    df_lap = w * kernels::sum_df_ab(nl_, U, lap.values(), lap.values(), c);
    const double t1 = kernels::sum_d2f_abc(nl_, U, utn.values(), lap.values(), lap.values(), c);
    const double t2 = kernels::sum_d2f_abc(nl_, U, autn.values(), ux.values(), ux.values(), c) +
                      kernels::sum_d2f_abc(nl_, U, autn.values(), uy.values(), uy.values(), c);
    const double t3 = kernels::sum_d2f_abc(nl_, U, lap.values(), ux.values(), ux.values(), c) +
                      kernels::sum_d2f_abc(nl_, U, lap.values(), uy.values(), uy.values(), c);
    h0 = w * (0.5 * t1 + t2 - 0.5 * t3);
  }

  HigherFunctionals out;
  out.g0 = 0.5 * u2_sq - g_au + 0.5 * df_lap;
  out.g = out.g0 + 0.5 * ut_au + 0.25 * grad_sq;
  out.h = h0 - 0.5 * g_au + 0.5 * ut_au + 0.25 * grad_sq;
  return out;
}

ModalField f_eval_dealiased(const ModalField& u, const Nonlinearity& nl) {
  return Model(u.grid(), nl, SourceTerm::zero(u.grid())).nonlinear(u);
}

double potential_integral(const ModalField& u, const Nonlinearity& nl) {
  return Model(u.grid(), nl, SourceTerm::zero(u.grid())).potential(u);
}

EnergyBreakdown energy(const State& s, const Nonlinearity& nl, const SourceTerm& g) {
  return Model(s.grid(), nl, g).energy(s);
}

ModalField acceleration_from_state(const State& s, const Nonlinearity& nl, const SourceTerm& g) {
  return Model(s.grid(), nl, g).acceleration(s);
}

double pde_residual(const State& s, const ModalField& u_tt, const Nonlinearity& nl, const SourceTerm& g) {
  return Model(s.grid(), nl, g).residual(s, u_tt);
}

double diagnostic_F(const State& s, const Nonlinearity& nl, const SourceTerm& g, const DiagnosticParams& p) {
  return Model(s.grid(), nl, g).calF(s, p);
}

HigherFunctionals higher_functionals(const State& s, const Nonlinearity& nl, const SourceTerm& g) {
  return Model(s.grid(), nl, g).higher(s);
}

DiagnosticParams coercivity_params(const Nonlinearity& nl, const GridSpec& grid) {
  const double lambda1 = eigenvalue(grid, 1, 1);
  const double lambda = nl.lambda_bound();
  DiagnosticParams p;
  p.beta = std::min(0.5, 0.5 * lambda1);
  p.big_l = std::isfinite(lambda) ? std::max({1.0, lambda, 0.5 * lambda * lambda}) : 1.0;
  p.sigma = 0.125;
  return p;
}

AssumptionReport check_assumptions(const Nonlinearity& nl, const GridSpec& grid) {
  if (!(nl.a3() > 0.0)) throw UnsupportedNonlinearity("check_assumptions: a3 must be > 0");
  AssumptionReport r;
  r.lambda = nl.lambda_bound();
  r.m_bound = nl.m_bound();
  r.r0 = nl.r0();
  r.lambda1 = eigenvalue(grid, 1, 1);
  // f(r)/r -> +infinity for a3 > 0.
  r.relaxed_condition = true;

  constexpr std::size_t samples = 1'000'000;
  constexpr double range = 1e3;
  double min_df = std::numeric_limits<double>::infinity();
  bool f1 = std::isfinite(r.r0), f3 = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -range + 2.0 * range * static_cast<double>(i) / static_cast<double>(samples - 1);
    min_df = std::min(min_df, nl.df(x));
    const double scale = 1.0 + x * x * x * x;
    if (std::abs(x) >= r.r0 && nl.f(x) * x < -1e-12 * scale) f1 = false;
    if (std::abs(nl.d2f(x)) > r.m_bound * (1.0 + std::abs(x)) * (1.0 + 1e-12)) f3 = false;
  }
  r.min_df_sampled = min_df;
  r.f1_holds = f1 && nl.f(0.0) == 0.0;
  r.f2_holds = min_df >= -r.lambda - 1e-6;
  r.f3_holds = f3;
  return r;
}

}  // namespace hch
