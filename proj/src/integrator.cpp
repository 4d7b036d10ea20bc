#include "hch/integrator.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hch/krylov.hpp"
#include "hch/spectral.hpp"

namespace hch {

std::string to_string(Scheme s) { return s == Scheme::ImexCnAb2 ? "imex_cn_ab2" : "implicit_newton"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "imex_cn_ab2") return Scheme::ImexCnAb2;
  if (s == "implicit_newton") return Scheme::ImplicitNewton;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected imex_cn_ab2 or implicit_newton)");
}

void SchemeConfig::validate() const {
  if (!std::isfinite(dt) || dt == 0.0) throw std::invalid_argument("scheme.dt must be nonzero and finite");
  if (dt < 0.0 && scheme != Scheme::ImplicitNewton)
    throw std::invalid_argument("scheme.dt < 0 (backward in time) is only available with implicit_newton");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("scheme.newton_tol must be > 0");
  if (newton_max_iter < 1) throw std::invalid_argument("scheme.newton_max_iter must be >= 1");
  if (!(safeguard_tol > 0.0)) throw std::invalid_argument("scheme.safeguard_tol must be > 0");
}

void TrajectoryLog::write_csv(std::ostream& os) const {
  os << csv_header << '\n';
  os << std::setprecision(17);
  for (const auto& s : samples)
    os << s.t << ',' << s.norm0 << ',' << s.norm2 << ',' << s.ut_vprime << ',' << s.energy << ',' << s.calF << ','
       << s.calG << ',' << s.calH << ',' << s.dissip_cum << '\n';
}

void TrajectoryLog::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_csv(os);
}

namespace detail {

void cn_advance(const std::vector<double>& stiffness, double dt, const ModalField& forcing, ModalField& y,
                ModalField& yt) {
  // y1 = y0 + a (v1 + v0),  v1 - v0 = -a (v1 + v0) - a k (y1 + y0) + dt F,  a = dt/2.
  const double a = 0.5 * dt;
  for (std::size_t i = 0; i < stiffness.size(); ++i) {
    const double k = stiffness[i];
    const double y0 = y[i];
    const double v0 = yt[i];
    const double v1 = (v0 * (1.0 - a - a * a * k) - 2.0 * a * k * y0 + dt * forcing[i]) / (1.0 + a + a * a * k);
    y[i] = y0 + a * (v1 + v0);
    yt[i] = v1;
  }
}

}  // namespace detail

Integrator::Integrator(Model model, SchemeConfig cfg, State initial)
    : model_(std::move(model)), cfg_(cfg), state_(std::move(initial)), origin_(state_.time) {
  cfg_.validate();
  if (!(state_.grid() == model_.grid())) throw DimensionError("Integrator: state grid does not match model");
  stiffness_.resize(model_.lambda().size());
  for (std::size_t i = 0; i < stiffness_.size(); ++i) stiffness_[i] = model_.lambda()[i] * model_.lambda()[i];
  refresh_nonlinear();
}

void Integrator::refresh_nonlinear() {
  double pot = 0.0;
  nonlinear_ = model_.nonlinear(state_.u, &pot);
  energy_ = model_.energy(state_, pot);
}

void Integrator::restore(const State& s, double origin, std::uint64_t steps, std::optional<ModalField> history,
                         double dissipation, double scheme_dissipation) {
  if (!(s.grid() == model_.grid())) throw DimensionError("restore: grid mismatch");
  state_ = s;
  origin_ = origin;
  steps_ = steps;
  prev_nonlinear_ = std::move(history);
  dissipation_ = dissipation;
  scheme_dissipation_ = scheme_dissipation;
  refresh_nonlinear();
}

State Integrator::step_imex() {
  const auto& lam = model_.lambda();
  const auto& g = model_.source().g_modal;
  ModalField forcing(model_.grid());
  if (prev_nonlinear_) {
    const ModalField& prev = *prev_nonlinear_;
    for (std::size_t i = 0; i < lam.size(); ++i)
      forcing[i] = g[i] - lam[i] * (1.5 * nonlinear_[i] - 0.5 * prev[i]);
  } else {
    for (std::size_t i = 0; i < lam.size(); ++i) forcing[i] = g[i] - lam[i] * nonlinear_[i];
  }
  State next = state_;
  detail::cn_advance(stiffness_, cfg_.dt, forcing, next.u, next.v);
  return next;
}

State Integrator::step_implicit() {
  // Backward Euler: v1 = (u1 - u0)/dt and, after division by lambda, the
  // symmetric system
  //   G(u1) = A^{-1}[c (u1 - u0) - v0/dt - g] + A u1 + P_N f(u1) = 0,
  //   c = 1/dt^2 + 1/dt,  J = c A^{-1} + A + P_N f'(u1).
  const double dt = cfg_.dt;
  const double c = 1.0 / (dt * dt) + 1.0 / dt;
  const auto& lam = model_.lambda();
  const auto& g = model_.source().g_modal;
  const ModalField& u0 = state_.u;
  const ModalField& v0 = state_.v;

  double scale_sq = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double b = (c * u0[i] + v0[i] / dt + g[i]) / lam[i];
    scale_sq += b * b;
  }
  const double tol = cfg_.newton_tol * (1.0 + std::sqrt(scale_sq));

  std::vector<double> inv_diag(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) inv_diag[i] = 1.0 / (c / lam[i] + lam[i]);

  ModalField u1 = u0;
  for (std::size_t i = 0; i < lam.size(); ++i) u1[i] += dt * v0[i];

  std::vector<double> trace;
  for (int it = 0; it <= cfg_.newton_max_iter; ++it) {
    const ModalField pf = model_.nonlinear(u1);
    ModalField res(model_.grid());
    double rn = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      res[i] = (c * (u1[i] - u0[i]) - v0[i] / dt - g[i]) / lam[i] + lam[i] * u1[i] + pf[i];
      rn += res[i] * res[i];
    }
    rn = std::sqrt(rn);
    trace.push_back(rn);
    if (rn <= tol) {
      State next(u1, ModalField(model_.grid()), state_.time);
      for (std::size_t i = 0; i < lam.size(); ++i) next.v[i] = (u1[i] - u0[i]) / dt;
      return next;
    }
    if (it == cfg_.newton_max_iter) break;

    const NodalField un = model_.nodal(u1);
    const bool nonlinear = !model_.nonlinearity().is_zero();
    krylov::Operator jac = [&](const ModalField& w) {
      ModalField out = nonlinear ? model_.linearized(un, w) : ModalField(model_.grid());
      for (std::size_t i = 0; i < lam.size(); ++i) out[i] += (c / lam[i] + lam[i]) * w[i];
      return out;
    };
    const double inner_tol = std::max(1e-14, std::min(1e-4, rn / (1.0 + rn)));
    auto cg = krylov::pcg(jac, inv_diag, -res, inner_tol, 500);
    if (cg.negative_curvature) break;
    u1 += cg.x;
  }
  std::ostringstream msg;
  msg << "implicit_newton: Newton did not converge at t=" << state_.time << " (residuals:";
  for (double r : trace) msg << ' ' << r;
  msg << ")";
  throw StepFailure(msg.str(), state_.time, trace);
}

const State& Integrator::step() {
  State next = cfg_.scheme == Scheme::ImexCnAb2 ? step_imex() : step_implicit();
  double pot = 0.0;
  ModalField pf = model_.nonlinear(next.u, &pot);
  const EnergyBreakdown e = model_.energy(next, pot);
  if (!std::isfinite(e.total) || (cfg_.dt > 0.0 && e.total > energy_.total + cfg_.safeguard_tol)) {
    std::ostringstream msg;
    msg << "energy increased from " << energy_.total << " to " << e.total << " in one step at t=" << state_.time
        << "; reduce scheme.dt (currently " << cfg_.dt << ")";
    throw InstabilityError(msg.str(), state_.time);
  }
  const double d0 = norm_Hs(state_.v, -0.5);
  const double d1 = norm_Hs(next.v, -0.5);
  dissipation_ += 0.5 * std::abs(cfg_.dt) * (d0 * d0 + d1 * d1);
  const double dq = norm_Hs((1.0 / cfg_.dt) * (next.u - state_.u), -0.5);
  scheme_dissipation_ += std::abs(cfg_.dt) * dq * dq;

  prev_nonlinear_ = std::move(nonlinear_);
  nonlinear_ = std::move(pf);
  energy_ = e;
  ++steps_;
  state_ = std::move(next);
  state_.time = origin_ + static_cast<double>(steps_) * cfg_.dt;
  return state_;
}

LogSample Integrator::sample(const DiagnosticParams& p) const {
  LogSample s;
  s.t = state_.time;
  s.norm0 = norm_pair(state_.u, state_.v, 0.0);
  s.norm2 = norm_pair(state_.u, state_.v, 2.0);
  s.ut_vprime = norm_Hs(state_.v, -0.5);
  s.energy = energy_.total;
  s.calF = model_.calF(state_, p);
  const HigherFunctionals hf = model_.higher(state_);
  s.calG = hf.g;
  s.calH = hf.h;
  s.dissip_cum = dissipation_;
  return s;
}

State step(const State& s, const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg) {
  Integrator integ(Model(s.grid(), nl, g), cfg, s);
  return integ.step();
}

std::uint64_t step_count(double t0, double t_end, double dt) {
  const double span = t_end - t0;
  if (span < 0.0 && dt > 0.0) throw std::invalid_argument("t_end precedes the initial time");
  const double n = std::round(span / dt);
  if (n < 0.0 || std::abs(n * dt - span) > 1e-9 * std::max(1.0, std::abs(t_end)))
    throw std::invalid_argument("t_end - t0 is not a multiple of dt");
  return static_cast<std::uint64_t>(n);
}

TrajectoryLog run(Integrator& integ, double t_end, std::size_t sample_every, const DiagnosticParams& p,
                  const SampleObserver& observer) {
  if (sample_every == 0) throw std::invalid_argument("sample_every must be >= 1");
  const std::uint64_t n = step_count(integ.state().time, t_end, integ.config().dt);
  TrajectoryLog log;
  auto record = [&] {
    log.samples.push_back(integ.sample(p));
    if (observer) observer(integ, log.samples.back());
  };
  record();
  for (std::uint64_t i = 1; i <= n; ++i) {
    integ.step();
    if (i % sample_every == 0 || i == n) record();
  }
  return log;
}

TrajectoryLog simulate(const State& initial, const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg,
                       double t_end, std::size_t sample_every, const SampleObserver& observer) {
  Integrator integ(Model(initial.grid(), nl, g), cfg, initial);
  return run(integ, t_end, sample_every, coercivity_params(nl, initial.grid()), observer);
}

double energy_equality_residual(const TrajectoryLog& log, std::size_t s_idx, std::size_t t_idx) {
  if (s_idx > t_idx || t_idx >= log.size()) throw IndexError("energy_equality_residual: bad sample indices");
  const auto& a = log.samples[s_idx];
  const auto& b = log.samples[t_idx];
  return std::abs(b.energy - a.energy + (b.dissip_cum - a.dissip_cum));
}

double higher_energy_residual(const TrajectoryLog& log) {
  if (log.size() < 3) throw std::invalid_argument("higher_energy_residual: need at least 3 samples");
  const auto& s = log.samples;
  const double h = s[1].t - s[0].t;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double h_left = s[i].t - s[i - 1].t;
    const double h_right = s[i + 1].t - s[i].t;
    if (std::abs(h_left - h) > 1e-9 * std::abs(h) || std::abs(h_right - h) > 1e-9 * std::abs(h)) continue;
    const double dg = (s[i + 1].calG - s[i - 1].calG) / (2.0 * h);
    worst = std::max(worst, std::abs(dg + s[i].calG - s[i].calH));
  }
  return worst;
}

ModeValue exact_linear_mode(double lambda, double u0, double v0, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("exact_linear_mode: lambda must be > 0");
  const double disc = lambda * lambda - 0.25;
  const double env = std::exp(-0.5 * t);
  if (disc > 0.0) {
    const double w = std::sqrt(disc);
    const double cs = std::cos(w * t), sn = std::sin(w * t);
    return {env * (u0 * cs + (v0 + 0.5 * u0) / w * sn), env * (v0 * cs - (0.5 * v0 + lambda * lambda * u0) / w * sn)};
  }
  if (disc == 0.0) {
    const double b = v0 + 0.5 * u0;
    return {env * (u0 + b * t), env * (v0 - 0.5 * b * t)};
  }
  const double mu = std::sqrt(-disc);
  const double sp = -0.5 + mu, sm = -0.5 - mu;
  const double cp = (v0 - sm * u0) / (2.0 * mu);
  const double cm = u0 - cp;
  return {cp * std::exp(sp * t) + cm * std::exp(sm * t), sp * cp * std::exp(sp * t) + sm * cm * std::exp(sm * t)};
}

}  // namespace hch
