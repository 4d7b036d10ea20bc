// Time advance of the Galerkin system
//
//   u'' + u' + lambda^2 u + lambda P_N f(u) = g      (per mode)
//
// with energy bookkeeping, trajectory logging and verification residuals.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hch/model.hpp"
#include "hch/state.hpp"

namespace hch {

enum class Scheme { ImexCnAb2, ImplicitNewton };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::ImexCnAb2;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double safeguard_tol = 1e-6;  // largest accepted single-step energy increase

  void validate() const;
  friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

/// Newton did not converge within the step; `trace` holds the residual history.
struct StepFailure : std::runtime_error {
  StepFailure(const std::string& what, double t, std::vector<double> tr)
      : std::runtime_error(what), time(t), trace(std::move(tr)) {}
  double time;
  std::vector<double> trace;
};

/// Energy safeguard tripped.
struct InstabilityError : std::runtime_error {
  InstabilityError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

struct LogSample {
  double t = 0.0;
  double norm0 = 0.0;      // ||U||_0
  double norm2 = 0.0;      // ||U||_2
  double ut_vprime = 0.0;  // ||u_t||_{V'}
  double energy = 0.0;
  double calF = 0.0;
  double calG = 0.0;
  double calH = 0.0;
  double dissip_cum = 0.0;  // integral of ||u_t||_{V'}^2 from the start of the run
};

struct TrajectoryLog {
  std::vector<LogSample> samples;

  static constexpr const char* csv_header = "t,norm0,norm2,ut_Vprime,energy,calF,calG,calH,dissip_cum";
  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;
  std::size_t size() const { return samples.size(); }
};

namespace detail {
/// Crank-Nicolson advance of y'' + y' + k y = forcing (forcing constant over
/// the step), solved per mode in closed form.
void cn_advance(const std::vector<double>& stiffness, double dt, const ModalField& forcing, ModalField& y,
                ModalField& yt);
}  // namespace detail

class Integrator {
 public:
  Integrator(Model model, SchemeConfig cfg, State initial);

  const Model& model() const { return model_; }
  const SchemeConfig& config() const { return cfg_; }
  const State& state() const { return state_; }
  double energy() const { return energy_.total; }
  const EnergyBreakdown& energy_breakdown() const { return energy_; }
  /// Trapezoid rule for the integral of ||u_t||_{V'}^2.
  double dissipation() const { return dissipation_; }
  /// Sum of dt ||(u_{n+1} - u_n)/dt||_{V'}^2: what the linear part of the
  /// Crank-Nicolson step removes from the energy exactly.
  double scheme_dissipation() const { return scheme_dissipation_; }
  std::uint64_t steps() const { return steps_; }
  double origin_time() const { return origin_; }

  /// P_N f(u) at the previous step (AB2 history), if any.
  const std::optional<ModalField>& history() const { return prev_nonlinear_; }

  /// Advance one dt. On failure the state is left unchanged.
  const State& step();

  /// Diagnostics of the current state.
  LogSample sample(const DiagnosticParams& p) const;

  /// Restore a saved position (used by checkpoint resume).
  void restore(const State& s, double origin, std::uint64_t steps, std::optional<ModalField> history,
               double dissipation, double scheme_dissipation);

 private:
  void refresh_nonlinear();
  State step_imex();
  State step_implicit();

  Model model_;
  SchemeConfig cfg_;
  State state_;
  double origin_ = 0.0;
  std::uint64_t steps_ = 0;
  ModalField nonlinear_;  // P_N f(u) at the current state
  std::optional<ModalField> prev_nonlinear_;
  EnergyBreakdown energy_;
  double dissipation_ = 0.0;
  double scheme_dissipation_ = 0.0;
  std::vector<double> stiffness_;
};

/// Single step with no history (IMEX Euler for the nonlinear term on the first step).
State step(const State& s, const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg);

using SampleObserver = std::function<void(const Integrator&, const LogSample&)>;

/// Number of steps covering [t0, t_end]; t_end - t0 must be a multiple of dt.
std::uint64_t step_count(double t0, double t_end, double dt);

/// Run from `initial` to t_end, logging every `sample_every` steps and at the end.
TrajectoryLog simulate(const State& initial, const Nonlinearity& nl, const SourceTerm& g, const SchemeConfig& cfg,
                       double t_end, std::size_t sample_every, const SampleObserver& observer = {});

/// Continue an existing integrator to t_end.
TrajectoryLog run(Integrator& integ, double t_end, std::size_t sample_every, const DiagnosticParams& p,
                  const SampleObserver& observer = {});

/// |E(t) - E(s) + integral_s^t ||u_t||_{V'}^2|.
double energy_equality_residual(const TrajectoryLog& log, std::size_t s_idx, std::size_t t_idx);

/// max over interior samples of |dG/dt + G - H| with central differences.
double higher_energy_residual(const TrajectoryLog& log);

struct ModeValue {
  double u = 0.0;
  double v = 0.0;
};

/// Closed-form solution of u'' + u' + lambda^2 u = 0.
ModeValue exact_linear_mode(double lambda, double u0, double v0, double t);

}  // namespace hch
