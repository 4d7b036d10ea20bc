// Energy, residual and diagnostic functionals of
//
//   u_tt + u_t + A (A u + f(u)) = g
//
// evaluated on the Galerkin space: polynomial products are formed on the
// dealiasing grid, where the quadrature is exact.
#pragma once

#include <cstddef>
#include <vector>

#include "hch/grid.hpp"
#include "hch/nonlinearity.hpp"
#include "hch/state.hpp"

namespace hch {

struct SourceTerm {
  ModalField g_modal;

  SourceTerm() = default;
  explicit SourceTerm(ModalField g) : g_modal(std::move(g)) {}
  static SourceTerm zero(const GridSpec& grid) { return SourceTerm(ModalField(grid)); }

  /// ||g||_{V'}.
  double dual_norm() const;
};

struct EnergyBreakdown {
  double quad = 0.0;
  double potential = 0.0;
  double forcing = 0.0;
  double total = 0.0;
};

/// beta, L for the functional calF and the coercivity constant sigma it is
/// expected to satisfy, calF >= sigma ||(u_t, u_tt)||_0^2.
struct DiagnosticParams {
  double beta = 0.5;
  double big_l = 1.0;
  double sigma = 0.125;
};

struct HigherFunctionals {
  double g0 = 0.0;
  double g = 0.0;
  double h = 0.0;
};

struct AssumptionReport {
  double lambda = 0.0;   // f' >= -lambda
  double m_bound = 0.0;  // |f''(r)| <= M (1 + |r|)
  double r0 = 0.0;       // f(r) r >= 0 for |r| >= r0
  double lambda1 = 0.0;  // first eigenvalue of A
  bool relaxed_condition = false;  // liminf f(r)/r > -lambda1
  bool f1_holds = false;
  bool f2_holds = false;
  bool f3_holds = false;
  double min_df_sampled = 0.0;

  bool ok() const { return f1_holds && f2_holds && f3_holds; }
};

class Model {
 public:
  Model(const GridSpec& grid, Nonlinearity nl, SourceTerm g);

  const GridSpec& grid() const { return grid_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  const SourceTerm& source() const { return g_; }
  const std::vector<double>& lambda() const { return lam_; }
  std::size_t dealias_points() const { return points_; }

  /// P_N f(u). If `potential` is given it receives the integral of F(u).
  ModalField nonlinear(const ModalField& u, double* potential = nullptr) const;
  double potential(const ModalField& u) const;

  /// P_N (f'(u) w) with u given by its dealiasing-grid samples.
  ModalField linearized(const NodalField& u_nodal, const ModalField& w) const;
  NodalField nodal(const ModalField& z) const;

  EnergyBreakdown energy(const State& s) const;
  EnergyBreakdown energy(const State& s, double potential) const;

  /// g - u_t - A^2 u - A P_N f(u).
  ModalField acceleration(const State& s) const;
  ModalField acceleration(const State& s, const ModalField& pf) const;

  /// ||u_tt + u_t + A^2 u + A P_N f(u) - g||_{V'}.
  double residual(const State& s, const ModalField& u_tt) const;

  double calF(const State& s, const DiagnosticParams& p) const;
  HigherFunctionals higher(const State& s) const;

 private:
  GridSpec grid_;
  Nonlinearity nl_;
  SourceTerm g_;
  std::vector<double> lam_;
  std::size_t points_;
};

// Free-function forms of the model operations.
ModalField f_eval_dealiased(const ModalField& u, const Nonlinearity& nl);
double potential_integral(const ModalField& u, const Nonlinearity& nl);
EnergyBreakdown energy(const State& s, const Nonlinearity& nl, const SourceTerm& g);
ModalField acceleration_from_state(const State& s, const Nonlinearity& nl, const SourceTerm& g);
double pde_residual(const State& s, const ModalField& u_tt, const Nonlinearity& nl, const SourceTerm& g);
double diagnostic_F(const State& s, const Nonlinearity& nl, const SourceTerm& g, const DiagnosticParams& p);
HigherFunctionals higher_functionals(const State& s, const Nonlinearity& nl, const SourceTerm& g);

/// beta = min(1/2, lambda1/2) makes the first three terms of calF dominate
/// ||V||_0^2 / 4; L = max(1, lambda, lambda^2/2) makes the f' and L terms
/// dominate -||v||_V^2 / 8. Together calF >= ||V||_0^2 / 8.
DiagnosticParams coercivity_params(const Nonlinearity& nl, const GridSpec& grid);

/// Constants of the growth hypotheses; each is verified by sampling r in [-1e3, 1e3].
AssumptionReport check_assumptions(const Nonlinearity& nl, const GridSpec& grid);

}  // namespace hch
