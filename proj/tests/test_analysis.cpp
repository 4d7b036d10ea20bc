#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hch/analysis.hpp"
#include "hch/spectral.hpp"
#include "oracles.hpp"

using namespace hch;
using std::numbers::pi;

namespace {

SchemeConfig scheme(double dt) {
  SchemeConfig c;
  c.dt = dt;
  return c;
}

State random_state(const GridSpec& g, std::size_t band, double radius, std::uint64_t seed) {
  ModalField u = random_band_limited(g, band, 1.0, seed), v = apply_power(random_band_limited(g, band, 1.0, seed + 1), 0.5);
  const double n = norm_pair(u, v, 0.0);
  return State(radius / n * u, radius / n * v);
}

}  // namespace

TEST_CASE("fit_line") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 4);
  CHECK(fit_line({0, 1, 2}, {0, 1, 0}).r2 < 0.5);
  CHECK_THROWS_AS(fit_line({1}, {1}), std::invalid_argument);
}

TEST_CASE("Galerkin gaps vanish for linear dynamics") {
  const GridSpec g(4, pi);
  const State s0(random_band_limited(g, 4, 1.0, 1), ModalField(g));
  const ConvergenceReport r =
      galerkin_convergence(s0, Nonlinearity::zero(), SourceTerm::zero(g), scheme(1e-3), {4, 8, 16}, 32, 0.1, 10);
  REQUIRE(r.gaps.size() == 3);
  for (double gap : r.gaps) CHECK(gap <= 1e-10);
  for (bool u : r.unstable) CHECK_FALSE(u);
}

TEST_CASE("Galerkin gaps decrease for the cubic") {
  const GridSpec g(8, pi);
  const State s0(random_band_limited(g, 8, 5.0, 3), ModalField(g));
  const ConvergenceReport r =
      galerkin_convergence(s0, Nonlinearity(1, 0, -1), SourceTerm::zero(g), scheme(1e-3), {8, 16, 32}, 64, 0.1, 10);
  CHECK(r.strictly_decreasing());
  CHECK(r.exponent >= 0.0);
  for (std::size_t i = 1; i < r.gaps.size(); ++i) CHECK(r.gaps[i] <= 0.5 * r.gaps[i - 1]);
}

TEST_CASE("Galerkin preconditions") {
  const GridSpec g(8, pi);
  const State s0(random_band_limited(g, 8, 1.0, 1), ModalField(g));
  const Nonlinearity nl(1, 0, -1);
  const SourceTerm z = SourceTerm::zero(g);
  CHECK_THROWS_AS(galerkin_convergence(s0, nl, z, scheme(1e-3), {8, 16}, 24, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(galerkin_convergence(s0, nl, z, scheme(1e-3), {16, 8}, 64, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(galerkin_convergence(s0, nl, z, scheme(1e-3), {4, 8}, 64, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(galerkin_convergence(s0, nl, z, scheme(1e-3), {8, 16}, 64, 0.0), std::invalid_argument);
}

TEST_CASE("decomposition from zero data") {
  const GridSpec g(8, pi);
  const Nonlinearity nl(1, 0, -1);
  const SourceTerm src(random_band_limited(g, 3, 0.5, 2));
  DecompositionOptions opt;
  opt.fit_t0 = 0.2;
  const DecompositionRun z = decomposition_run(State::zero(g), nl, SourceTerm::zero(g), scheme(1e-3), 10.0, 0.5, opt);
  for (double w : z.w_norm_trace) CHECK(w == 0.0);
  CHECK(z.sum_error == 0.0);
  // with forcing, u and v carry different stiffness splits and agree to round-off
  const DecompositionRun r = decomposition_run(State::zero(g), nl, src, scheme(1e-3), 10.0, 0.5, opt);
  for (double w : r.w_norm_trace) CHECK(w <= 1e-14);
  CHECK(r.sum_error <= 1e-14);
  CHECK_THROWS_AS(decomposition_run(State::zero(g), nl, src, scheme(1e-3), 0.0, 0.5, opt), std::invalid_argument);
}

TEST_CASE("decomposition sums to the full solution and w decays") {
  const GridSpec g(16, pi);
  const Nonlinearity nl(1, 0, -1);
  const DecompositionRun r =
      decomposition_run(random_state(g, 4, 1.0, 5), nl, SourceTerm::zero(g), scheme(1e-3), default_big_l(nl), 4.0);
  CHECK(default_big_l(nl) == 10.0);
  CHECK(default_big_l(Nonlinearity(1, 0, -7)) == 14.0);
  CHECK(r.sum_error_relative <= 1e-9);
  CHECK(r.fitted_kappa > 0.0);
  CHECK(r.fit_r2 >= 0.9);
}

TEST_CASE("Lipschitz dependence") {
  const GridSpec g(8, pi);
  const State s0 = random_state(g, 4, 1.0, 7);
  const LipschitzReport lin =
      lipschitz_dependence(s0, 1e-6, Nonlinearity::zero(), SourceTerm::zero(g), scheme(1e-3), 3.0);
  for (double r : lin.rho) CHECK(r <= 1.0 + 1e-8);
  CHECK_THROWS_AS(lipschitz_dependence(s0, 0.0, Nonlinearity::zero(), SourceTerm::zero(g), scheme(1e-3), 1.0),
                  std::invalid_argument);

  const Nonlinearity nl(1, 0, -1);
  const LipschitzReport a = lipschitz_dependence(s0, 1e-6, nl, SourceTerm::zero(g), scheme(1e-3), 3.0);
  const LipschitzReport b = lipschitz_dependence(s0, 5e-7, nl, SourceTerm::zero(g), scheme(1e-3), 3.0);
  REQUIRE(a.rho.size() == b.rho.size());
  for (std::size_t i = 0; i < a.rho.size(); ++i) CHECK(std::abs(a.rho[i] - b.rho[i]) <= 0.01 * a.rho[i]);
  CHECK(std::abs(a.c7 - b.c7) <= 0.1 * std::abs(a.c7));
  CHECK_FALSE(a.superexponential);
}

TEST_CASE("Brezis-Gallouet ratio") {
  const GridSpec g(16, pi);
  const BGRecord e = bg_ratio(basis_mode(g, 1, 1));
  CHECK(e.sup == doctest::Approx(2.0 / pi).epsilon(1e-12));
  CHECK(e.norm_v == doctest::Approx(std::sqrt(2.0)));
  CHECK(e.norm_da == doctest::Approx(2.0));
  CHECK(e.ratio < 1.0);
  CHECK(e.ratio == doctest::Approx((2.0 / pi) / (std::sqrt(2.0) * (1.0 + std::sqrt(std::log(1.0 + std::sqrt(2.0)))))));

  const ModalField z = random_band_limited(g, 16, 1.0, 3);
  const double base = bg_ratio(z).ratio;
  for (double c : {1e-3, 1.0, 1e3}) CHECK(std::abs(bg_ratio(c * z).ratio - base) <= 1e-10 * base);
  CHECK(bg_ratio(ModalField(g)).ratio == 0.0);

  const BGReport r64 = brezis_gallouet_scan(GridSpec(64, pi), 4, 1);
  const BGReport r128 = brezis_gallouet_scan(GridSpec(128, pi), 4, 1);
  for (const BGRecord& rec : r64.records) {
    CHECK(rec.sup > 0.0);
    CHECK(rec.ratio > 0.0);
  }
  CHECK(r128.adversarial_ratio <= 1.2 * r64.adversarial_ratio);
  CHECK_THROWS_AS(brezis_gallouet_scan(g, 0, 1), std::invalid_argument);
}

TEST_CASE("equilibrium at the origin") {
  const GridSpec g(16, pi);
  const EquilibriumResult r = find_equilibrium(ModalField(g), Nonlinearity(1, 0, -1), SourceTerm::zero(g), 1e-10, 50);
  CHECK(r.converged);
  CHECK(r.residual == 0.0);
  CHECK(oracle::max_abs(r.u_star) == 0.0);
  CHECK(r.newton_iters <= 1);
  CHECK(r.stability_indicator > 0.0);
  CHECK_THROWS_AS(find_equilibrium(ModalField(g), Nonlinearity(1, 0, -1), SourceTerm::zero(g), 0.0, 50),
                  std::invalid_argument);
}

TEST_CASE("nonzero equilibrium of the double well") {
  const GridSpec g(16, pi);
  const Nonlinearity nl(1, 0, -3);
  const SourceTerm zero = SourceTerm::zero(g);
  const EquilibriumResult r = find_equilibrium(basis_mode(g, 1, 1, 0.5), nl, zero, 1e-10, 50);
  REQUIRE(r.converged);
  CHECK(r.residual <= 1e-10);
  CHECK(norm_Hs(r.u_star, 0.5) > 0.1);
  CHECK(r.stability_indicator >= 0.0);

  // stationary form of the evolution equation
  const State st(r.u_star, ModalField(g));
  CHECK(pde_residual(st, ModalField(g), nl, zero) <= 10 * 1e-10 * 2.0);

  const EquilibriumResult m = find_equilibrium(basis_mode(g, 1, 1, -0.5), nl, zero, 1e-10, 50);
  CHECK(oracle::max_abs_diff(m.u_star, -1.0 * r.u_star) <= 1e-12);

  // damped long-run limit
  Integrator integ(Model(g, nl, zero), scheme(1e-2), State(basis_mode(g, 1, 1, 0.5), ModalField(g)));
  for (int i = 0; i < 20000; ++i) integ.step();
  CHECK(norm_Hs(integ.state().u - r.u_star, 0.5) <= 1e-4);

  const EquilibriumResult few = find_equilibrium(basis_mode(g, 1, 1, 0.5), nl, zero, 1e-10, 1);
  CHECK_FALSE(few.converged);
  CHECK_FALSE(few.residual_history.empty());
}

TEST_CASE("stability indicator") {
  const GridSpec g(8, pi);
  // A + f'(0) with f'(0) = a1 has smallest quotient lambda1 + a1.
  CHECK(stability_indicator(ModalField(g), Nonlinearity(1, 0, -1)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(stability_indicator(ModalField(g), Nonlinearity(1, 0, -3)) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("Lojasiewicz probe") {
  const GridSpec g(8, pi);
  const Nonlinearity nl(1, 0, -1);
  const SourceTerm zero = SourceTerm::zero(g);
  const LojasiewiczReport fixed = lojasiewicz_probe(State::zero(g), nl, zero, scheme(1e-2), 1.0, 1e-10);
  CHECK(fixed.reached_tol);
  CHECK(fixed.distance_v == 0.0);
  CHECK(fixed.ut_final <= 1e-10);

  const LojasiewiczReport r = lojasiewicz_probe(random_state(g, 4, 1.0, 3), nl, zero, scheme(1e-2), 60.0, 1e-6);
  CHECK(r.reached_tol);
  CHECK(r.equilibrium.converged);
  CHECK(r.distance_v <= 1e-4);
  CHECK(r.energy_gap >= -1e-10);

  const LojasiewiczReport early = lojasiewicz_probe(random_state(g, 4, 1.0, 3), nl, zero, scheme(1e-2), 0.1, 1e-6);
  CHECK_FALSE(early.reached_tol);
}

TEST_CASE("absorbing probe") {
  const GridSpec g(8, pi);
  const Nonlinearity nl(1, 0, -1);
  const SourceTerm zero = SourceTerm::zero(g);
  const AbsorbingReport r = absorbing_probe(g, {0.5, 1.0, 2.0}, 1, nl, zero, scheme(1e-2), 40.0);
  CHECK(r.status == ProbeStatus::Pass);
  for (const AbsorbingEntry& e : r.entries) CHECK(e.tail_sup0 <= 1e-3);

  const AbsorbingReport pair = absorbing_probe(g, {1.0, 4.0}, 1, nl, zero, scheme(1e-2), 40.0);
  CHECK(pair.status == ProbeStatus::Pass);

  const AbsorbingReport early = absorbing_probe(g, {1.0, 4.0}, 1, nl, zero, scheme(1e-2), 0.2);
  CHECK(early.status == ProbeStatus::Inconclusive);

  CHECK_THROWS_AS(absorbing_probe(g, {1.0, -1.0}, 1, nl, zero, scheme(1e-2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(absorbing_probe(g, {}, 1, nl, zero, scheme(1e-2), 1.0), std::invalid_argument);
  CHECK(to_string(ProbeStatus::Inconclusive) == "inconclusive");
}
