#include "hch/spectral.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hch/sine_transform.hpp"

namespace hch {

double eigenvalue(const GridSpec& grid, std::size_t j, std::size_t k) {
  if (j < 1 || k < 1 || j > grid.n_modes || k > grid.n_modes)
    throw IndexError("eigenvalue: index (" + std::to_string(j) + "," + std::to_string(k) + ") out of range");
  const double a = grid.wavenumber(j);
  const double b = grid.wavenumber(k);
  return a * a + b * b;
}

double lambda_max(const GridSpec& grid) {
  const double a = grid.wavenumber(grid.n_modes);
  return 2.0 * a * a;
}

std::vector<double> eigenvalues(const GridSpec& grid) {
  const std::size_t n = grid.n_modes;
  std::vector<double> lam(n * n);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      const double a = grid.wavenumber(j);
      const double b = grid.wavenumber(k);
      lam[(j - 1) * n + (k - 1)] = a * a + b * b;
    }
  return lam;
}

NodalField synthesize(const ModalField& field, std::size_t points, Derivative d) {
  const GridSpec& g = field.grid();
  const std::size_t n = g.n_modes;
  if (points < n) throw DimensionError("synthesize: grid coarser than the modal field");
  NodalField out(g, points);
  const double scale = 2.0 / g.side;
  if (d == Derivative::None) {
    transform::synthesize(field.coeff(), n, points, transform::Basis::Sine, transform::Basis::Sine, out.values());
  } else {
    std::vector<double> c(field.data());
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t k = 1; k <= n; ++k) c[(j - 1) * n + (k - 1)] *= g.wavenumber(d == Derivative::X ? j : k);
    const auto bx = d == Derivative::X ? transform::Basis::Cosine : transform::Basis::Sine;
    const auto by = d == Derivative::Y ? transform::Basis::Cosine : transform::Basis::Sine;
    transform::synthesize(c, n, points, bx, by, out.values());
  }
  for (double& v : out.values()) v *= scale;
  return out;
}

ModalField analyze(const NodalField& field) {
  const GridSpec& g = field.grid();
  const std::size_t n = g.n_modes;
  const std::size_t points = field.points();
  if (points < n) throw DimensionError("analyze: grid coarser than the modal field");
  ModalField out(g);
  transform::analyze(field.values(), points, n, out.coeff());
  const double h = field.spacing();
  const double scale = h * h * 2.0 / g.side;
  out *= scale;
  return out;
}

NodalField inverse_transform(const ModalField& field) { return synthesize(field, field.n()); }

ModalField forward_transform(const NodalField& field) {
  if (field.points() != field.grid().n_modes)
    throw DimensionError("forward_transform: nodal grid has " + std::to_string(field.points()) +
                         " points per axis, expected " + std::to_string(field.grid().n_modes));
  return analyze(field);
}

double integrate(const NodalField& field) {
  const double h = field.spacing();
  const std::size_t p = field.points();
  auto v = field.values();
  double total = 0.0;
  for (std::size_t r = 0; r < p; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < p; ++c) s += v[r * p + c];
    total += s;
  }
  return h * h * total;
}

ModalField apply_power(const ModalField& z, double s) {
  if (s == 0.0) return z;
  ModalField out(z);
  const auto lam = eigenvalues(z.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::pow(lam[i], s);
  return out;
}

ModalField project(const ModalField& z, std::size_t m) {
  const std::size_t n = z.n();
  if (m < 1 || m > n) throw IndexError("project: m=" + std::to_string(m) + " outside 1.." + std::to_string(n));
  ModalField out(z);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k)
      if (j > m || k > m) out.at(j, k) = 0.0;
  return out;
}

double pairing(const ModalField& a, const ModalField& b, double s) {
  a.require_same_grid(b);
  double total = 0.0;
  if (s == 0.0) {
    for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
    return total;
  }
  const auto lam = eigenvalues(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) total += std::pow(lam[i], s) * a[i] * b[i];
  return total;
}

double norm_Hs(const ModalField& z, double s) { return std::sqrt(pairing(z, z, 2.0 * s)); }

double norm_pair(const ModalField& u, const ModalField& v, double s) {
  u.require_same_grid(v);
  const double a = norm_Hs(u, 0.5 * (s + 1.0));
  const double b = norm_Hs(v, 0.5 * (s - 1.0));
  return std::sqrt(a * a + b * b);
}

ModalField random_band_limited(const GridSpec& grid, std::size_t band, double amplitude, std::uint64_t seed) {
  if (band < 1 || band > grid.n_modes)
    throw IndexError("random_band_limited: band=" + std::to_string(band) + " outside 1.." +
                     std::to_string(grid.n_modes));
  ModalField z(grid);
  if (amplitude == 0.0) return z;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t j = 1; j <= band; ++j)
    for (std::size_t k = 1; k <= band; ++k) z.at(j, k) = unif(rng) / eigenvalue(grid, j, k);
  const double norm = norm_Hs(z, 0.5);
  if (norm == 0.0) z.at(1, 1) = 1.0 / std::sqrt(eigenvalue(grid, 1, 1));
  z *= amplitude / norm_Hs(z, 0.5);
  return z;
}

ModalField resample(const ModalField& z, const GridSpec& target) {
  if (z.grid().side != target.side) throw DimensionError("resample: side mismatch");
  ModalField out(target);
  const std::size_t m = std::min(z.n(), target.n_modes);
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t k = 1; k <= m; ++k) out.at(j, k) = z.at(j, k);
  return out;
}

ModalField basis_mode(const GridSpec& grid, std::size_t j, std::size_t k, double amplitude) {
  ModalField z(grid);
  z.at(j, k) = amplitude;
  return z;
}

}  // namespace hch
