#include "hch/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hch::reference {
namespace {

// table[p][j] = b(j pi p / (points+1)), 1 <= p <= points, 1 <= j <= n.
std::vector<double> basis_table(std::size_t points, std::size_t n, transform::Basis basis) {
  std::vector<double> t(points * n);
  const double h = std::numbers::pi / static_cast<double>(points + 1);
  for (std::size_t p = 1; p <= points; ++p)
    for (std::size_t j = 1; j <= n; ++j) {
      const double arg = h * static_cast<double>(j * p);
      t[(p - 1) * n + (j - 1)] = basis == transform::Basis::Sine ? std::sin(arg) : std::cos(arg);
    }
  return t;
}

}  // namespace

void synthesize(std::span<const double> coeff, std::size_t n, std::size_t points, transform::Basis bx,
                transform::Basis by, std::span<double> out) {
  if (coeff.size() != n * n || out.size() != points * points) throw std::invalid_argument("synthesize: sizes");
  const auto tx = basis_table(points, n, bx);
  const auto ty = basis_table(points, n, by);
  // tmp[j][q] = sum_k c[j][k] ty[q][k]
  std::vector<double> tmp(n * points, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < points; ++q) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += coeff[j * n + k] * ty[q * n + k];
      tmp[j * points + q] = s;
    }
  for (std::size_t p = 0; p < points; ++p)
    for (std::size_t q = 0; q < points; ++q) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += tx[p * n + j] * tmp[j * points + q];
      out[p * points + q] = s;
    }
}

void analyze(std::span<const double> values, std::size_t points, std::size_t n, std::span<double> out) {
  if (values.size() != points * points || out.size() != n * n) throw std::invalid_argument("analyze: sizes");
  const auto t = basis_table(points, n, transform::Basis::Sine);
  // tmp[p][k] = sum_q v[p][q] t[q][k]
  std::vector<double> tmp(points * n, 0.0);
  for (std::size_t p = 0; p < points; ++p)
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < points; ++q) s += values[p * points + q] * t[q * n + k];
      tmp[p * n + k] = s;
    }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t p = 0; p < points; ++p) s += t[p * n + j] * tmp[p * n + k];
      out[j * n + k] = s;
    }
}

double apply_f(const Nonlinearity& nl, std::span<const double> u, std::span<double> out) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = nl.f(u[i]);
    s += nl.potential(u[i]);
  }
  return s;
}

double sum_df_ab(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                 std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += nl.df(u[i]) * a[i] * b[i];
  return s;
}

}  // namespace hch::reference
