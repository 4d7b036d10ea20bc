#include "hch/nodal_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hch::kernels {

double apply_f(const Nonlinearity& nl, std::span<const double> u, std::span<double> out, std::size_t cols) {
  const std::size_t rows = cols == 0 ? 0 : u.size() / cols;
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(r) * cols;
    for (std::size_t c = base; c < base + cols; ++c) {
      out[c] = nl.f(u[c]);
      s += nl.potential(u[c]);
    }
    partial[static_cast<std::size_t>(r)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

void apply_df(const Nonlinearity& nl, std::span<const double> u, std::span<const double> w, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(u.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = nl.df(u[k]) * w[k];
  }
}

double sum_potential(const Nonlinearity& nl, std::span<const double> u, std::size_t cols) {
  return ordered_sum(u.size() / cols, cols, [&](std::size_t i) { return nl.potential(u[i]); });
}

double sum_df_ab(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                 std::span<const double> b, std::size_t cols) {
  return ordered_sum(u.size() / cols, cols, [&](std::size_t i) { return nl.df(u[i]) * a[i] * b[i]; });
}

double sum_d2f_abc(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                   std::span<const double> b, std::span<const double> c, std::size_t cols) {
  return ordered_sum(u.size() / cols, cols, [&](std::size_t i) { return nl.d2f(u[i]) * a[i] * b[i] * c[i]; });
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace hch::kernels
