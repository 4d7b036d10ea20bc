// Pointwise kernels and quadrature reductions on collocation grids.
//
// Reductions sum each grid row in parallel and then add the row sums in
// order, so the result is independent of the number of threads.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hch/nonlinearity.hpp"

namespace hch::kernels {

template <class Term>
double ordered_sum(std::size_t rows, std::size_t cols, Term term) {
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(r) * cols;
    for (std::size_t c = 0; c < cols; ++c) s += term(base + c);
    partial[static_cast<std::size_t>(r)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

/// out = f(u); returns sum of F(u) over the nodes.
double apply_f(const Nonlinearity& nl, std::span<const double> u, std::span<double> out, std::size_t cols);

/// out = f'(u) w.
void apply_df(const Nonlinearity& nl, std::span<const double> u, std::span<const double> w, std::span<double> out);

/// sum of F(u).
double sum_potential(const Nonlinearity& nl, std::span<const double> u, std::size_t cols);

/// sum of f'(u) a b.
double sum_df_ab(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                 std::span<const double> b, std::size_t cols);

/// sum of f''(u) a b c.
double sum_d2f_abc(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                   std::span<const double> b, std::span<const double> c, std::size_t cols);

/// max |v|.
double max_abs(std::span<const double> v);

}  // namespace hch::kernels
