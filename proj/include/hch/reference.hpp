// Serial reference implementations kept for testing and benchmarking.
//
// The transforms are direct matrix products against tabulated sine/cosine
// matrices (O(n P (n + P)) per 2D transform) and share no code with the
// FFTW path in sine_transform.cpp.
#pragma once

#include <cstddef>
#include <span>

#include "hch/nonlinearity.hpp"
#include "hch/sine_transform.hpp"

namespace hch::reference {

void synthesize(std::span<const double> coeff, std::size_t n, std::size_t points, transform::Basis bx,
                transform::Basis by, std::span<double> out);

void analyze(std::span<const double> values, std::size_t points, std::size_t n, std::span<double> out);

double apply_f(const Nonlinearity& nl, std::span<const double> u, std::span<double> out);

double sum_df_ab(const Nonlinearity& nl, std::span<const double> u, std::span<const double> a,
                 std::span<const double> b);

}  // namespace hch::reference
