// Separable 2D sine/cosine transforms on interior collocation grids.
//
// All routines work on raw row-major arrays and are unnormalized:
//
//   synthesize: out[p][q] = sum_{j,k<=n} c[j][k] bx(j p) by(k q)
//   analyze:    out[j][k] = sum_{p,q<=P} v[p][q] sin(j p) sin(k q)
//
// with sin(j p) := sin(j pi p / (P+1)) and cos likewise. Row transforms are
// FFTW DST-I / DCT-I executions distributed over OpenMP threads; each row is
// transformed independently so results do not depend on the thread count.
#pragma once

#include <cstddef>
#include <span>

namespace hch::transform {

enum class Basis { Sine, Cosine };

void synthesize(std::span<const double> coeff, std::size_t n, std::size_t points, Basis bx, Basis by,
                std::span<double> out);

void analyze(std::span<const double> values, std::size_t points, std::size_t n, std::span<double> out);

/// Smallest P with P+1 7-smooth and P+1 >= 2n+1; quadrature on that grid is
/// exact for quartic products of fields band-limited to n modes.
std::size_t dealias_points(std::size_t n);

/// Grid used for sup-norm sampling: P+1 = 4(n+1), so the domain centre is a node.
std::size_t fine_points(std::size_t n);

/// Thread control for the OpenMP kernels (no-op without OpenMP).
void set_threads(int n);
int max_threads();

}  // namespace hch::transform
