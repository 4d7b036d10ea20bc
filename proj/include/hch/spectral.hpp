// The operator A = -Lap with u = Lap u = 0 on the square, realized exactly in
// the sine eigenbasis: eigenvalues, transforms, powers A^s, projectors P_m
// and the norms of the scale D(A^s).
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hch/grid.hpp"

namespace hch {

double eigenvalue(const GridSpec& grid, std::size_t j, std::size_t k);

/// Largest retained eigenvalue 2 (N pi / side)^2.
double lambda_max(const GridSpec& grid);

/// All eigenvalues in ModalField storage order.
std::vector<double> eigenvalues(const GridSpec& grid);

/// Exact discrete sine analysis on the native N x N collocation grid.
ModalField forward_transform(const NodalField& field);

/// Samples of the modal series on the native N x N collocation grid.
NodalField inverse_transform(const ModalField& field);

enum class Derivative { None, X, Y };

/// Samples of the series (or of one of its first derivatives) on a grid with
/// `points` >= N nodes per axis.
NodalField synthesize(const ModalField& field, std::size_t points, Derivative d = Derivative::None);

/// P_N of nodal data on any grid with points >= N, exact for band-limited data.
ModalField analyze(const NodalField& field);

/// Quadrature of nodal data: h^2 sum v. Exact for the products used here when
/// the grid is at least the dealiasing grid.
double integrate(const NodalField& field);

ModalField apply_power(const ModalField& z, double s);

/// Zero all coefficients with j > m or k > m.
ModalField project(const ModalField& z, std::size_t m);

/// ||A^s z||.
double norm_Hs(const ModalField& z, double s);

/// ||(u, v)||_s = (||A^{(s+1)/2} u||^2 + ||A^{(s-1)/2} v||^2)^{1/2}.
double norm_pair(const ModalField& u, const ModalField& v, double s);

/// sum lambda^s a b, i.e. (A^{s/2} a, A^{s/2} b); s = 0 is the L2 inner product.
double pairing(const ModalField& a, const ModalField& b, double s = 0.0);

/// Pseudo-random coefficients on modes j,k <= band with decaying spectrum,
/// scaled so that ||(u, 0)||_0 = ||A^{1/2} u|| = amplitude.
ModalField random_band_limited(const GridSpec& grid, std::size_t band, double amplitude, std::uint64_t seed);

/// Copy coefficients into another grid with the same side, zero-filling or truncating.
ModalField resample(const ModalField& z, const GridSpec& target);

/// sin-sin basis function e_jk as a modal field.
ModalField basis_mode(const GridSpec& grid, std::size_t j, std::size_t k, double amplitude = 1.0);

}  // namespace hch
