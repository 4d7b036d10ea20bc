// Grid and field types for the sine pseudo-spectral discretization of the
// square (0, side)^2 with u = Lap u = 0 on the boundary.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hch {

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Modes per axis and side length of the square.
struct GridSpec {
  std::size_t n_modes = 2;
  double side = std::numbers::pi;

  GridSpec() = default;
  GridSpec(std::size_t n, double l) : n_modes(n), side(l) { validate(); }

  void validate() const {
    if (n_modes < 2) throw std::invalid_argument("GridSpec: n_modes must be >= 2");
    if (!(side > 0.0) || !std::isfinite(side)) throw std::invalid_argument("GridSpec: side must be > 0");
  }

  std::size_t size() const { return n_modes * n_modes; }
  double wavenumber(std::size_t j) const { return static_cast<double>(j) * std::numbers::pi / side; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Coefficients against the L2-orthonormal eigenfunctions
/// e_jk = (2/side) sin(j pi x / side) sin(k pi y / side), 1 <= j,k <= N.
/// Stored row-major with j (x direction) as the slow index.
class ModalField {
 public:
  ModalField() = default;
  explicit ModalField(const GridSpec& grid) : grid_(grid), coeff_(grid.size(), 0.0) {}
  ModalField(const GridSpec& grid, std::vector<double> coeff) : grid_(grid), coeff_(std::move(coeff)) {
    if (coeff_.size() != grid_.size()) throw DimensionError("ModalField: coefficient count does not match grid");
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t n() const { return grid_.n_modes; }
  std::size_t size() const { return coeff_.size(); }

  // 1-based mode indices.
  double& at(std::size_t j, std::size_t k) { return coeff_[index(j, k)]; }
  double at(std::size_t j, std::size_t k) const { return coeff_[index(j, k)]; }

  double& operator[](std::size_t i) { return coeff_[i]; }
  double operator[](std::size_t i) const { return coeff_[i]; }

  std::span<double> coeff() { return coeff_; }
  std::span<const double> coeff() const { return coeff_; }
  const std::vector<double>& data() const { return coeff_; }

  ModalField& operator+=(const ModalField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
    return *this;
  }
  ModalField& operator-=(const ModalField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
    return *this;
  }
  ModalField& operator*=(double a) {
    for (double& c : coeff_) c *= a;
    return *this;
  }
  ModalField operator-() const {
    ModalField r(*this);
    for (double& c : r.coeff_) c = -c;
    return r;
  }

  void require_same_grid(const ModalField& o) const {
    if (!(grid_ == o.grid_)) throw DimensionError("ModalField: grid mismatch");
  }

  bool is_finite() const {
    for (double c : coeff_)
      if (!std::isfinite(c)) return false;
    return true;
  }

  friend bool operator==(const ModalField&, const ModalField&) = default;

 private:
  std::size_t index(std::size_t j, std::size_t k) const {
    const std::size_t n = grid_.n_modes;
    if (j < 1 || k < 1 || j > n || k > n)
      throw IndexError("mode index (" + std::to_string(j) + "," + std::to_string(k) + ") outside 1.." +
                       std::to_string(n));
    return (j - 1) * n + (k - 1);
  }

  GridSpec grid_{};
  std::vector<double> coeff_;
};

inline ModalField operator+(ModalField a, const ModalField& b) { return a += b; }
inline ModalField operator-(ModalField a, const ModalField& b) { return a -= b; }
inline ModalField operator*(double s, ModalField a) { return a *= s; }

/// Values at interior collocation points x_p = p side/(P+1), 1 <= p <= P.
/// P equals n_modes on the native grid and is larger on dealiasing grids.
class NodalField {
 public:
  NodalField() = default;
  NodalField(const GridSpec& grid, std::size_t points)
      : grid_(grid), points_(points), values_(points * points, 0.0) {}
  explicit NodalField(const GridSpec& grid) : NodalField(grid, grid.n_modes) {}
  NodalField(const GridSpec& grid, std::size_t points, std::vector<double> values)
      : grid_(grid), points_(points), values_(std::move(values)) {
    if (values_.size() != points_ * points_) throw DimensionError("NodalField: value count does not match grid");
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t points() const { return points_; }
  double spacing() const { return grid_.side / static_cast<double>(points_ + 1); }

  // 1-based collocation indices.
  double& at(std::size_t p, std::size_t q) { return values_[(p - 1) * points_ + (q - 1)]; }
  double at(std::size_t p, std::size_t q) const { return values_[(p - 1) * points_ + (q - 1)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  GridSpec grid_{};
  std::size_t points_ = 0;
  std::vector<double> values_;
};

}  // namespace hch
