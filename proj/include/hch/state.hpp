#pragma once

#include "hch/grid.hpp"

namespace hch {

/// Phase-space point U = (u, u_t) at time t.
struct State {
  ModalField u;
  ModalField v;
  double time = 0.0;

  State() = default;
  State(ModalField u_, ModalField v_, double t = 0.0) : u(std::move(u_)), v(std::move(v_)), time(t) {
    u.require_same_grid(v);
  }
  static State zero(const GridSpec& grid, double t = 0.0) { return {ModalField(grid), ModalField(grid), t}; }

  const GridSpec& grid() const { return u.grid(); }

  friend bool operator==(const State&, const State&) = default;
};

}  // namespace hch
