// Matrix-free Krylov solvers on modal coefficient vectors.
#pragma once

#include <functional>
#include <vector>

#include "hch/grid.hpp"

namespace hch::krylov {

using Operator = std::function<ModalField(const ModalField&)>;

struct CgResult {
  ModalField x;
  int iterations = 0;
  double residual = 0.0;  // ||b - J x||
  bool converged = false;
  bool negative_curvature = false;  // p^T J p <= 0 met; x holds the last iterate
};

/// Preconditioned conjugate gradients for symmetric J with diagonal
/// preconditioner M^{-1} = diag(inv_diag). Stops at ||r|| <= rel_tol ||b||.
CgResult pcg(const Operator& op, const std::vector<double>& inv_diag, const ModalField& b, double rel_tol,
             int max_iter);

struct EigenEstimate {
  double value = 0.0;
  ModalField vector;  // unit L2 norm
  int steps = 0;
};

/// Smallest eigenpair of a symmetric operator by Lanczos with full
/// reorthogonalization (deterministic start vector).
EigenEstimate lanczos_smallest(const Operator& op, const GridSpec& grid, int max_steps);

}  // namespace hch::krylov
