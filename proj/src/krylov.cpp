#include "hch/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace hch::krylov {
namespace {

double dot(const ModalField& a, const ModalField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const ModalField& x, ModalField& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

CgResult pcg(const Operator& op, const std::vector<double>& inv_diag, const ModalField& b, double rel_tol,
             int max_iter) {
  CgResult res;
  res.x = ModalField(b.grid());
  ModalField r(b);
  const double bnorm = std::sqrt(dot(b, b));
  res.residual = bnorm;
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  ModalField z(r);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] *= inv_diag[i];
  ModalField p(z);
  double rz = dot(r, z);
  for (int it = 0; it < max_iter; ++it) {
    const ModalField jp = op(p);
    const double curvature = dot(p, jp);
    if (!(curvature > 0.0)) {
      res.negative_curvature = true;
      return res;
    }
    const double alpha = rz / curvature;
    axpy(alpha, p, res.x);
    axpy(-alpha, jp, r);
    res.iterations = it + 1;
    res.residual = std::sqrt(dot(r, r));
    if (res.residual <= rel_tol * bnorm) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

EigenEstimate lanczos_smallest(const Operator& op, const GridSpec& grid, int max_steps) {
  const int dim = static_cast<int>(grid.size());
  const int m_max = std::min(max_steps, dim);
  std::vector<ModalField> basis;
  std::vector<double> alpha, beta;

  ModalField q(grid);
  // Deterministic start with weight on every mode.
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = 1.0 / (1.0 + 0.37 * static_cast<double>(i % 13));
  q *= 1.0 / std::sqrt(dot(q, q));

  for (int k = 0; k < m_max; ++k) {
    basis.push_back(q);
    ModalField w = op(q);
    const double a = dot(q, w);
    alpha.push_back(a);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(-dot(b, w), b, w);
    const double bnext = std::sqrt(dot(w, w));
    if (k + 1 == m_max || bnext < 1e-12 * std::max(1.0, std::abs(a))) break;
    beta.push_back(bnext);
    q = w;
    q *= 1.0 / bnext;
  }

  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  EigenEstimate out;
  out.value = es.eigenvalues()(0);
  out.steps = m;
  out.vector = ModalField(grid);
  for (int i = 0; i < m; ++i) axpy(es.eigenvectors()(i, 0), basis[static_cast<std::size_t>(i)], out.vector);
  const double nrm = std::sqrt(dot(out.vector, out.vector));
  if (nrm > 0.0) out.vector *= 1.0 / nrm;
  return out;
}

}  // namespace hch::krylov
