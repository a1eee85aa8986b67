#include <cassert>
#include <cmath>
#include <limits>

#include "bbmwave/linalg.hpp"

namespace bbmwave {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "maximum iterations exceeded";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

namespace {

constexpr double kBreakdown = 1e-30;

struct Setup {
  Vector inv_diag;
  Vector x;
  double b_norm = 0.0;
  std::size_t max_iterations = 0;
};

Setup prepare(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options,
              std::span<const double> x0, const char* name) {
  if (a.rows() != a.cols()) throw LinalgError(std::string(name) + ": matrix is not square");
  if (b.size() != a.rows()) throw LinalgError(std::string(name) + ": right-hand side has wrong length");
  if (!x0.empty() && x0.size() != a.rows()) throw LinalgError(std::string(name) + ": initial guess has wrong length");
  Setup s;
  s.inv_diag = a.diagonal();
  for (auto& d : s.inv_diag) d = d != 0.0 ? 1.0 / d : 1.0;
  s.x = x0.empty() ? Vector(a.rows(), 0.0) : Vector(x0.begin(), x0.end());
  s.b_norm = norm2(b);
  s.max_iterations = options.max_iterations != 0 ? options.max_iterations : 10 * a.rows();
  return s;
}

void residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, Vector& r) {
  spmv(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

SolveResult zero_rhs(std::size_t n) { return {Vector(n, 0.0), 0, 0.0, SolveStatus::converged}; }

}  // namespace

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options,
                     std::span<const double> x0) {
  auto s = prepare(a, b, options, x0, "cg_solve");
  assert(is_symmetric(a, 1e-12));
  const std::size_t n = a.rows();
  if (s.b_norm == 0.0) return zero_rhs(n);
  const double target = options.tolerance * s.b_norm;

  Vector r(n), z(n), p(n), q(n);
  residual(a, b, s.x, r);
  double r_norm = norm2(r);
  Vector best = s.x;
  double best_norm = r_norm;
  std::size_t it = 0;

  if (r_norm > target) {
    for (std::size_t i = 0; i < n; ++i) z[i] = s.inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    while (it < s.max_iterations) {
      ++it;
      spmv(a, p, q);
      const double pq = dot(p, q);
      if (!(std::abs(pq) > 0.0)) break;
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < n; ++i) {
        s.x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      r_norm = norm2(r);
      if (r_norm < best_norm) {
        best_norm = r_norm;
        best = s.x;
      }
      if (r_norm <= target) {
        // Confirm against the true residual; restart from x if the recurrence drifted.
        residual(a, b, s.x, r);
        r_norm = norm2(r);
        best_norm = r_norm;
        best = s.x;
        if (r_norm <= target) break;
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = s.inv_diag[i] * r[i];
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
  }

  residual(a, b, best, r);
  const double rel = norm2(r) / s.b_norm;
  const auto status = rel <= options.tolerance ? SolveStatus::converged : SolveStatus::max_iterations;
  return {std::move(best), it, rel, status};
}

SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options,
                           std::span<const double> x0) {
  auto s = prepare(a, b, options, x0, "bicgstab_solve");
  const std::size_t n = a.rows();
  if (s.b_norm == 0.0) return zero_rhs(n);
  const double target = options.tolerance * s.b_norm;

  Vector r(n), r_hat(n), p(n, 0.0), v(n, 0.0), p_hat(n), s_vec(n), s_hat(n), t(n);
  residual(a, b, s.x, r);
  double r_norm = norm2(r);
  Vector best = s.x;
  double best_norm = r_norm;
  std::size_t it = 0;
  bool broke_down = false;

  // Outer loop restarts from the current iterate when the recurrence residual
  // claims convergence but the true residual disagrees.
  while (r_norm > target && it < s.max_iterations && !broke_down) {
    r_hat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    const double r_hat_norm = norm2(r_hat);

    while (it < s.max_iterations) {
      ++it;
      const double rho_next = dot(r_hat, r);
      if (std::abs(rho_next) < kBreakdown * r_hat_norm * norm2(r)) {
        broke_down = true;
        break;
      }
      const double beta = (rho_next / rho) * (alpha / omega);
      rho = rho_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      for (std::size_t i = 0; i < n; ++i) p_hat[i] = s.inv_diag[i] * p[i];
      spmv(a, p_hat, v);
      const double rv = dot(r_hat, v);
      if (!(std::abs(rv) > 0.0)) {
        broke_down = true;
        break;
      }
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s_vec[i] = r[i] - alpha * v[i];
      const double s_norm = norm2(s_vec);
      if (s_norm <= target) {
        for (std::size_t i = 0; i < n; ++i) s.x[i] += alpha * p_hat[i];
        r = s_vec;
        r_norm = s_norm;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) s_hat[i] = s.inv_diag[i] * s_vec[i];
      spmv(a, s_hat, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s_vec) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s.x[i] += alpha * p_hat[i] + omega * s_hat[i];
        r[i] = s_vec[i] - omega * t[i];
      }
      r_norm = norm2(r);
      if (r_norm < best_norm) {
        best_norm = r_norm;
        best = s.x;
      }
      if (r_norm <= target) break;
      if (std::abs(omega) < kBreakdown) {
        broke_down = true;
        break;
      }
    }

    residual(a, b, s.x, r);
    r_norm = norm2(r);
    if (r_norm < best_norm || r_norm <= target) {
      best_norm = r_norm;
      best = s.x;
    }
  }

  residual(a, b, best, r);
  const double rel = norm2(r) / s.b_norm;
  SolveStatus status = SolveStatus::converged;
  if (rel > options.tolerance) status = broke_down ? SolveStatus::breakdown : SolveStatus::max_iterations;
  return {std::move(best), it, rel, status};
}

}  // namespace bbmwave
