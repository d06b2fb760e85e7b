#include "hierctrl/solver.hpp"

#include <cmath>
#include <vector>

#include "hierctrl/errors.hpp"

namespace hierctrl {

namespace {

// Thomas solve of (I + dt L^{level}) u = rhs on the interior nodes.
// Scratch vectors are caller-provided so trajectory loops do not allocate.
void step_solve(const ParabolicOperator& op, int level, double dt,
                const std::vector<double>& rhs, std::vector<double>& u, std::vector<double>& cw,
                std::vector<double>& dw) {
  int n = op.grid().n_x;
  double b0 = 1.0 + dt * op.diag(level, 0);
  cw[0] = (n > 1) ? dt * op.off(0) / b0 : 0.0;
  dw[0] = rhs[0] / b0;
  for (int i = 1; i < n; ++i) {
    double a = dt * op.off(i - 1);
    double b = 1.0 + dt * op.diag(level, i);
    double c = (i + 1 < n) ? dt * op.off(i) : 0.0;
    double m = b - a * cw[i - 1];
    if (m == 0.0) throw SolveError("tridiagonal step is singular", 0.0, level);
    cw[i] = c / m;
    dw[i] = (rhs[i] - a * dw[i - 1]) / m;
  }
  u[n - 1] = dw[n - 1];
  for (int i = n - 2; i >= 0; --i) u[i] = dw[i] - cw[i] * u[i + 1];
}

// One Crank-Nicolson step: (I + dt/2 L) u = (I - dt/2 L) prev + dt f_avg.
void cn_rhs(const ParabolicOperator& op, int level_prev, double dt,
            const std::vector<double>& prev, std::vector<double>& rhs) {
  int n = op.grid().n_x;
  for (int i = 0; i < n; ++i) {
    double lz = op.diag(level_prev, i) * prev[i + 1];
    if (i > 0) lz += op.off(i - 1) * prev[i];
    if (i + 1 < n) lz += op.off(i) * prev[i + 2];
    rhs[i] = prev[i + 1] - 0.5 * dt * lz;
  }
}

}  // namespace

Field solve_forward(const ParabolicOperator& op, const std::vector<double>& g0, const Field& f,
                    Scheme scheme) {
  const Grid& g = op.grid();
  Field z(g);
  z.set_slice(0, g0);
  int n = g.n_x;
  std::vector<double> rhs(n), u(n), cw(n), dw(n), prev(g.n_nodes());
  prev = z.slice(0);
  for (int m = 1; m <= g.n_t; ++m) {
    if (scheme == Scheme::BackwardEuler) {
      for (int i = 0; i < n; ++i) rhs[i] = prev[i + 1] + g.dt * f.at(m, i + 1);
      step_solve(op, m, g.dt, rhs, u, cw, dw);
    } else {
      cn_rhs(op, m - 1, g.dt, prev, rhs);
      for (int i = 0; i < n; ++i) rhs[i] += 0.5 * g.dt * (f.at(m, i + 1) + f.at(m - 1, i + 1));
      step_solve(op, m, 0.5 * g.dt, rhs, u, cw, dw);
    }
    for (int i = 0; i < n; ++i) {
      z.at(m, i + 1) = u[i];
      prev[i + 1] = u[i];
    }
  }
  return z;
}

Field solve_backward(const ParabolicOperator& op, const std::vector<double>& w_T, const Field& s,
                     Scheme scheme) {
  const Grid& g = op.grid();
  Field w(g);
  w.set_slice(g.n_t, w_T);
  int n = g.n_x;
  std::vector<double> rhs(n), u(n), cw(n), dw(n), prev(g.n_nodes());
  prev = w.slice(g.n_t);
  for (int m = g.n_t - 1; m >= 0; --m) {
    // the step from m+1 down to m inverts the matrix of the forward step
    // m -> m+1, which keeps the chain an exact transpose
    if (scheme == Scheme::BackwardEuler) {
      for (int i = 0; i < n; ++i) rhs[i] = prev[i + 1] + g.dt * s.at(m, i + 1);
      step_solve(op, m + 1, g.dt, rhs, u, cw, dw);
    } else {
      cn_rhs(op, m + 1, g.dt, prev, rhs);
      for (int i = 0; i < n; ++i) rhs[i] += 0.5 * g.dt * (s.at(m, i + 1) + s.at(m + 1, i + 1));
      step_solve(op, m, 0.5 * g.dt, rhs, u, cw, dw);
    }
    for (int i = 0; i < n; ++i) {
      w.at(m, i + 1) = u[i];
      prev[i + 1] = u[i];
    }
  }
  return w;
}

std::vector<double> implicit_smooth(const ParabolicOperator& op, const std::vector<double>& u0,
                                    int steps) {
  const Grid& g = op.grid();
  int n = g.n_x;
  std::vector<double> rhs(n), u(n), cw(n), dw(n);
  std::vector<double> cur = u0;
  cur[0] = 0.0;
  cur[g.n_x + 1] = 0.0;
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < n; ++i) rhs[i] = cur[i + 1];
    step_solve(op, 1, g.dt, rhs, u, cw, dw);
    for (int i = 0; i < n; ++i) cur[i + 1] = u[i];
  }
  return cur;
}

double duality_check(const ParabolicOperator& op, const Field& f, const std::vector<double>& w_T) {
  const Grid& g = op.grid();
  Field zero_f(g);
  std::vector<double> zero_g(g.n_nodes(), 0.0);
  Field z = solve_forward(op, zero_g, f);
  Field w = solve_backward(op, w_T, zero_f);
  double lhs = ip_omega(g, z.slice(g.n_t), w_T);
  double rhs = dual_pairing(g, f, w);
  return std::abs(lhs - rhs);
}

}  // namespace hierctrl
