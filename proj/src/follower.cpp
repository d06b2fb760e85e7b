#include "hierctrl/follower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hierctrl/errors.hpp"
#include "hierctrl/solver.hpp"

namespace hierctrl {

double FollowerProblem::inv_sqrt_gamma() const {
  if (std::isinf(gamma)) return 0.0;
  if (!(gamma > 0.0)) throw ConfigError("FollowerProblem: gamma must be positive");
  return 1.0 / std::sqrt(gamma);
}

FollowerChain chain_solve(const FollowerProblem& prob, const Field& v, const Field& h) {
  const Grid& g = prob.op.grid();
  double isg = prob.inv_sqrt_gamma();
  std::vector<double> zero(g.n_nodes(), 0.0);
  Field zero_f(g);

  FollowerChain c;
  c.y = solve_forward(prob.op, zero, masked(v, prob.O) + masked(h, prob.omega));
  c.S = solve_backward(prob.op, zero, masked(shift_down(c.y), prob.O_d));
  std::vector<double> p0 = c.S.slice(0);
  for (auto& x : p0) x *= isg;
  c.p = solve_forward(prob.op, p0, zero_f);
  c.q = solve_backward(prob.op, zero,
                       masked(shift_down(c.y - prob.z_d + isg * c.p), prob.O_d));
  return c;
}

double eval_J_gamma(const FollowerProblem& prob, const Field& v, const Field& h) {
  const Grid& g = prob.op.grid();
  FollowerChain c = chain_solve(prob, v, h);
  Field r = c.y - prob.z_d;
  double track = ip_fwd(g, r, r, &prob.O_d);
  double cost = prob.mu * ip_fwd(g, v, v, &prob.O);
  double zd2 = ip_fwd(g, prob.z_d, prob.z_d, &prob.O_d);
  double s0 = ip_omega(g, c.S.slice(0), c.S.slice(0));
  double inv_gamma = std::isinf(prob.gamma) ? 0.0 : 1.0 / prob.gamma;
  return track + cost - zd2 + inv_gamma * s0;
}

Field grad_J_gamma(const FollowerProblem& prob, const Field& v, const Field& h) {
  FollowerChain c = chain_solve(prob, v, h);
  return 2.0 * masked(prob.mu * v + shift_up(c.q), prob.O);
}

namespace {

// ||mu v + q||_{O_T} with q lifted to the forward slots.
double stationarity_norm(const FollowerProblem& prob, const Field& v, const Field& q) {
  const Grid& g = prob.op.grid();
  Field r = prob.mu * v + shift_up(q);
  return norm_fwd(g, r, &prob.O);
}

}  // namespace

FollowerSolution solve_lowregret(const FollowerProblem& prob, const Field& h, double tol,
                                 int max_iter,
                                 const std::function<void(int, const Field&)>& on_iterate) {
  if (!(tol > 0.0)) throw ConfigError("solve_lowregret: tol must be positive");
  if (!(prob.mu > 0.0)) throw ConfigError("solve_lowregret: mu must be positive");
  const Grid& g = prob.op.grid();

  FollowerProblem lin = prob;  // homogeneous copy for Hessian applies
  lin.z_d = Field(g);
  Field zero_f(g);
  auto hess = [&](const Field& w) {
    FollowerChain c = chain_solve(lin, w, zero_f);
    return 2.0 * masked(prob.mu * w + shift_up(c.q), prob.O);
  };

  Field v(g);
  FollowerChain chain = chain_solve(prob, v, h);
  Field grad = 2.0 * masked(prob.mu * v + shift_up(chain.q), prob.O);
  Field r = -1.0 * grad;
  double qnorm = norm_fwd(g, chain.q, &prob.O);
  double denom = std::max(qnorm, 1e-300);

  auto current_residual = [&]() { return stationarity_norm(prob, v, chain.q) / denom; };

  FollowerSolution out;
  int it = 0;
  if (current_residual() <= tol || norm_fwd(g, r, &prob.O) == 0.0) {
    // zero data (or already stationary at v = 0)
  } else {
    Field p = r;
    double rr = ip_fwd(g, r, r, &prob.O);
    while (true) {
      if (it >= max_iter) {
        throw SolveError("solve_lowregret: CG did not reach tol=" + std::to_string(tol) +
                             " within " + std::to_string(max_iter) + " iterations",
                         current_residual(), it);
      }
      if (rr == 0.0) break;  // Krylov space exhausted at the exact minimizer
      Field Hp = hess(p);
      double pHp = ip_fwd(g, p, Hp, &prob.O);
      if (!(pHp > 0.0)) {
        throw SolveError("solve_lowregret: curvature lost (Hessian not SPD numerically)",
                         std::sqrt(rr), it);
      }
      double alpha = rr / pHp;
      v = v + alpha * p;
      r = r - alpha * Hp;
      ++it;
      if (on_iterate) on_iterate(it, v);
      double rr_new = ip_fwd(g, r, r, &prob.O);
      // ||r|| = ||grad(v)|| in exact arithmetic; the cheap test uses it, the
      // decisive test recomputes the chain.
      if (0.5 * std::sqrt(rr_new) <= tol * denom || it % 50 == 0) {
        chain = chain_solve(prob, v, h);
        qnorm = norm_fwd(g, chain.q, &prob.O);
        denom = std::max(qnorm, 1e-300);
        if (current_residual() <= tol) break;
        grad = 2.0 * masked(prob.mu * v + shift_up(chain.q), prob.O);
        r = -1.0 * grad;  // refresh against recurrence drift
        rr_new = ip_fwd(g, r, r, &prob.O);
        p = r;
        rr = rr_new;
        continue;
      }
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
  }

  out.v = v;
  out.y = chain.y;
  out.S = chain.S;
  out.p = chain.p;
  out.q = chain.q;
  out.iterations = it;
  out.residual = stationarity_norm(prob, v, chain.q) / std::max(1.0, qnorm);
  out.J_gamma_value = eval_J_gamma(prob, v, h);
  double scale = norm_fwd(g, prob.z_d, &prob.O_d) + norm_fwd(g, h, &prob.omega);
  out.vgamma_empirical_C = norm_fwd(g, v, &prob.O) / std::max(scale, 1e-300);
  return out;
}

double decomposition_check(const FollowerProblem& prob, const std::vector<double>& g0,
                           const Field& v, const Field& h) {
  const Grid& g = prob.op.grid();
  Field zero_f(g);
  std::vector<double> zero(g.n_nodes(), 0.0);

  auto J_of = [&](const Field& y, const Field& vv) {
    Field r = y - prob.z_d;
    return ip_fwd(g, r, r, &prob.O_d) + prob.mu * ip_fwd(g, vv, vv, &prob.O);
  };

  Field y_full = solve_forward(prob.op, g0, masked(v, prob.O) + masked(h, prob.omega));
  Field y_g = solve_forward(prob.op, g0, zero_f);
  Field y_vh = solve_forward(prob.op, zero, masked(v, prob.O) + masked(h, prob.omega));
  Field S = solve_backward(prob.op, zero, masked(shift_down(y_vh), prob.O_d));

  double J_hvg = J_of(y_full, v);
  double J_00g = J_of(y_g, zero_f);
  double J_hv0 = J_of(y_vh, v);
  double zd2 = ip_fwd(g, prob.z_d, prob.z_d, &prob.O_d);
  double cross = 2.0 * ip_omega(g, g0, S.slice(0));

  double lhs = J_hvg;
  double rhs = J_00g + J_hv0 - zd2 + cross;
  double scale = std::max({std::abs(J_hvg), std::abs(J_00g), std::abs(J_hv0), zd2,
                           std::abs(cross), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

std::vector<GammaSweepRow> gamma_sweep(const FollowerProblem& prob, const Field& h,
                                       const std::vector<double>& gammas, double tol,
                                       int max_iter) {
  for (std::size_t i = 1; i < gammas.size(); ++i)
    if (!(gammas[i] < gammas[i - 1]))
      throw ConfigError("gamma_sweep: gammas must be strictly decreasing");
  const Grid& g = prob.op.grid();
  std::vector<GammaSweepRow> rows;
  for (double ga : gammas) {
    if (!(ga > 0.0)) throw ConfigError("gamma_sweep: gammas must be positive");
    FollowerProblem p = prob;
    p.gamma = ga;
    FollowerSolution sol = solve_lowregret(p, h, tol, max_iter);
    GammaSweepRow row;
    row.gamma = ga;
    row.norm_v = norm_fwd(g, sol.v, &prob.O);
    row.norm_S0 = norm_omega(g, sol.S.slice(0));
    row.norm_S0_over_sqrt_gamma = row.norm_S0 / std::sqrt(ga);
    row.iterations = sol.iterations;
    row.residual = sol.residual;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hierctrl
