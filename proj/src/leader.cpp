#include "hierctrl/leader.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hierctrl/errors.hpp"
#include "hierctrl/solver.hpp"
#include "hierctrl/weights.hpp"

namespace hierctrl {

namespace {
constexpr double kTiny = 1e-300;
}

AdjointQuartet adjoint_quartet_solve(const LeaderProblem& prob, const std::vector<double>& rho_T) {
  const FollowerProblem& fp = prob.follower;
  const Grid& g = fp.op.grid();
  if (!(prob.quartet_tol > 0.0)) throw ConfigError("adjoint_quartet_solve: quartet_tol <= 0");
  if (!(prob.relaxation > 0.0 && prob.relaxation <= 1.0))
    throw ConfigError("adjoint_quartet_solve: relaxation must lie in (0,1]");

  double imu = std::isinf(fp.mu) ? 0.0 : 1.0 / fp.mu;
  double isg = fp.inv_sqrt_gamma();
  std::vector<double> zero(g.n_nodes(), 0.0);
  Field zero_f(g);

  // conditioning: iterate on the unit-scaled terminal data, rescale at the end
  double scale = norm_omega(g, rho_T);
  AdjointQuartet out;
  if (scale == 0.0) {
    out.rho = Field(g);
    out.psi = Field(g);
    out.phi_adj = Field(g);
    out.zeta = Field(g);
    return out;
  }
  std::vector<double> rT = rho_T;
  for (auto& v : rT) v /= scale;

  auto sweep = [&](const Field& rho, Field& phi, Field& zeta, Field& psi) {
    phi = solve_forward(fp.op, zero, (-imu) * masked(shift_up(rho), fp.O));
    zeta = solve_backward(fp.op, zero, isg * masked(shift_down(phi), fp.O_d));
    std::vector<double> psi0 = zeta.slice(0);
    for (auto& v : psi0) v *= isg;
    psi = solve_forward(fp.op, psi0, zero_f);
  };

  Field rho = solve_backward(fp.op, rT, zero_f);
  Field phi(g), zeta(g), psi(g);
  double res_min = std::numeric_limits<double>::infinity();
  double res = 0.0;
  double om = prob.relaxation;
  double norm0 = std::max(norm_fwd(g, rho), 1.0);
  int it = 0;
  while (true) {
    if (it >= prob.quartet_max_iter) {
      throw SolveError(
          "adjoint_quartet_solve: Picard did not converge within " +
              std::to_string(prob.quartet_max_iter) +
              " iterations (coupling too strong for mu=" + std::to_string(fp.mu) +
              ", gamma=" + std::to_string(fp.gamma) + "); increase mu or gamma",
          res, it);
    }
    sweep(rho, phi, zeta, psi);
    Field rho_raw = solve_backward(fp.op, rT, masked(shift_down(psi + phi), fp.O_d));
    Field rho_next = (1.0 - om) * rho + om * rho_raw;
    Field diff = rho_next - rho;
    double num = norm_fwd(g, diff);
    double den = std::max(norm_fwd(g, rho_next), kTiny);
    res = num / den;
    ++it;
    rho = rho_next;
    // under expansion the relative residual saturates while the iterate norm
    // explodes, so divergence is detected on either signal
    if (!std::isfinite(res) || norm_fwd(g, rho) > 1e8 * norm0 ||
        (it >= 3 && res > 10.0 * res_min)) {
      throw SolveError(
          "adjoint_quartet_solve: Picard iteration diverging (mu*gamma too small: mu=" +
              std::to_string(fp.mu) + ", gamma=" + std::to_string(fp.gamma) +
              "); increase mu or gamma",
          res, it);
    }
    res_min = std::min(res_min, res);
    if (res <= prob.quartet_tol) break;
  }
  // make the returned quartet self-consistent with the final rho
  sweep(rho, phi, zeta, psi);

  out.rho = scale * rho;
  out.phi_adj = scale * phi;
  out.zeta = scale * zeta;
  out.psi = scale * psi;
  out.fp_iterations = it;
  out.fp_residual = res;
  return out;
}

LeaderStateResult leader_state_map(const LeaderProblem& prob, const Field& h) {
  LeaderStateResult r;
  r.follower_sol = solve_lowregret(prob.follower, h, prob.follower_tol, prob.follower_max_iter);
  r.terminal = r.follower_sol.y.slice(prob.follower.op.grid().n_t);
  return r;
}

double eval_J_eps(const LeaderProblem& prob, const Field& h) {
  const Grid& g = prob.follower.op.grid();
  if (!(prob.epsilon > 0.0)) throw ConfigError("eval_J_eps: epsilon must be positive");
  LeaderStateResult r = leader_state_map(prob, h);
  double yT2 = ip_omega(g, r.terminal, r.terminal);
  double h2 = ip_fwd(g, h, h, &prob.follower.omega);
  return 0.5 / prob.epsilon * yT2 + 0.5 * h2;
}

namespace {

// rho from the quartet at terminal -yT/eps, lifted to the leader gradient slot.
Field adjoint_control_term(const LeaderProblem& prob, const std::vector<double>& yT) {
  std::vector<double> rT(yT);
  for (auto& v : rT) v *= -1.0 / prob.epsilon;
  AdjointQuartet q = adjoint_quartet_solve(prob, rT);
  return masked(shift_up(q.rho), prob.follower.omega);
}

}  // namespace

Field grad_J_eps(const LeaderProblem& prob, const Field& h) {
  LeaderStateResult r = leader_state_map(prob, h);
  return h - adjoint_control_term(prob, r.terminal);
}

LeaderSolution solve_null_control(const LeaderProblem& prob, double tol, int max_iter,
                                  const WeightSet* weights) {
  const Grid& g = prob.follower.op.grid();
  const RegionMask& w = prob.follower.omega;
  if (!(tol > 0.0)) throw ConfigError("solve_null_control: tol must be positive");
  if (!(prob.epsilon > 0.0)) throw ConfigError("solve_null_control: epsilon must be positive");

  LeaderProblem lin = prob;  // homogeneous inner problem for Hessian applies
  lin.follower.z_d = Field(g);
  auto hess = [&](const Field& dir) {
    LeaderStateResult st = leader_state_map(lin, dir);
    return dir - adjoint_control_term(lin, st.terminal);
  };

  Field h(g);
  // b = -grad(0): the affine part comes from z_d alone
  LeaderStateResult base = leader_state_map(prob, h);
  Field b = adjoint_control_term(prob, base.terminal);

  double b_norm = norm_fwd(g, b, &w);
  int it = 0;
  if (b_norm > 0.0) {
    Field r = b;
    Field p = r;
    double rr = ip_fwd(g, r, r, &w);
    while (std::sqrt(rr) > tol * std::max(b_norm, kTiny)) {
      if (it >= max_iter)
        throw SolveError("solve_null_control: CG did not converge", std::sqrt(rr) / b_norm, it);
      Field Hp = hess(p);
      double pHp = ip_fwd(g, p, Hp, &w);
      if (!(pHp > 0.0))
        throw SolveError("solve_null_control: curvature lost", std::sqrt(rr) / b_norm, it);
      double alpha = rr / pHp;
      h = h + alpha * p;
      r = r - alpha * Hp;
      ++it;
      double rr_new = ip_fwd(g, r, r, &w);
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
  }

  // diagnostics from fresh solves at the converged h
  LeaderSolution out;
  out.h = h;
  LeaderStateResult fin = leader_state_map(prob, h);
  std::vector<double> rT(fin.terminal);
  for (auto& v : rT) v *= -1.0 / prob.epsilon;
  AdjointQuartet q = adjoint_quartet_solve(prob, rT);
  Field rho_w = masked(shift_up(q.rho), w);

  out.diag.norm_yT = norm_omega(g, fin.terminal);
  out.diag.norm_yT_sq = out.diag.norm_yT * out.diag.norm_yT;
  out.diag.norm_h = norm_fwd(g, h, &w);
  out.diag.J_eps = 0.5 / prob.epsilon * out.diag.norm_yT_sq + 0.5 * out.diag.norm_h * out.diag.norm_h;
  out.diag.stationarity = norm_fwd(g, h - rho_w, &w);
  out.diag.outer_iterations = it;

  double lhs = out.diag.norm_h * out.diag.norm_h + out.diag.norm_yT_sq / prob.epsilon;
  double rhs = ip_fwd(g, prob.follower.z_d, q.phi_adj, &prob.follower.O_d);
  out.diag.identity_residual = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kTiny});

  if (weights != nullptr) {
    // log-space evaluation of ||(1/kappa) z_d||_{L2(Od_T)}
    double lmax = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= g.n_t; ++n)
      for (int i = 1; i <= g.n_x; ++i) {
        if (!prob.follower.O_d.indicator[i]) continue;
        double zd = prob.follower.z_d.at(n, i);
        if (zd == 0.0) continue;
        lmax = std::max(lmax, 2.0 * (std::log(std::abs(zd)) - weights->log_kappa[n]));
      }
    if (std::isinf(lmax) && lmax > 0.0) {
      out.diag.kappa_weighted_zd = std::numeric_limits<double>::infinity();
    } else if (std::isinf(lmax)) {
      out.diag.kappa_weighted_zd = 0.0;  // z_d == 0 on Od_T
    } else {
      double acc = 0.0;
      for (int n = 1; n <= g.n_t; ++n)
        for (int i = 1; i <= g.n_x; ++i) {
          if (!prob.follower.O_d.indicator[i]) continue;
          double zd = prob.follower.z_d.at(n, i);
          if (zd == 0.0) continue;
          acc += std::exp(2.0 * (std::log(std::abs(zd)) - weights->log_kappa[n]) - lmax);
        }
      double log_sq = lmax + std::log(acc * g.dt * g.dx);
      out.diag.kappa_weighted_zd = std::exp(0.5 * log_sq);  // inf on overflow
    }
    out.diag.kappa_weight_warning = !std::isfinite(out.diag.kappa_weighted_zd) &&
                                    out.diag.kappa_weighted_zd > 0.0;
  }
  return out;
}

std::vector<EpsSweepRow> epsilon_sweep(const LeaderProblem& prob,
                                       const std::vector<double>& eps_list, double tol,
                                       int max_iter) {
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("epsilon_sweep: eps_list must be strictly decreasing");
  std::vector<EpsSweepRow> rows;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ConfigError("epsilon_sweep: eps must be positive");
    LeaderProblem p = prob;
    p.epsilon = eps;
    LeaderSolution sol = solve_null_control(p, tol, max_iter);
    EpsSweepRow row;
    row.epsilon = eps;
    row.norm_h = sol.diag.norm_h;
    row.norm_yT_sq = sol.diag.norm_yT_sq;
    row.J_eps = sol.diag.J_eps;
    row.outer_iters = sol.diag.outer_iterations;
    row.stationarity = sol.diag.stationarity;
    row.identity_residual = sol.diag.identity_residual;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hierctrl
