#pragma once

#include <vector>

#include "hierctrl/field.hpp"
#include "hierctrl/follower.hpp"

namespace hierctrl {

// Outer (leader) problem: minimize
//   J_eps(h) = (1/(2 eps)) ||y(T,.;h,v^gamma(h),0)||^2_Omega + (1/2)||h||^2_{omega_T}
// with the follower reacting optimally to every h.
struct LeaderProblem {
  FollowerProblem follower;
  double epsilon = 1e-2;
  double follower_tol = 1e-11;
  int follower_max_iter = 20000;
  double quartet_tol = 1e-11;
  int quartet_max_iter = 100;
  double relaxation = 1.0;  // fixed Picard relaxation in (0,1]
};

struct AdjointQuartet {
  Field rho, psi, phi_adj, zeta;
  int fp_iterations = 0;
  double fp_residual = 0.0;
};

// Picard iteration for the coupled adjoint quartet with terminal data rho_T:
//   phi_adj = solve_forward(0, -(1/mu) rho chi_O)
//   zeta    = solve_backward(0, (1/sqrt(gamma)) phi_adj chi_Od)
//   psi     = solve_forward(zeta(0)/sqrt(gamma), 0)
//   rho     = solve_backward(rho_T, (psi + phi_adj) chi_Od)
// relaxed by prob.relaxation. The coupling strength scales like
// (1/mu)(1 + 1/gamma); for tiny mu*gamma the map expands and the iteration
// aborts with a SolveError advising larger mu or gamma. mu = +inf is accepted
// and decouples the system (single pass).
AdjointQuartet adjoint_quartet_solve(const LeaderProblem& prob, const std::vector<double>& rho_T);

struct LeaderStateResult {
  std::vector<double> terminal;  // y(T,.)
  FollowerSolution follower_sol;
};

// h -> y(T,.;h,v^gamma(h),0); affine in h.
LeaderStateResult leader_state_map(const LeaderProblem& prob, const Field& h);

double eval_J_eps(const LeaderProblem& prob, const Field& h);

// Exact discrete gradient h - rho|_{omega_T} with rho from the quartet at
// terminal data -y(T)/eps.
Field grad_J_eps(const LeaderProblem& prob, const Field& h);

struct LeaderDiagnostics {
  double norm_yT = 0.0;
  double norm_yT_sq = 0.0;
  double norm_h = 0.0;
  double J_eps = 0.0;
  double stationarity = 0.0;       // ||h - rho||_{omega_T}
  double identity_residual = 0.0;  // |(||h||^2 + ||yT||^2/eps) - <z_d, phi_adj>_{Od_T}| / scale
  int outer_iterations = 0;
  // finite iff (1/kappa) z_d is square-summable on the grid; +inf otherwise
  double kappa_weighted_zd = 0.0;
  bool kappa_weight_warning = false;
};

struct LeaderSolution {
  Field h;
  LeaderDiagnostics diag;
};

// CG on the quadratic J_eps; the Hessian apply runs one inner follower solve
// (z_d = 0) and one quartet solve per iteration. The optional weights enable
// the (1/kappa) z_d admissibility report.
LeaderSolution solve_null_control(const LeaderProblem& prob, double tol = 1e-9,
                                  int max_iter = 400, const struct WeightSet* weights = nullptr);

struct EpsSweepRow {
  double epsilon = 0.0;
  double norm_h = 0.0;
  double norm_yT_sq = 0.0;
  double J_eps = 0.0;
  int outer_iters = 0;
  double stationarity = 0.0;
  double identity_residual = 0.0;
};

std::vector<EpsSweepRow> epsilon_sweep(const LeaderProblem& prob,
                                       const std::vector<double>& eps_list, double tol = 1e-9,
                                       int max_iter = 400);

}  // namespace hierctrl
