#pragma once

#include <functional>
#include <vector>

#include "hierctrl/field.hpp"
#include "hierctrl/operator.hpp"

namespace hierctrl {

// Data of the inner (follower) problem: for a fixed leader control h, find
// the control v on O_T minimizing
//   J^gamma(v) = ||y - z_d||^2_{Od_T} + mu ||v||^2_{O_T}
//                - ||z_d||^2_{Od_T} + (1/gamma) ||S(0,.)||^2_Omega.
// gamma = +inf is accepted and zeroes the 1/sqrt(gamma) couplings (classical
// tracking limit).
struct FollowerProblem {
  ParabolicOperator op;
  RegionMask omega;  // leader support
  RegionMask O;      // follower support
  RegionMask O_d;    // observation region
  Field z_d;         // zero outside O_d
  double gamma = 1.0;
  double mu = 1.0;

  double inv_sqrt_gamma() const;
};

struct FollowerChain {
  Field y, S, p, q;
};

// Sequential evaluation of the state chain for a given v (and the problem's
// h): y forward from v*chi_O + h*chi_omega; S backward from y*chi_Od;
// p forward from S(0)/sqrt(gamma); q backward from (y - z_d + p/sqrt(gamma))*chi_Od.
FollowerChain chain_solve(const FollowerProblem& prob, const Field& v, const Field& h);

double eval_J_gamma(const FollowerProblem& prob, const Field& v, const Field& h);

// Exact discrete gradient 2(mu v + q_shifted) chi_O, with q from chain_solve;
// exact because the backward solver is the transpose of the forward chain.
Field grad_J_gamma(const FollowerProblem& prob, const Field& v, const Field& h);

struct FollowerSolution {
  Field v;
  Field y, S, p, q;
  double J_gamma_value = 0.0;
  double residual = 0.0;  // ||mu v + q||_{O_T} / max(1, ||q||_{O_T})
  int iterations = 0;
  double vgamma_empirical_C = 0.0;  // ||v|| / max(||z_d|| + ||h||, tiny)
};

// Conjugate gradient on the quadratic J^gamma (Hessian 2(mu I + compact)),
// matrix-free through chain_solve. Deterministic: v starts at zero.
// The optional callback sees every iterate (used by tests to track J).
FollowerSolution solve_lowregret(const FollowerProblem& prob, const Field& h, double tol = 1e-8,
                                 int max_iter = 2000,
                                 const std::function<void(int, const Field&)>& on_iterate = {});

// Relative residual of the decomposition identity
//   J(h;v,g) = J(0;0,g) + J(h;v,0) - ||z_d||^2 + 2 <g, S(0,.)>_Omega,
// evaluated by three independent PDE solves.
double decomposition_check(const FollowerProblem& prob, const std::vector<double>& g,
                           const Field& v, const Field& h);

struct GammaSweepRow {
  double gamma = 0.0;
  double norm_v = 0.0;
  double norm_S0 = 0.0;
  double norm_S0_over_sqrt_gamma = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

std::vector<GammaSweepRow> gamma_sweep(const FollowerProblem& prob, const Field& h,
                                       const std::vector<double>& gammas, double tol = 1e-9,
                                       int max_iter = 20000);

}  // namespace hierctrl
