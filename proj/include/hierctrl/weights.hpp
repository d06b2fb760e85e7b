#pragma once

#include <vector>

#include "hierctrl/diffusion.hpp"
#include "hierctrl/field.hpp"
#include "hierctrl/grid.hpp"

namespace hierctrl {

// Auxiliary function sigma: C^2 on [0,1], vanishing at both ends, positive
// inside, with sigma_x != 0 at every node outside omega_0. Built as the bump
// x(1-x)exp(-beta(x-x_c)^2) with beta tuned until the single critical point
// falls inside omega_0, then normalized to unit node-max.
struct SigmaFunction {
  std::vector<double> values;     // at nodes, size n_x+2
  std::vector<double> dx_values;  // analytic derivative at nodes
  double max_value = 0.0;         // = max over nodes after normalization
  double beta = 0.0;
  double x_critical = 0.0;
};

SigmaFunction build_sigma(const Grid& g, const RegionMask& omega_0);

struct CarlemanParameters {
  double r = 0.0;
  double d = 0.0;
  double lambda = 0.0;
  double lambda_lo = 0.0;  // interval endpoints lambda was picked from
  double lambda_hi = 0.0;
  double sigma_max = 0.0;
};

// r and d at 1.1x their lower bounds r >= 4 ln2/||sigma||_inf,
// d >= 5/(k(1)(2-tau)); lambda = midpoint of the admissible interval.
CarlemanParameters carleman_parameters(const DiffusionCoefficient& k,
                                       const std::vector<double>& sigma_values);

// All weight functions sampled on the grid. Theta blows up at t in {0,T}, so
// everything built from it is stored through finite logs plus the convention
// that weighted products flush to zero at the endpoint levels (the
// exponential dominates any Theta power there). log_theta is +inf at levels 0
// and n_t; phi_w, Phi are -inf there; accessors below never form inf-inf.
struct WeightSet {
  Grid grid;
  SigmaFunction sigma;
  CarlemanParameters params;
  double s = 1.0;

  std::vector<double> delta;      // lambda*(int_0^x y/k dy - d), < 0 on [0,1]
  std::vector<double> Psi;        // e^{r sigma} - e^{2r||sigma||}, < 0
  std::vector<double> log_theta;  // per level; +inf at 0 and n_t
  std::vector<double> log_theta_tilde;  // truncated: constant on [0,T/2]
  std::vector<double> phi_hat;    // min_x phi_tilde(t,x) = theta_tilde * delta(0)
  std::vector<double> log_kappa;  // s * phi_hat; -inf at level n_t only
  std::vector<double> log_x2_over_k;  // per node; -inf at x=0

  double theta(int n) const;        // may be +inf at endpoints
  double theta_tilde(int n) const;  // +inf at level n_t only
  double phi_w(int n, int i) const;       // Theta*delta; -inf at endpoints
  double Phi(int n, int i) const;         // Theta*Psi;   -inf at endpoints
  double phi_w_tilde(int n, int i) const; // truncated variant
  double eta(int n, int i) const;         // Theta e^{r sigma}
  double kappa(int n) const;              // e^{s phi_hat}; underflows freely

  // log of Theta(t)^m e^{2 s phi(t,x)} with phi in {phi_w, Phi}; -inf at the
  // endpoint levels for any m >= 0 (limit of the product is 0).
  double log_carleman_phi(int m, int n, int i) const;
  double log_carleman_Phi(int m, int n, int i) const;
  // log of the truncated-weight product Theta_tilde^m e^{2 s phi_tilde}.
  double log_carleman_phi_tilde(int m, int n, int i) const;
  // log( 1/eta_hat^2 ) = 3 log Theta_tilde + log(x^2/k) + 2 s phi_tilde.
  double log_eta_hat_inv_sq(int n, int i) const;
};

WeightSet build_weights(const Grid& g, const DiffusionCoefficient& k, const SigmaFunction& sigma,
                        const CarlemanParameters& params, double s);

// [int (k/x^2) z^2 dx] / [int k z_x^2 dx] by cell-midpoint quadrature (the
// singular factor is never sampled at x=0). z given at nodes with z(0)=0.
double hardy_poincare_ratio(const Grid& g, const std::vector<double>& z,
                            const DiffusionCoefficient& k);

// CSV export, columns t,x,Theta,phi_w,Phi,kappa,eta_hat_inv_sq.
void write_weights_csv(std::ostream& os, const WeightSet& w);

}  // namespace hierctrl
