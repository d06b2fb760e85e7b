#include "hierctrl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "hierctrl/errors.hpp"

namespace hierctrl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sigma_raw(double x, double beta, double xc) {
  return x * (1.0 - x) * std::exp(-beta * (x - xc) * (x - xc));
}

// d/dx of the unnormalized bump.
double sigma_raw_dx(double x, double beta, double xc) {
  double e = std::exp(-beta * (x - xc) * (x - xc));
  return e * ((1.0 - 2.0 * x) - 2.0 * beta * (x - xc) * x * (1.0 - x));
}

}  // namespace

SigmaFunction build_sigma(const Grid& g, const RegionMask& omega_0) {
  int lo = omega_0.first(), hi = omega_0.last();
  if (lo <= 0 || hi >= g.n_x + 1 || lo < 0)
    throw RegionError("build_sigma: omega_0 must be nonempty and strictly interior");
  double xc = 0.5 * (g.x(lo) + g.x(hi));

  // Tune beta until sigma_x has exactly one descending sign change across the
  // nodes and it happens inside omega_0. A zero derivative exactly at a node
  // is acceptable only inside omega_0 (the symmetric case xc = 1/2 puts the
  // critical point on a node).
  double beta = 1.0;
  bool ok = false;
  int bracket_lo = -1, bracket_hi = -1;
  for (int attempt = 0; attempt < 60; ++attempt) {
    bool zero_outside = false;
    int changes = 0;
    int prev_sign = 0, prev_idx = -1;
    bracket_lo = bracket_hi = -1;
    for (int i = 0; i <= g.n_x + 1; ++i) {
      double d = sigma_raw_dx(g.x(i), beta, xc);
      int s = (d > 0.0) - (d < 0.0);
      if (s == 0) {
        if (i < lo || i > hi) zero_outside = true;
        continue;
      }
      if (prev_sign > 0 && s < 0) {
        ++changes;
        bracket_lo = prev_idx;
        bracket_hi = i;
      } else if (prev_sign < 0 && s > 0) {
        changes += 2;  // a second extremum; disqualifies this beta
      }
      prev_sign = s;
      prev_idx = i;
    }
    // the critical point lies in (x(bracket_lo), x(bracket_hi)) - or exactly
    // on the zero node between them - and must fall within omega_0's nodes
    bool in_cell = bracket_hi - bracket_lo == 1 && bracket_lo >= lo && bracket_hi <= hi;
    bool on_node =
        bracket_hi - bracket_lo == 2 && bracket_lo + 1 >= lo && bracket_lo + 1 <= hi;
    if (!zero_outside && changes == 1 && (in_cell || on_node)) {
      ok = true;
      break;
    }
    beta *= 1.6;
  }
  if (!ok)
    throw InternalError("build_sigma: could not place the critical point inside omega_0 for " +
                        omega_0.label);

  // critical point by bisection on sigma_x inside the bracket
  double a = g.x(bracket_lo), b = g.x(bracket_hi);
  for (int it = 0; it < 100; ++it) {
    double m = 0.5 * (a + b);
    (sigma_raw_dx(m, beta, xc) > 0.0 ? a : b) = m;
  }
  double x_star = 0.5 * (a + b);

  SigmaFunction s;
  s.beta = beta;
  s.x_critical = x_star;
  s.values.resize(g.n_nodes());
  s.dx_values.resize(g.n_nodes());
  double node_max = 0.0;
  for (int i = 0; i < g.n_nodes(); ++i) {
    s.values[i] = sigma_raw(g.x(i), beta, xc);
    node_max = std::max(node_max, s.values[i]);
  }
  for (int i = 0; i < g.n_nodes(); ++i) {
    s.values[i] /= node_max;
    s.dx_values[i] = sigma_raw_dx(g.x(i), beta, xc) / node_max;
  }
  s.max_value = 1.0;
  return s;
}

CarlemanParameters carleman_parameters(const DiffusionCoefficient& k,
                                       const std::vector<double>& sigma_values) {
  double smax = 0.0;
  for (double v : sigma_values) smax = std::max(smax, v);
  if (!(smax > 0.0)) throw ConfigError("carleman_parameters: ||sigma||_inf must be positive");
  double k1 = k.k1();
  double c = k1 * (2.0 - k.tau);

  CarlemanParameters p;
  p.sigma_max = smax;
  p.r = 1.1 * (4.0 * std::log(2.0) / smax);
  p.d = 1.1 * (5.0 / c);
  double e2 = std::exp(2.0 * p.r * smax);
  double e1 = std::exp(p.r * smax);
  p.lambda_lo = c * (e2 - 1.0) / (p.d * c - 1.0);
  p.lambda_hi = 4.0 * (e2 - e1) / (3.0 * p.d);
  if (!(p.lambda_lo < p.lambda_hi)) {
    throw InternalError("carleman_parameters: empty lambda interval [" +
                        std::to_string(p.lambda_lo) + ", " + std::to_string(p.lambda_hi) + "]");
  }
  p.lambda = 0.5 * (p.lambda_lo + p.lambda_hi);
  return p;
}

double WeightSet::theta(int n) const { return std::exp(log_theta[n]); }
double WeightSet::theta_tilde(int n) const { return std::exp(log_theta_tilde[n]); }

double WeightSet::phi_w(int n, int i) const {
  // delta < 0, so +inf * delta = -inf at the endpoints as intended
  return std::isinf(log_theta[n]) ? -kInf : theta(n) * delta[i];
}

double WeightSet::Phi(int n, int i) const {
  return std::isinf(log_theta[n]) ? -kInf : theta(n) * Psi[i];
}

double WeightSet::phi_w_tilde(int n, int i) const {
  return std::isinf(log_theta_tilde[n]) ? -kInf : theta_tilde(n) * delta[i];
}

double WeightSet::eta(int n, int i) const {
  return std::exp(log_theta[n] + params.r * sigma.values[i]);
}

double WeightSet::kappa(int n) const { return std::exp(log_kappa[n]); }

double WeightSet::log_carleman_phi(int m, int n, int i) const {
  if (std::isinf(log_theta[n])) return -kInf;
  return m * log_theta[n] + 2.0 * s * theta(n) * delta[i];
}

double WeightSet::log_carleman_Phi(int m, int n, int i) const {
  if (std::isinf(log_theta[n])) return -kInf;
  return m * log_theta[n] + 2.0 * s * theta(n) * Psi[i];
}

double WeightSet::log_carleman_phi_tilde(int m, int n, int i) const {
  if (std::isinf(log_theta_tilde[n])) return -kInf;
  return m * log_theta_tilde[n] + 2.0 * s * theta_tilde(n) * delta[i];
}

double WeightSet::log_eta_hat_inv_sq(int n, int i) const {
  return 3.0 * log_theta_tilde[n] + log_x2_over_k[i] + 2.0 * s * phi_w_tilde(n, i);
}

WeightSet build_weights(const Grid& g, const DiffusionCoefficient& k, const SigmaFunction& sigma,
                        const CarlemanParameters& params, double s) {
  if (!(s > 0.0)) throw ConfigError("build_weights: need s > 0");
  WeightSet w;
  w.grid = g;
  w.sigma = sigma;
  w.params = params;
  w.s = s;

  // delta(x) = lambda (int_0^x y/k(y) dy - d); closed form for power-law k,
  // cumulative midpoint quadrature otherwise (the integrand y^{1-alpha} is
  // bounded near 0 for the weakly degenerate range).
  w.delta.resize(g.n_nodes());
  if (k.is_power_law()) {
    double e = 2.0 - k.alpha;
    for (int i = 0; i < g.n_nodes(); ++i)
      w.delta[i] = params.lambda * (std::pow(g.x(i), e) / e - params.d);
  } else {
    double acc = 0.0;
    w.delta[0] = params.lambda * (0.0 - params.d);
    for (int i = 1; i < g.n_nodes(); ++i) {
      double m = 0.5 * (g.x(i - 1) + g.x(i));
      acc += g.dx * (m / k.k(m));
      w.delta[i] = params.lambda * (acc - params.d);
    }
  }

  w.Psi.resize(g.n_nodes());
  double e2rs = std::exp(2.0 * params.r * params.sigma_max);
  for (int i = 0; i < g.n_nodes(); ++i)
    w.Psi[i] = std::exp(params.r * sigma.values[i]) - e2rs;

  w.log_theta.resize(g.n_levels());
  w.log_theta_tilde.resize(g.n_levels());
  for (int n = 0; n <= g.n_t; ++n) {
    double t = g.t(n);
    w.log_theta[n] = (n == 0 || n == g.n_t) ? kInf : -4.0 * std::log(t * (g.T - t));
    double tt = std::max(t, 0.5 * g.T);  // Theta-tilde freezes the first half
    w.log_theta_tilde[n] = (n == g.n_t) ? kInf : -4.0 * std::log(tt * (g.T - tt));
  }

  // min over x of phi_tilde = Theta_tilde * min delta; delta is increasing so
  // the min sits at x=0.
  double delta_min = w.delta[0];
  w.phi_hat.resize(g.n_levels());
  w.log_kappa.resize(g.n_levels());
  for (int n = 0; n <= g.n_t; ++n) {
    w.phi_hat[n] = std::isinf(w.log_theta_tilde[n]) ? -kInf
                                                    : std::exp(w.log_theta_tilde[n]) * delta_min;
    w.log_kappa[n] = s * w.phi_hat[n];
  }

  w.log_x2_over_k.resize(g.n_nodes());
  w.log_x2_over_k[0] = -kInf;
  for (int i = 1; i < g.n_nodes(); ++i) {
    double x = g.x(i);
    w.log_x2_over_k[i] = 2.0 * std::log(x) - std::log(k.k(x));
  }
  return w;
}

double hardy_poincare_ratio(const Grid& g, const std::vector<double>& z,
                            const DiffusionCoefficient& k) {
  if (std::abs(z[0]) > 0.0)
    throw ConfigError("hardy_poincare_ratio: z(0) must vanish");
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= g.n_x; ++j) {
    double m = 0.5 * (g.x(j) + g.x(j + 1));
    double km = k.k(m);
    double zm = 0.5 * (z[j] + z[j + 1]);
    double dz = (z[j + 1] - z[j]) / g.dx;
    num += g.dx * (km / (m * m)) * zm * zm;
    den += g.dx * km * dz * dz;
  }
  if (den == 0.0) throw ConfigError("hardy_poincare_ratio: undefined ratio for z == 0");
  return num / den;
}

void write_weights_csv(std::ostream& os, const WeightSet& w) {
  os << "t,x,Theta,phi_w,Phi,kappa,eta_hat_inv_sq\n";
  const Grid& g = w.grid;
  char buf[200];
  for (int n = 0; n <= g.n_t; ++n)
    for (int i = 0; i <= g.n_x + 1; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.t(n),
                    g.x(i), w.theta(n), w.phi_w(n, i), w.Phi(n, i), w.kappa(n),
                    std::exp(w.log_eta_hat_inv_sq(n, i)));
      os << buf;
    }
}

}  // namespace hierctrl
