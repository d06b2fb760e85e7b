#include "hierctrl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hierctrl/errors.hpp"
#include "hierctrl/solver.hpp"

namespace hierctrl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

InequalityReport check_hardy(const Grid& g, const DiffusionCoefficient& k, int n_samples,
                             std::uint64_t seed) {
  if (!k.is_power_law() || k.alpha >= 1.0)
    throw ConfigError("check_hardy: needs a power-law coefficient with exponent < 1");
  double theta = k.alpha;
  InequalityReport rep;
  rep.name = "hardy_poincare";
  rep.bound = 4.0 / ((1.0 - theta) * (1.0 - theta));
  rep.samples = n_samples;
  rep.s = 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int sidx = 0; sidx < n_samples; ++sidx) {
    double a[5];
    for (double& c : a) c = coeff(rng);
    std::vector<double> z(g.n_nodes(), 0.0);
    bool all_zero = true;
    for (int i = 0; i < g.n_nodes(); ++i) {
      double x = g.x(i);
      double p = a[0] + x * (a[1] + x * (a[2] + x * (a[3] + x * a[4])));
      z[i] = x * p;
      if (z[i] != 0.0) all_zero = false;
    }
    if (all_zero) {
      ++rep.skipped;
      continue;
    }
    rep.ratios.push_back(hardy_poincare_ratio(g, z, k));
  }
  rep.max_ratio = rep.ratios.empty() ? 0.0
                                     : *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.passed = rep.max_ratio <= *rep.bound;
  return rep;
}

std::vector<double> random_smooth_terminal(const ParabolicOperator& op, std::uint64_t seed) {
  const Grid& g = op.grid();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(g.n_nodes(), 0.0);
  for (int i = 1; i <= g.n_x; ++i) u[i] = normal(rng);
  u = implicit_smooth(op, u, 2);
  u[0] = 0.0;
  u[g.n_x + 1] = 0.0;
  return u;
}

namespace {

double node_gradient(const Field& f, const Grid& g, int n, int i) {
  return (f.at(n, i + 1) - f.at(n, i - 1)) / (2.0 * g.dx);
}

}  // namespace

InequalityReport check_caccioppoli(const LeaderProblem& prob, const WeightSet& w,
                                   const RegionMask& omega_prime, const RegionMask& omega_1,
                                   int n_samples, std::uint64_t seed) {
  if (!compact_subset(omega_prime, omega_1, 1))
    throw RegionError("check_caccioppoli: omega' must be compactly inside omega_1");
  const Grid& g = prob.follower.op.grid();
  InequalityReport rep;
  rep.name = "caccioppoli";
  rep.samples = n_samples;
  rep.s = w.s;

  for (int sidx = 0; sidx < n_samples; ++sidx) {
    std::vector<double> rho_T = random_smooth_terminal(prob.follower.op, seed + sidx);
    if (norm_omega(g, rho_T) == 0.0) {
      ++rep.skipped;
      continue;
    }
    AdjointQuartet qr = adjoint_quartet_solve(prob, rho_T);
    Field varrho = qr.psi + qr.phi_adj;

    // shared log shift so the extreme Carleman weights cancel in the ratio
    double shift = kNegInf;
    for (int n = 1; n < g.n_t; ++n)
      for (int i = 1; i <= g.n_x; ++i) {
        if (omega_1.indicator[i])
          shift = std::max(shift, w.log_carleman_phi(2, n, i));
        if (omega_prime.indicator[i])
          shift = std::max(shift, w.log_carleman_phi(0, n, i));
      }
    if (!std::isfinite(shift)) {
      ++rep.skipped;
      continue;
    }
    double lhs = 0.0, rhs = 0.0;
    for (int n = 1; n < g.n_t; ++n) {
      for (int i = 1; i <= g.n_x; ++i) {
        if (omega_prime.indicator[i]) {
          double gx_rho = node_gradient(qr.rho, g, n, i);
          double gx_var = node_gradient(varrho, g, n, i);
          lhs += (gx_rho * gx_rho + gx_var * gx_var) *
                 std::exp(w.log_carleman_phi(0, n, i) - shift);
        }
        if (omega_1.indicator[i]) {
          double r2 = qr.rho.at(n, i) * qr.rho.at(n, i) + varrho.at(n, i) * varrho.at(n, i);
          rhs += w.s * w.s * r2 * std::exp(w.log_carleman_phi(2, n, i) - shift);
        }
      }
    }
    if (rhs == 0.0) {
      ++rep.skipped;
      continue;
    }
    rep.ratios.push_back(lhs / rhs);
  }
  rep.max_ratio = rep.ratios.empty() ? 0.0
                                     : *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.passed = std::isfinite(rep.max_ratio);
  return rep;
}

double observability_ratio(const Grid& g, const WeightSet& w, const RegionMask& omega,
                           const Field& rho, const Field& phi_adj) {
  // log-sum-exp over both numerator pieces; denominator is unweighted
  double lmax = kNegInf;
  auto term1 = [&](int n, int i) {
    double v = phi_adj.at(n, i);
    return v == 0.0 ? kNegInf : 2.0 * w.log_kappa[n] + 2.0 * std::log(std::abs(v));
  };
  auto term2 = [&](int n, int i) {
    double v = rho.at(n, i);
    return v == 0.0 ? kNegInf : w.log_eta_hat_inv_sq(n, i) + 2.0 * std::log(std::abs(v));
  };
  for (int n = 1; n < g.n_t; ++n)
    for (int i = 1; i <= g.n_x; ++i) lmax = std::max({lmax, term1(n, i), term2(n, i)});

  double den = 0.0;
  for (int n = 1; n <= g.n_t; ++n)
    for (int i = 1; i <= g.n_x; ++i)
      if (omega.indicator[i]) den += rho.at(n, i) * rho.at(n, i);
  den *= g.dt * g.dx;

  if (lmax == kNegInf) return 0.0;  // numerator exactly zero
  if (den == 0.0) {
    throw InternalError(
        "observability_ratio: rho vanishes on omega_T while the weighted energy is positive "
        "(contradicts unique continuation)");
  }
  double acc = 0.0;
  for (int n = 1; n < g.n_t; ++n)
    for (int i = 1; i <= g.n_x; ++i) {
      double t1 = term1(n, i), t2 = term2(n, i);
      if (std::isfinite(t1)) acc += std::exp(t1 - lmax);
      if (std::isfinite(t2)) acc += std::exp(t2 - lmax);
    }
  double log_num = lmax + std::log(acc * g.dt * g.dx);
  return std::exp(log_num - std::log(den));
}

InequalityReport check_observability(const LeaderProblem& prob, const WeightSet& w,
                                     const RegionMask& omega, int n_samples, std::uint64_t seed) {
  const Grid& g = prob.follower.op.grid();
  InequalityReport rep;
  rep.name = "observability";
  rep.samples = n_samples;
  rep.s = w.s;
  for (int sidx = 0; sidx < n_samples; ++sidx) {
    std::vector<double> rho_T = random_smooth_terminal(prob.follower.op, seed + sidx);
    if (norm_omega(g, rho_T) == 0.0) {
      ++rep.skipped;
      continue;
    }
    AdjointQuartet qr = adjoint_quartet_solve(prob, rho_T);
    rep.ratios.push_back(observability_ratio(g, w, omega, qr.rho, qr.phi_adj));
  }
  rep.max_ratio = rep.ratios.empty() ? 0.0
                                     : *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.passed = std::isfinite(rep.max_ratio);
  return rep;
}

InequalityReport check_weight_orderings(const WeightSet& w, const DiffusionCoefficient& k,
                                        double alpha_cut) {
  const Grid& g = w.grid;
  InequalityReport rep;
  rep.name = "weight_orderings";
  rep.samples = (g.n_t - 1) * g.n_x;
  rep.s = w.s;
  rep.passed = true;

  // (4/3)Phi <= phi_w <= Phi and 2Phi <= phi_w, equivalent to the x-wise
  // comparisons times Theta > 0; checked on the full interior grid anyway.
  double worst = 0.0;
  int worst_n = -1, worst_i = -1;
  for (int n = 1; n < g.n_t; ++n) {
    for (int i = 0; i <= g.n_x + 1; ++i) {
      double phi = w.phi_w(n, i), Phi = w.Phi(n, i);
      double v1 = (4.0 / 3.0) * Phi - phi;         // <= 0 required
      double v2 = phi - Phi;                       // <= 0
      double v3 = 2.0 * Phi - phi;                 // <= 0
      double bad = std::max({v1, v2, v3});
      if (bad > worst) {
        worst = bad;
        worst_n = n;
        worst_i = i;
      }
    }
  }
  if (worst > 0.0) {
    rep.passed = false;
    rep.note = "ordering violated, worst node (t,x)=(" + std::to_string(g.t(worst_n)) + "," +
               std::to_string(g.x(worst_i)) + ") by " + std::to_string(worst);
    return rep;
  }

  // kappa(t)^2 <= e^{2 s phi_tilde(t,x)}
  for (int n = 0; n < g.n_t; ++n)
    for (int i = 0; i <= g.n_x + 1; ++i)
      if (2.0 * w.log_kappa[n] > 2.0 * w.s * w.phi_w_tilde(n, i) + 1e-12) rep.passed = false;

  // restricted bounds on [alpha_cut, 1]: reported constants
  double c_x2k = kNegInf, c_k = kNegInf, sup7 = kNegInf;
  for (int n = 1; n < g.n_t; ++n) {
    for (int i = 1; i <= g.n_x + 1; ++i) {
      double gap = 2.0 * w.s * (w.phi_w(n, i) - w.Phi(n, i));  // <= 0
      if (g.x(i) >= alpha_cut) {
        c_x2k = std::max(c_x2k, w.log_x2_over_k[i] + gap);
        c_k = std::max(c_k, std::log(k.k(g.x(i))) + gap);
      }
      sup7 = std::max(sup7, 7.0 * w.log_theta[n] + 2.0 * w.s * (2.0 * w.Phi(n, i) - w.phi_w(n, i)));
    }
  }
  double C1 = std::exp(c_x2k), C2 = std::exp(c_k), S7 = std::exp(sup7);
  if (!std::isfinite(S7)) rep.passed = false;
  rep.ratios = {C1, C2, S7};
  rep.max_ratio = std::max({C1, C2, S7});
  rep.note = "C(x^2/k e^{2s phi} <= C e^{2s Phi})=" + std::to_string(C1) +
             ", C(k e^{2s phi} <= C e^{2s Phi})=" + std::to_string(C2) +
             ", sup Theta^7 e^{2s(2Phi-phi)}=" + std::to_string(S7) +
             ", alpha_cut=" + std::to_string(alpha_cut);
  return rep;
}

}  // namespace hierctrl
