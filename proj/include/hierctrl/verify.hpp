#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hierctrl/leader.hpp"
#include "hierctrl/weights.hpp"

namespace hierctrl {

struct InequalityReport {
  std::string name;
  int samples = 0;
  double max_ratio = 0.0;
  std::vector<double> ratios;
  std::optional<double> bound;  // paper constant when explicit
  bool passed = false;
  int skipped = 0;
  double s = 0.0;  // Carleman parameter the run used (failures at small s are
                   // expected, not bugs)
  std::string note;
};

// Hardy ratios over random admissible z (random polynomials times x), bound
// 4/(1-theta)^2 with theta = the power-law exponent.
InequalityReport check_hardy(const Grid& g, const DiffusionCoefficient& k, int n_samples,
                             std::uint64_t seed);

// Random terminal data for the quartet samples: Gaussian node values smoothed
// by two implicit diffusion steps, boundary-zeroed.
std::vector<double> random_smooth_terminal(const ParabolicOperator& op, std::uint64_t seed);

// LHS = int_{omega'_T} (rho_x^2 + varrho_x^2) e^{2s phi},
// RHS = int_{omega1_T} s^2 Theta^2 (rho^2 + varrho^2) e^{2s phi};
// both sides share one log-shift so the ratio survives the extreme weights.
InequalityReport check_caccioppoli(const LeaderProblem& prob, const WeightSet& w,
                                   const RegionMask& omega_prime, const RegionMask& omega_1,
                                   int n_samples, std::uint64_t seed);

// ratio = [int kappa^2 |phi_adj|^2 + int eta_hat^{-2} |rho|^2] / int_{omega_T} |rho|^2.
// An exactly-zero denominator with a positive numerator is a hard failure.
InequalityReport check_observability(const LeaderProblem& prob, const WeightSet& w,
                                     const RegionMask& omega, int n_samples, std::uint64_t seed);

// Single-sample ratio used by check_observability; exposed for direct tests
// of the hard-failure path.
double observability_ratio(const Grid& g, const WeightSet& w, const RegionMask& omega,
                           const Field& rho, const Field& phi_adj);

// Pointwise weight orderings (4/3)Phi <= phi_w <= Phi, 2Phi <= phi_w on all
// of Q, and on [alpha_cut,1]: e^{2s phi} <= e^{2s Phi},
// (x^2/k) e^{2s phi} <= C e^{2s Phi}, k e^{2s phi} <= C e^{2s Phi}.
InequalityReport check_weight_orderings(const WeightSet& w, const DiffusionCoefficient& k,
                                        double alpha_cut);

}  // namespace hierctrl
