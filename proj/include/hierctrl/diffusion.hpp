#pragma once

#include <functional>

namespace hierctrl {

// Degenerate diffusion coefficient: k(0)=0, k>0 on (0,1], with
// x k'(x) <= tau k(x) on [0,1] for some tau in [0,1).
struct DiffusionCoefficient {
  std::function<double(double)> k;
  std::function<double(double)> k_prime;
  double tau = 0.0;
  // Power-law exponent when k(x)=x^alpha; negative means "not a power law"
  // (closed forms for the delta-weight integral and fitted faces then fall
  // back to quadrature / midpoint sampling).
  double alpha = -1.0;

  bool is_power_law() const { return alpha >= 0.0; }
  double k1() const { return k(1.0); }
};

// k(x) = x^alpha with 0 <= alpha < 1 (weakly degenerate). alpha >= 1 is the
// strongly degenerate range and needs a Neumann condition at x=0; rejected.
DiffusionCoefficient make_power_diffusion(double alpha);

// Wrap a general coefficient; hypothesis values are the caller's claim.
DiffusionCoefficient make_diffusion(std::function<double(double)> k,
                                    std::function<double(double)> k_prime, double tau);

}  // namespace hierctrl
