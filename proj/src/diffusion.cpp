#include "hierctrl/diffusion.hpp"

#include <cmath>
#include <string>

#include "hierctrl/errors.hpp"

namespace hierctrl {

DiffusionCoefficient make_power_diffusion(double alpha) {
  if (alpha < 0.0 || alpha >= 1.0) {
    throw ConfigError("make_power_diffusion: alpha=" + std::to_string(alpha) +
                      " outside [0,1); the strongly degenerate range needs a Neumann "
                      "condition at x=0 and is unsupported");
  }
  DiffusionCoefficient k;
  k.alpha = alpha;
  k.tau = alpha;
  if (alpha == 0.0) {
    k.k = [](double) { return 1.0; };
    k.k_prime = [](double) { return 0.0; };
  } else {
    k.k = [alpha](double x) { return std::pow(x, alpha); };
    k.k_prime = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); };
  }
  return k;
}

DiffusionCoefficient make_diffusion(std::function<double(double)> k,
                                    std::function<double(double)> k_prime, double tau) {
  if (tau < 0.0 || tau >= 1.0) throw ConfigError("make_diffusion: tau outside [0,1)");
  DiffusionCoefficient d;
  d.k = std::move(k);
  d.k_prime = std::move(k_prime);
  d.tau = tau;
  return d;
}

}  // namespace hierctrl
