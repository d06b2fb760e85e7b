#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hierctrl/field.hpp"
#include "hierctrl/grid.hpp"

namespace hierctrl {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Resolved run configuration (JSON; // and /* */ comments are stripped by the
// parser). run_manifest.json embeds the resolved form and can be fed back as
// a config.
struct RunConfig {
  int n_x = 99;
  int n_t = 120;
  double T = 1.0;

  double alpha = 0.5;

  // constant unless one of the built-in expressions {"one_plus_x","one_plus_t"}
  double a0_const = 1.0;
  std::string a0_expr;  // empty = constant

  Interval omega{0.3, 0.5};
  Interval O{0.25, 0.6};
  Interval O_d{0.4, 0.8};

  double gamma = 1.0;
  double mu = 10.0;
  double follower_tol = 1e-9;

  double epsilon = 1e-2;
  std::vector<double> eps_list;  // used by sweep-eps; falls back to {epsilon}
  double leader_tol = 1e-9;
  double quartet_tol = 1e-11;
  double relaxation = 1.0;
  std::vector<double> gamma_list{1.0, 0.1, 0.01, 0.001};

  double s = 1.0;
  std::uint64_t seed = 1;

  // z_d built-in profiles: "gaussian" (space bump, constant in time),
  // "sine" (sin(pi x), constant in time), "separable" (e^{-t} * gaussian bump),
  // "zero".
  std::string z_d_profile = "gaussian";
  double z_d_amplitude = 1.0;
  double z_d_center = 0.6;
  double z_d_width = 0.1;

  int verify_samples = 100;

  std::string output_dir = "out";
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json(const RunConfig& c);

struct RegionSet {
  RegionMask omega, O, O_d;
  RegionMask omega_cap_Od;           // O_d ∩ omega
  RegionMask omega_0, omega_1, omega_2;  // nested inside O_d ∩ omega
};

// Interval -> node index sets; derives omega_2/omega_1/omega_0 by shrinking
// O_d ∩ omega by 1/2/3 node margins (nesting omega_0 ⋐ omega_1 ⋐ omega_2).
// Throws RegionError when an invariant fails or the intersection is thinner
// than 8 nodes.
RegionSet rasterize_regions(const RunConfig& c, const Grid& g);

Field build_z_d(const RunConfig& c, const Grid& g, const RegionMask& O_d);

}  // namespace hierctrl
