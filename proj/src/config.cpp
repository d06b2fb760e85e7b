#include "hierctrl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hierctrl/errors.hpp"

namespace hierctrl {

using nlohmann::json;

namespace {

Interval parse_interval(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("config field '" + name + "' must be a [lo, hi] pair");
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (!(0.0 <= iv.lo && iv.lo < iv.hi && iv.hi <= 1.0))
    throw ConfigError("config field '" + name + "' must satisfy 0 <= lo < hi <= 1");
  return iv;
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void apply(const json& j, RunConfig& c) {
  if (j.contains("grid")) {
    const json& g = j["grid"];
    read_if(g, "n_x", c.n_x);
    read_if(g, "n_t", c.n_t);
    read_if(g, "T", c.T);
  }
  if (j.contains("diffusion")) read_if(j["diffusion"], "alpha", c.alpha);
  if (j.contains("a0")) {
    if (j["a0"].is_number()) {
      c.a0_const = j["a0"].get<double>();
      c.a0_expr.clear();
    } else if (j["a0"].is_string()) {
      c.a0_expr = j["a0"].get<std::string>();
      if (c.a0_expr != "one_plus_x" && c.a0_expr != "one_plus_t")
        throw ConfigError("config a0: unknown expression id '" + c.a0_expr +
                          "' (use a number, \"one_plus_x\" or \"one_plus_t\")");
    } else {
      throw ConfigError("config a0 must be a number or an expression id string");
    }
  }
  if (j.contains("regions")) {
    const json& r = j["regions"];
    if (r.contains("omega")) c.omega = parse_interval(r["omega"], "regions.omega");
    if (r.contains("O")) c.O = parse_interval(r["O"], "regions.O");
    if (r.contains("O_d")) c.O_d = parse_interval(r["O_d"], "regions.O_d");
  }
  if (j.contains("follower")) {
    const json& f = j["follower"];
    read_if(f, "gamma", c.gamma);
    read_if(f, "mu", c.mu);
    read_if(f, "tol", c.follower_tol);
  }
  if (j.contains("leader")) {
    const json& l = j["leader"];
    read_if(l, "epsilon", c.epsilon);
    if (l.contains("eps_list")) c.eps_list = l["eps_list"].get<std::vector<double>>();
    read_if(l, "tol", c.leader_tol);
    read_if(l, "quartet_tol", c.quartet_tol);
    read_if(l, "relaxation", c.relaxation);
  }
  if (j.contains("sweep")) read_if(j["sweep"], "gamma_list", c.gamma_list);
  if (j.contains("weights")) {
    const json& w = j["weights"];
    read_if(w, "s", c.s);
    read_if(w, "seed", c.seed);
  }
  if (j.contains("z_d")) {
    const json& z = j["z_d"];
    read_if(z, "profile", c.z_d_profile);
    read_if(z, "amplitude", c.z_d_amplitude);
    read_if(z, "center", c.z_d_center);
    read_if(z, "width", c.z_d_width);
  }
  if (j.contains("verify")) read_if(j["verify"], "samples", c.verify_samples);
  read_if(j, "output_dir", c.output_dir);
}

void validate(const RunConfig& c) {
  if (c.n_x < 4 || c.n_t < 4 || !(c.T > 0.0)) throw ConfigError("config: invalid grid sizes");
  if (!(c.alpha >= 0.0 && c.alpha < 1.0))
    throw ConfigError("config: diffusion.alpha must lie in [0,1)");
  for (double tol : {c.follower_tol, c.leader_tol, c.quartet_tol})
    if (!(tol > 0.0)) throw ConfigError("config: tolerances must be positive");
  if (!(c.gamma > 0.0) || !(c.mu > 0.0)) throw ConfigError("config: gamma and mu must be positive");
  if (!(c.epsilon > 0.0)) throw ConfigError("config: leader.epsilon must be positive");
  for (double e : c.eps_list)
    if (!(e > 0.0)) throw ConfigError("config: eps_list entries must be positive");
  if (!(c.s > 0.0)) throw ConfigError("config: weights.s must be positive");
  if (!(c.relaxation > 0.0 && c.relaxation <= 1.0))
    throw ConfigError("config: leader.relaxation must lie in (0,1]");
  if (c.verify_samples < 1) throw ConfigError("config: verify.samples must be >= 1");
  static const char* profiles[] = {"gaussian", "sine", "separable", "zero"};
  bool found = false;
  for (auto* p : profiles) found = found || (c.z_d_profile == p);
  if (!found) throw ConfigError("config: unknown z_d.profile '" + c.z_d_profile + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  // a manifest carries the resolved config under "config"
  const json& body = (j.contains("config") && j.contains("version")) ? j["config"] : j;
  RunConfig c;
  try {
    apply(body, c);
    if (j.contains("seed") && j.contains("version")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"n_x", c.n_x}, {"n_t", c.n_t}, {"T", c.T}};
  j["diffusion"] = {{"alpha", c.alpha}};
  if (c.a0_expr.empty())
    j["a0"] = c.a0_const;
  else
    j["a0"] = c.a0_expr;
  j["regions"] = {{"omega", {c.omega.lo, c.omega.hi}},
                  {"O", {c.O.lo, c.O.hi}},
                  {"O_d", {c.O_d.lo, c.O_d.hi}}};
  j["follower"] = {{"gamma", c.gamma}, {"mu", c.mu}, {"tol", c.follower_tol}};
  j["leader"] = {{"epsilon", c.epsilon},
                 {"eps_list", c.eps_list},
                 {"tol", c.leader_tol},
                 {"quartet_tol", c.quartet_tol},
                 {"relaxation", c.relaxation}};
  j["sweep"] = {{"gamma_list", c.gamma_list}};
  j["weights"] = {{"s", c.s}, {"seed", c.seed}};
  j["z_d"] = {{"profile", c.z_d_profile},
              {"amplitude", c.z_d_amplitude},
              {"center", c.z_d_center},
              {"width", c.z_d_width}};
  j["verify"] = {{"samples", c.verify_samples}};
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

RegionSet rasterize_regions(const RunConfig& c, const Grid& g) {
  RegionSet r;
  r.omega = mask_from_interval(g, c.omega.lo, c.omega.hi, "omega");
  r.O = mask_from_interval(g, c.O.lo, c.O.hi, "O");
  r.O_d = mask_from_interval(g, c.O_d.lo, c.O_d.hi, "O_d");

  if (!strict_subset(r.omega, r.O))
    throw RegionError("regions: omega must be strictly contained in O");
  r.omega_cap_Od = intersect(r.omega, r.O_d, "omega_cap_Od");
  if (r.omega_cap_Od.count() == 0)
    throw RegionError("regions: O_d and omega must intersect");
  if (r.omega_cap_Od.count() < 8)
    throw RegionError("regions: O_d ∩ omega has fewer than 8 nodes; refine grid or widen regions");

  r.omega_2 = shrink(r.omega_cap_Od, 1, "omega_2");
  r.omega_1 = shrink(r.omega_cap_Od, 2, "omega_1");
  r.omega_0 = shrink(r.omega_cap_Od, 3, "omega_0");
  if (r.omega_0.count() == 0)
    throw RegionError("regions: omega_0 empty after nesting margins; refine grid or widen regions");
  return r;
}

Field build_z_d(const RunConfig& c, const Grid& g, const RegionMask& O_d) {
  Field z(g);
  double w2 = c.z_d_width * c.z_d_width;
  for (int n = 0; n <= g.n_t; ++n) {
    double t = g.t(n);
    for (int i = 1; i <= g.n_x; ++i) {
      if (!O_d.indicator[i]) continue;
      double x = g.x(i);
      double v = 0.0;
      if (c.z_d_profile == "gaussian") {
        v = c.z_d_amplitude * std::exp(-(x - c.z_d_center) * (x - c.z_d_center) / w2);
      } else if (c.z_d_profile == "sine") {
        v = c.z_d_amplitude * std::sin(M_PI * x);
      } else if (c.z_d_profile == "separable") {
        v = c.z_d_amplitude * std::exp(-t) *
            std::exp(-(x - c.z_d_center) * (x - c.z_d_center) / w2);
      } else {  // zero
        v = 0.0;
      }
      z.at(n, i) = v;
    }
  }
  return z;
}

}  // namespace hierctrl
