#include <doctest.h>

#include <cmath>

#include "hierctrl/config.hpp"
#include "hierctrl/errors.hpp"

using namespace hierctrl;

TEST_CASE("config: defaults and overrides") {
  RunConfig c = parse_config(R"({
    // comments are allowed
    "grid": {"n_x": 49, "n_t": 60, "T": 2.0},
    "diffusion": {"alpha": 0.3},
    "a0": 0.5,
    "follower": {"gamma": 0.5, "mu": 2.0, "tol": 1e-8},
    "leader": {"epsilon": 1e-3, "eps_list": [1e-1, 1e-2], "tol": 1e-8},
    "weights": {"s": 2.0, "seed": 42},
    "z_d": {"profile": "separable", "amplitude": 2.0},
    "output_dir": "results"
  })");
  CHECK(c.n_x == 49);
  CHECK(c.n_t == 60);
  CHECK(c.T == 2.0);
  CHECK(c.alpha == 0.3);
  CHECK(c.a0_const == 0.5);
  CHECK(c.gamma == 0.5);
  CHECK(c.mu == 2.0);
  CHECK(c.epsilon == 1e-3);
  CHECK(c.eps_list.size() == 2);
  CHECK(c.s == 2.0);
  CHECK(c.seed == 42);
  CHECK(c.z_d_profile == "separable");
  CHECK(c.output_dir == "results");
  // untouched fields keep defaults
  CHECK(c.omega.lo == 0.3);
  CHECK(c.quartet_tol == 1e-11);
}

TEST_CASE("config: parse and validation errors") {
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n_x": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"diffusion": {"alpha": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"follower": {"mu": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"z_d": {"profile": "nope"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"a0": "unknown_expr"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"regions": {"omega": [0.5, 0.3]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"leader": {"relaxation": 0.0}})"), ConfigError);
}

TEST_CASE("config: json round trip") {
  RunConfig c;
  c.n_x = 33;
  c.alpha = 0.7;
  c.z_d_profile = "sine";
  c.eps_list = {1e-1, 1e-3};
  RunConfig back = parse_config(config_to_json(c));
  CHECK(back.n_x == 33);
  CHECK(back.alpha == 0.7);
  CHECK(back.z_d_profile == "sine");
  CHECK(back.eps_list == c.eps_list);
}

TEST_CASE("rasterize_regions: nesting on the documented example") {
  RunConfig c;
  c.n_x = 199;
  c.omega = {0.3, 0.5};
  c.O = {0.25, 0.6};
  c.O_d = {0.4, 0.8};
  Grid g = build_grid(c.n_x, 4, 1.0);
  RegionSet r = rasterize_regions(c, g);

  CHECK(r.omega.count() > 0);
  CHECK(strict_subset(r.omega, r.O));
  CHECK(r.omega_cap_Od.count() >= 8);
  CHECK(compact_subset(r.omega_0, r.omega_1, 1));
  CHECK(compact_subset(r.omega_1, r.omega_2, 1));
  CHECK(compact_subset(r.omega_2, r.omega_cap_Od, 1));
}

TEST_CASE("rasterize_regions: invariant violations") {
  Grid g = build_grid(99, 4, 1.0);
  {
    RunConfig c;
    c.omega = {0.3, 0.5};
    c.O = {0.3, 0.5};  // omega == O violates strictness
    CHECK_THROWS_AS(rasterize_regions(c, g), RegionError);
  }
  {
    RunConfig c;
    c.omega = {0.1, 0.2};
    c.O = {0.05, 0.3};
    c.O_d = {0.6, 0.9};  // disjoint from omega
    CHECK_THROWS_AS(rasterize_regions(c, g), RegionError);
  }
  {
    RunConfig c;  // defaults give a wide overlap; a tiny grid starves it
    Grid tiny = build_grid(12, 4, 1.0);
    c.omega = {0.3, 0.5};
    c.O = {0.25, 0.6};
    c.O_d = {0.45, 0.8};
    CHECK_THROWS_AS(rasterize_regions(c, tiny), RegionError);
  }
}

TEST_CASE("z_d profiles vanish outside the observation region") {
  RunConfig c;
  c.n_x = 99;
  Grid g = build_grid(c.n_x, 8, 1.0);
  RegionSet r = rasterize_regions(c, g);
  for (const char* prof : {"gaussian", "sine", "separable", "zero"}) {
    c.z_d_profile = prof;
    Field z = build_z_d(c, g, r.O_d);
    bool any = false;
    for (int n = 0; n <= g.n_t; ++n)
      for (int i = 0; i <= g.n_x + 1; ++i) {
        if (!r.O_d.indicator[i]) CHECK(z.at(n, i) == 0.0);
        any = any || z.at(n, i) != 0.0;
      }
    if (std::string(prof) != "zero") CHECK(any);
  }
  // separable decays in time like e^{-t}
  c.z_d_profile = "separable";
  Field z = build_z_d(c, g, r.O_d);
  int i0 = r.O_d.first();
  CHECK(z.at(g.n_t, i0) ==
        doctest::Approx(std::exp(-g.T) * z.at(0, i0)).epsilon(1e-12));
}

TEST_CASE("manifest round trip: feeding it back reproduces the config") {
  RunConfig c;
  c.n_x = 41;
  c.seed = 99;
  std::string manifest = std::string("{\"version\": \"x\", \"seed\": 7, \"config\": ") +
                         config_to_json(c) + "}";
  RunConfig back = parse_config(manifest);
  CHECK(back.n_x == 41);
  CHECK(back.seed == 7);  // manifest seed wins
}
