#include "hierctrl/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "hierctrl/errors.hpp"
#include "hierctrl/leader.hpp"
#include "hierctrl/solver.hpp"
#include "hierctrl/verify.hpp"
#include "hierctrl/weights.hpp"

namespace hierctrl {

using nlohmann::json;

const char* version_string() { return "hierctrl 0.1.0"; }

namespace {

namespace fs = std::filesystem;

struct Workspace {
  RunConfig cfg;
  Grid grid;
  RegionSet regions;
  DiffusionCoefficient k;
  ParabolicOperator op;
  Field z_d;
  FollowerProblem follower;
  LeaderProblem leader;
};

Workspace make_workspace(const RunConfig& c) {
  Workspace w;
  w.cfg = c;
  w.grid = build_grid(c.n_x, c.n_t, c.T);
  w.regions = rasterize_regions(c, w.grid);
  w.k = make_power_diffusion(c.alpha);
  if (c.a0_expr.empty()) {
    w.op = assemble_operator(w.grid, w.k, c.a0_const);
  } else {
    Field a0(w.grid);
    for (int n = 0; n <= w.grid.n_t; ++n)
      for (int i = 1; i <= w.grid.n_x; ++i)
        a0.at(n, i) = (c.a0_expr == "one_plus_x") ? 1.0 + w.grid.x(i) : 1.0 + w.grid.t(n);
    w.op = assemble_operator(w.grid, w.k, a0);
  }
  w.z_d = build_z_d(c, w.grid, w.regions.O_d);

  w.follower.op = w.op;
  w.follower.omega = w.regions.omega;
  w.follower.O = w.regions.O;
  w.follower.O_d = w.regions.O_d;
  w.follower.z_d = w.z_d;
  w.follower.gamma = c.gamma;
  w.follower.mu = c.mu;

  w.leader.follower = w.follower;
  w.leader.epsilon = c.epsilon;
  w.leader.follower_tol = std::min(c.follower_tol, c.leader_tol / 100.0);
  w.leader.quartet_tol = c.quartet_tol;
  w.leader.relaxation = c.relaxation;
  return w;
}

WeightSet make_weights(const Workspace& w) {
  SigmaFunction sigma = build_sigma(w.grid, w.regions.omega_0);
  CarlemanParameters params = carleman_parameters(w.k, sigma.values);
  return build_weights(w.grid, w.k, sigma, params, w.cfg.s);
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw InternalError("cannot write " + p.string());
  out << text;
}

json report_to_json(const InequalityReport& r) {
  json j{{"name", r.name},       {"samples", r.samples}, {"max_ratio", r.max_ratio},
         {"passed", r.passed},   {"skipped", r.skipped}, {"s", r.s},
         {"note", r.note}};
  if (r.bound) j["bound"] = *r.bound;
  return j;
}

void write_ratios_csv(const fs::path& p, const InequalityReport& r) {
  std::ofstream out(p);
  out << "sample,ratio\n";
  char buf[64];
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, r.ratios[i]);
    out << buf;
  }
}

struct Summary {
  json checks = json::array();
  json results = json::object();
  bool all_passed = true;

  void check(const std::string& name, bool ok, const json& detail = json::object()) {
    json c{{"name", name}, {"passed", ok}};
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(c);
    all_passed = all_passed && ok;
  }
};

void run_solve(const Workspace& w, const fs::path& dir, Summary& sm) {
  const Grid& g = w.grid;
  // demo forward solve: the z_d spatial profile (unmasked) as initial data
  RunConfig all = w.cfg;
  RegionMask everywhere;
  everywhere.indicator.assign(g.n_nodes(), 1);
  everywhere.indicator[0] = everywhere.indicator[g.n_x + 1] = 0;
  Field prof = build_z_d(all, g, everywhere);
  std::vector<double> g0 = prof.slice(0);
  Field y = solve_forward(w.op, g0, Field(g));

  std::ofstream fcsv(dir / "state.csv");
  write_field_csv(fcsv, g, y);

  FieldNorms nm = norms(g, y, w.op.k_faces());
  double C = std::exp((2.0 * w.op.a0_sup() + 3.0) * g.T);
  double lhs = nm.l2_final * nm.l2_final + nm.h1k * nm.h1k;
  double rhs = C * ip_omega(g, g0, g0);
  sm.results["solve"] = {{"l2_Q", nm.l2_Q},
                         {"l2_final", nm.l2_final},
                         {"h1k", nm.h1k},
                         {"energy_lhs", lhs},
                         {"energy_rhs", rhs}};
  sm.check("solve.energy_estimate", lhs <= rhs,
           {{"lhs", lhs}, {"rhs", rhs}, {"constant", C}});
}

void run_follower(const Workspace& w, const fs::path& dir, Summary& sm) {
  const Grid& g = w.grid;
  Field h(g);  // the plain low-regret problem solves for v with no leader
  FollowerSolution sol = solve_lowregret(w.follower, h, w.cfg.follower_tol);
  std::ofstream vcsv(dir / "follower_v.csv");
  write_field_csv(vcsv, g, sol.v);

  // empirical constants of the a-priori estimate families, reported only
  double scale = std::max(norm_fwd(g, w.z_d, &w.follower.O_d) + norm_fwd(g, h, &w.follower.omega),
                          1e-300);
  auto kam = [&](const Field& f) { return norms(g, f, w.op.k_faces()).h1k / scale; };
  json j{{"gamma", w.cfg.gamma},
         {"mu", w.cfg.mu},
         {"residual", sol.residual},
         {"iterations", sol.iterations},
         {"J_gamma", sol.J_gamma_value},
         {"norm_v", norm_fwd(g, sol.v, &w.follower.O)},
         {"norm_S0", norm_omega(g, sol.S.slice(0))},
         {"vgamma_empirical_C", sol.vgamma_empirical_C},
         {"kam_empirical_constants",
          {{"v", sol.vgamma_empirical_C},
           {"y_h1k", kam(sol.y)},
           {"S_h1k", kam(sol.S)},
           {"p_h1k", kam(sol.p)},
           {"q_h1k", kam(sol.q)}}}};
  write_text(dir / "follower.json", j.dump(2));
  sm.results["follower"] = j;
  sm.check("follower.residual", sol.residual <= w.cfg.follower_tol,
           {{"residual", sol.residual}, {"tol", w.cfg.follower_tol}});
}

void run_leader(const Workspace& w, const fs::path& dir, Summary& sm, const WeightSet& weights) {
  const Grid& g = w.grid;
  LeaderSolution sol = solve_null_control(w.leader, w.cfg.leader_tol, 400, &weights);
  std::ofstream hcsv(dir / "leader_h.csv");
  write_field_csv(hcsv, g, sol.h);
  json j{{"epsilon", w.leader.epsilon},
         {"norm_h", sol.diag.norm_h},
         {"norm_yT_sq", sol.diag.norm_yT_sq},
         {"J_eps", sol.diag.J_eps},
         {"outer_iterations", sol.diag.outer_iterations},
         {"stationarity", sol.diag.stationarity},
         {"identity_residual", sol.diag.identity_residual},
         {"kappa_weighted_zd", sol.diag.kappa_weight_warning
                                   ? json("inf")
                                   : json(sol.diag.kappa_weighted_zd)},
         {"kappa_weight_warning", sol.diag.kappa_weight_warning}};
  write_text(dir / "leader.json", j.dump(2));
  sm.results["leader"] = j;
  sm.check("leader.stationarity", sol.diag.stationarity <= 1e-6,
           {{"value", sol.diag.stationarity}});
  sm.check("leader.duality_identity", sol.diag.identity_residual <= 1e-6,
           {{"value", sol.diag.identity_residual}});
}

void run_sweep_eps(const Workspace& w, const fs::path& dir, Summary& sm) {
  std::vector<double> eps = w.cfg.eps_list;
  if (eps.empty()) eps = {1e-1, 1e-2, 1e-3, 1e-4};
  auto rows = epsilon_sweep(w.leader, eps, w.cfg.leader_tol);

  std::ofstream csv(dir / "sweep_eps.csv");
  csv << "epsilon,norm_h,norm_yT_sq,J_eps,outer_iters\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", r.epsilon, r.norm_h,
                  r.norm_yT_sq, r.J_eps, r.outer_iters);
    csv << buf;
  }

  bool mono = true, sqrt_eps = true, stat = true, ident = true;
  double Cfit = rows.empty() ? 0.0 : rows[0].norm_yT_sq / std::sqrt(rows[0].epsilon);
  double h_max = 0.0, h_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) mono = mono && rows[i].norm_yT_sq <= 1.05 * rows[i - 1].norm_yT_sq;
    sqrt_eps = sqrt_eps && rows[i].norm_yT_sq <= Cfit * std::sqrt(rows[i].epsilon) * (1.0 + 1e-9);
    stat = stat && rows[i].stationarity <= 1e-6;
    ident = ident && rows[i].identity_residual <= 1e-6;
    h_max = std::max(h_max, rows[i].norm_h);
    h_min = std::min(h_min, rows[i].norm_h);
  }

  json jrows = json::array();
  for (const auto& r : rows)
    jrows.push_back({{"epsilon", r.epsilon},
                     {"norm_h", r.norm_h},
                     {"norm_yT_sq", r.norm_yT_sq},
                     {"J_eps", r.J_eps},
                     {"outer_iters", r.outer_iters},
                     {"stationarity", r.stationarity},
                     {"identity_residual", r.identity_residual}});
  sm.results["sweep_eps"] = jrows;
  // the saturation window of ||h_eps|| is config dependent, so it is reported
  // rather than asserted; the acceptance suite pins it at its own config
  sm.results["sweep_eps_h_window"] = {{"h_max", h_max},
                                      {"h_min", h_min},
                                      {"ratio", h_max / std::max(h_min, 1e-300)}};
  sm.check("sweep_eps.yT_monotone", mono);
  sm.check("sweep_eps.yT_sqrt_eps_bound", sqrt_eps, {{"C_fit", Cfit}});
  sm.check("sweep_eps.h_bounded", std::isfinite(h_max), {{"h_max", h_max}});
  sm.check("sweep_eps.stationarity", stat);
  sm.check("sweep_eps.duality_identity", ident);
}

void run_sweep_gamma(const Workspace& w, const fs::path& dir, Summary& sm) {
  const Grid& g = w.grid;
  Field h(g);
  auto rows = gamma_sweep(w.follower, h, w.cfg.gamma_list, w.cfg.follower_tol);

  std::ofstream csv(dir / "sweep_gamma.csv");
  csv << "gamma,norm_v,norm_S0,norm_S0_over_sqrt_gamma,iterations\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", r.gamma, r.norm_v, r.norm_S0,
                  r.norm_S0_over_sqrt_gamma, r.iterations);
    csv << buf;
  }

  // gamma-independent bounds: ||S0||/sqrt(gamma) <= ||z_d|| + sqrt(mu)||h||
  // and ||v|| <= (1/sqrt(mu))||z_d|| + ||h||
  double nzd = norm_fwd(g, w.z_d, &w.follower.O_d);
  double nh = norm_fwd(g, h, &w.follower.omega);
  double s0_c = nzd + std::sqrt(w.cfg.mu) * nh;
  double v_c = nzd / std::sqrt(w.cfg.mu) + nh;
  bool mono = true, uniform = true, v_bound = true;
  double v_max = 0.0, v_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) mono = mono && rows[i].norm_S0 <= rows[i - 1].norm_S0 * (1.0 + 1e-9);
    uniform = uniform && rows[i].norm_S0_over_sqrt_gamma <= s0_c * (1.0 + 1e-9);
    v_bound = v_bound && rows[i].norm_v <= v_c * (1.0 + 1e-9);
    v_max = std::max(v_max, rows[i].norm_v);
    v_min = std::min(v_min, rows[i].norm_v);
  }

  json jrows = json::array();
  for (const auto& r : rows)
    jrows.push_back({{"gamma", r.gamma},
                     {"norm_v", r.norm_v},
                     {"norm_S0", r.norm_S0},
                     {"norm_S0_over_sqrt_gamma", r.norm_S0_over_sqrt_gamma},
                     {"iterations", r.iterations}});
  sm.results["sweep_gamma"] = jrows;
  sm.results["sweep_gamma_v_window"] = {{"v_max", v_max},
                                        {"v_min", v_min},
                                        {"ratio", v_max / std::max(v_min, 1e-300)}};
  sm.check("sweep_gamma.S0_monotone", mono);
  sm.check("sweep_gamma.S0_uniform_bound", uniform, {{"constant", s0_c}});
  sm.check("sweep_gamma.v_uniform_bound", v_bound, {{"constant", v_c}});
}

void run_verify(const Workspace& w, const fs::path& dir, Summary& sm, const WeightSet& weights) {
  const Grid& g = w.grid;
  int ns = w.cfg.verify_samples;

  InequalityReport hardy = check_hardy(g, w.k, ns, w.cfg.seed);
  double alpha_cut = g.x(w.regions.omega_0.first());
  InequalityReport orderings = check_weight_orderings(weights, w.k, alpha_cut);
  InequalityReport caccio =
      check_caccioppoli(w.leader, weights, w.regions.omega_0, w.regions.omega_1, ns, w.cfg.seed);
  InequalityReport obser =
      check_observability(w.leader, weights, w.regions.omega, ns, w.cfg.seed);

  std::ofstream wcsv(dir / "weights.csv");
  write_weights_csv(wcsv, weights);
  write_ratios_csv(dir / "hardy_ratios.csv", hardy);
  write_ratios_csv(dir / "caccioppoli_ratios.csv", caccio);
  write_ratios_csv(dir / "observability_ratios.csv", obser);

  json j{{"hardy", report_to_json(hardy)},
         {"orderings", report_to_json(orderings)},
         {"caccioppoli", report_to_json(caccio)},
         {"observability", report_to_json(obser)}};
  write_text(dir / "verify.json", j.dump(2));
  sm.results["verify"] = j;
  sm.check("verify.hardy", hardy.passed, {{"max_ratio", hardy.max_ratio}, {"bound", *hardy.bound}});
  sm.check("verify.weight_orderings", orderings.passed);
  sm.check("verify.caccioppoli_finite", caccio.passed, {{"max_ratio", caccio.max_ratio}});
  sm.check("verify.observability_finite", obser.passed, {{"max_ratio", obser.max_ratio}});
}

}  // namespace

RunResult run_subcommand(const std::string& sub, const RunConfig& config,
                         const std::string& out_dir) {
  static const char* known[] = {"solve",     "follower", "leader", "sweep-eps",
                                "sweep-gamma", "verify",   "all"};
  bool ok_sub = false;
  for (auto* s : known) ok_sub = ok_sub || (sub == s);
  if (!ok_sub) throw ConfigError("unknown subcommand '" + sub + "'");

  fs::path dir = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
  fs::create_directories(dir);

  json manifest{{"version", version_string()},
                {"subcommand", sub},
                {"seed", config.seed},
                {"config", json::parse(config_to_json(config))}};
  write_text(dir / "run_manifest.json", manifest.dump(2));

  Summary sm;
  RunResult res;
  try {
    Workspace w = make_workspace(config);
    if (w.op.a0_inf() <= 0.0) {
      // solvability still holds for bounded a0 after an exponential shift
      sm.results["warnings"] = json::array(
          {"a0 is not uniformly positive; the positivity assumption is relaxed"});
    }
    bool all = (sub == "all");
    // weights are needed by leader/verify runs only
    if (all || sub == "verify" || sub == "leader") {
      WeightSet weights = make_weights(w);
      if (all || sub == "leader") run_leader(w, dir, sm, weights);
      if (all || sub == "verify") run_verify(w, dir, sm, weights);
    }
    if (all || sub == "solve") run_solve(w, dir, sm);
    if (all || sub == "follower") run_follower(w, dir, sm);
    if (all || sub == "sweep-eps") run_sweep_eps(w, dir, sm);
    if (all || sub == "sweep-gamma") run_sweep_gamma(w, dir, sm);
    res.exit_code = sm.all_passed ? 0 : 1;
  } catch (const RegionError& e) {
    sm.results["error"] = e.what();
    res.exit_code = 3;
  } catch (const ConfigError& e) {
    sm.results["error"] = e.what();
    res.exit_code = 2;
  } catch (const SolveError& e) {
    sm.results["error"] = e.what();
    sm.results["solver_residual"] = e.residual;
    sm.results["solver_iterations"] = e.iterations;
    res.exit_code = 4;
  }

  json summary{{"subcommand", sub},
               {"passed", res.exit_code == 0},
               {"exit_code", res.exit_code},
               {"checks", sm.checks},
               {"results", sm.results}};
  res.summary_json = summary.dump(2);
  write_text(dir / "summary.json", res.summary_json);
  return res;
}

}  // namespace hierctrl
