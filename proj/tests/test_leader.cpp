#include <doctest.h>

#include <cmath>
#include <random>

#include "hierctrl/errors.hpp"
#include "hierctrl/leader.hpp"
#include "hierctrl/solver.hpp"
#include "oracles.hpp"

using namespace hierctrl;

namespace {

// amplified coupling (slow diffusion, weak damping, wide regions) so the
// Picard map's expansion at tiny mu*gamma is genuine
struct Setup {
  Grid g;
  LeaderProblem lp;

  explicit Setup(int n_x = 12, int n_t = 12, double T = 2.0, double alpha = 0.9,
                 double a0 = 0.05) {
    g = build_grid(n_x, n_t, T);
    DiffusionCoefficient k = make_power_diffusion(alpha);
    FollowerProblem& fp = lp.follower;
    fp.op = assemble_operator(g, k, a0);
    fp.omega = mask_from_interval(g, 0.1, 0.9, "omega");
    fp.O = mask_from_interval(g, 0.05, 0.95, "O");
    fp.O_d = mask_from_interval(g, 0.05, 0.95, "O_d");
    fp.gamma = 1.0;
    fp.mu = 10.0;
    fp.z_d = Field(g);
    for (int n = 0; n <= g.n_t; ++n)
      for (int i = 1; i <= g.n_x; ++i)
        if (fp.O_d.indicator[i])
          fp.z_d.at(n, i) = std::exp(-40.0 * (g.x(i) - 0.6) * (g.x(i) - 0.6));
    lp.epsilon = 1e-2;
    lp.follower_tol = 1e-12;
    lp.quartet_tol = 1e-11;
  }

  std::vector<double> random_terminal(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::vector<double> r(g.n_nodes(), 0.0);
    for (int i = 1; i <= g.n_x; ++i) r[i] = N01(rng);
    return r;
  }

  Field random_h(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    Field h(g);
    for (int n = 1; n <= g.n_t; ++n)
      for (int i = 1; i <= g.n_x; ++i)
        if (lp.follower.omega.indicator[i]) h.at(n, i) = N01(rng);
    return h;
  }
};

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.data().size(); ++j)
    m = std::max(m, std::abs(a.data()[j] - b.data()[j]));
  return m;
}

}  // namespace

TEST_CASE("quartet: zero terminal data gives the zero fixed point") {
  Setup s;
  std::vector<double> zero(s.g.n_nodes(), 0.0);
  AdjointQuartet q = adjoint_quartet_solve(s.lp, zero);
  for (const Field* f : {&q.rho, &q.psi, &q.phi_adj, &q.zeta})
    for (double v : f->data()) CHECK(v == 0.0);
  CHECK(q.fp_iterations == 0);
}

TEST_CASE("quartet: mu = inf decouples the system") {
  Setup s;
  s.lp.follower.mu = std::numeric_limits<double>::infinity();
  auto rT = s.random_terminal(3);
  AdjointQuartet q = adjoint_quartet_solve(s.lp, rT);
  for (double v : q.phi_adj.data()) CHECK(v == 0.0);
  for (double v : q.zeta.data()) CHECK(v == 0.0);
  for (double v : q.psi.data()) CHECK(v == 0.0);
  Field rho_ref = solve_backward(s.lp.follower.op, rT, Field(s.g));
  CHECK(max_abs_diff(q.rho, rho_ref) <= 1e-12);
  CHECK(q.fp_iterations <= 2);
}

TEST_CASE("quartet terminal and boundary identities") {
  Setup s;
  auto rT = s.random_terminal(5);
  AdjointQuartet q = adjoint_quartet_solve(s.lp, rT);
  double isg = s.lp.follower.inv_sqrt_gamma();
  for (int i = 1; i <= s.g.n_x; ++i) {
    CHECK(q.rho.at(s.g.n_t, i) == doctest::Approx(rT[i]).epsilon(1e-12));
    CHECK(q.zeta.at(s.g.n_t, i) == 0.0);
    CHECK(q.phi_adj.at(0, i) == 0.0);
    CHECK(q.psi.at(0, i) == doctest::Approx(isg * q.zeta.at(0, i)).epsilon(1e-12));
  }
}

TEST_CASE("converged quartet satisfies each of the four discrete equations") {
  Setup s;
  auto rT = s.random_terminal(21);
  AdjointQuartet q = adjoint_quartet_solve(s.lp, rT);
  const FollowerProblem& fp = s.lp.follower;
  double imu = 1.0 / fp.mu, isg = fp.inv_sqrt_gamma();
  std::vector<double> zero(s.g.n_nodes(), 0.0);

  Field phi_re = solve_forward(fp.op, zero, (-imu) * masked(shift_up(q.rho), fp.O));
  Field zeta_re = solve_backward(fp.op, zero, isg * masked(shift_down(q.phi_adj), fp.O_d));
  std::vector<double> psi0 = zeta_re.slice(0);
  for (auto& v : psi0) v *= isg;
  Field psi_re = solve_forward(fp.op, psi0, Field(s.g));
  Field rho_re = solve_backward(fp.op, rT, masked(shift_down(q.psi + q.phi_adj), fp.O_d));

  double scale = std::max(1.0, norm_fwd(s.g, q.rho));
  double tol10 = 10.0 * s.lp.quartet_tol * scale;
  CHECK(max_abs_diff(q.phi_adj, phi_re) <= tol10);
  CHECK(max_abs_diff(q.zeta, zeta_re) <= tol10);
  CHECK(max_abs_diff(q.psi, psi_re) <= tol10);
  CHECK(max_abs_diff(q.rho, rho_re) <= tol10);
}

TEST_CASE("quartet matches the monolithic solve on the convergent regimes") {
  for (auto [mu, gamma] : {std::pair{10.0, 1.0}, std::pair{100.0, 1.0}, std::pair{10.0, 0.1}}) {
    Setup s;
    s.lp.follower.mu = mu;
    s.lp.follower.gamma = gamma;
    auto rT = s.random_terminal(7);
    AdjointQuartet q = adjoint_quartet_solve(s.lp, rT);
    oracle::QuartetFields o = oracle::monolithic_quartet(s.lp.follower, rT);
    double scale = std::max(1.0, norm_fwd(s.g, o.rho));
    CHECK(max_abs_diff(q.rho, o.rho) <= 1e-8 * scale);
    CHECK(max_abs_diff(q.psi, o.psi) <= 1e-8 * scale);
    CHECK(max_abs_diff(q.phi_adj, o.phi_adj) <= 1e-8 * scale);
    CHECK(max_abs_diff(q.zeta, o.zeta) <= 1e-8 * scale);
  }
}

TEST_CASE("quartet Picard diverges for tiny mu*gamma and says so") {
  Setup s;
  s.lp.follower.mu = 0.1;
  s.lp.follower.gamma = 0.01;
  auto rT = s.random_terminal(9);
  CHECK_THROWS_WITH_AS(adjoint_quartet_solve(s.lp, rT),
                       doctest::Contains("increase mu or gamma"), SolveError);
}

TEST_CASE("leader state map: zero data and affinity") {
  Setup s(16, 16, 1.0, 0.5, 1.0);
  s.lp.follower.z_d = Field(s.g);
  LeaderStateResult r0 = leader_state_map(s.lp, Field(s.g));
  for (double v : r0.terminal) CHECK(v == 0.0);

  // superposition: map(h1+h2) - map(0) = [map(h1)-map(0)] + [map(h2)-map(0)]
  Setup s2(16, 16, 1.0, 0.5, 1.0);
  s2.lp.follower_tol = 1e-13;
  Field h1 = s2.random_h(11), h2 = s2.random_h(13);
  auto y0 = leader_state_map(s2.lp, Field(s2.g)).terminal;
  auto y1 = leader_state_map(s2.lp, h1).terminal;
  auto y2 = leader_state_map(s2.lp, h2).terminal;
  auto y12 = leader_state_map(s2.lp, h1 + h2).terminal;
  double num = 0.0, den = 0.0;
  for (int i = 1; i <= s2.g.n_x; ++i) {
    double lhs = y12[i] - y0[i];
    double rhs = (y1[i] - y0[i]) + (y2[i] - y0[i]);
    num += (lhs - rhs) * (lhs - rhs);
    den += rhs * rhs;
  }
  CHECK(std::sqrt(num) <= 1e-8 * std::max(1.0, std::sqrt(den)));
}

TEST_CASE("leader state map: nonzero target leaves a nonzero terminal baseline") {
  Setup s(14, 14, 1.0, 0.5, 1.0);
  LeaderStateResult r = leader_state_map(s.lp, Field(s.g));
  CHECK(norm_omega(s.g, r.terminal) > 0.0);
}

TEST_CASE("J_eps basics") {
  Setup s(14, 14, 1.0, 0.5, 1.0);
  SUBCASE("zero everything") {
    s.lp.follower.z_d = Field(s.g);
    CHECK(eval_J_eps(s.lp, Field(s.g)) == 0.0);
  }
  SUBCASE("dominates the control energy") {
    Field h = s.random_h(17);
    double J = eval_J_eps(s.lp, h);
    double h2 = ip_fwd(s.g, h, h, &s.lp.follower.omega);
    CHECK(J >= 0.5 * h2 - 1e-14);
  }
  SUBCASE("matches the recomputed quadrature of its components") {
    Field h = s.random_h(29);
    LeaderStateResult r = leader_state_map(s.lp, h);
    double yT2 = ip_omega(s.g, r.terminal, r.terminal);
    double h2 = ip_fwd(s.g, h, h, &s.lp.follower.omega);
    CHECK(eval_J_eps(s.lp, h) ==
          doctest::Approx(0.5 / s.lp.epsilon * yT2 + 0.5 * h2).epsilon(1e-10));
  }
}

TEST_CASE("leader gradient agrees with central differences") {
  Setup s(12, 12, 1.0, 0.5, 1.0);
  s.lp.follower_tol = 1e-13;
  s.lp.quartet_tol = 1e-13;
  Field h = s.random_h(19);
  Field w = s.random_h(23);
  Field grad = grad_J_eps(s.lp, h);
  double gw = ip_fwd(s.g, grad, w, &s.lp.follower.omega);
  double eps = 1e-5;
  double fd = (eval_J_eps(s.lp, h + eps * w) - eval_J_eps(s.lp, h - eps * w)) / (2.0 * eps);
  CHECK(std::abs(gw - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("null control: zero target yields the zero control") {
  Setup s;
  s.lp.follower.z_d = Field(s.g);
  LeaderSolution sol = solve_null_control(s.lp);
  for (double v : sol.h.data()) CHECK(v == 0.0);
  CHECK(sol.diag.norm_yT == 0.0);
  CHECK(sol.diag.outer_iterations == 0);
}

TEST_CASE("null control matches the eight-field optimality system") {
  Setup s(12, 12, 1.0, 0.5, 1.0);
  s.lp.epsilon = 1e-2;
  s.lp.follower_tol = 1e-13;
  s.lp.quartet_tol = 1e-13;
  LeaderSolution sol = solve_null_control(s.lp, 1e-11, 800);
  oracle::LeaderKkt kkt = oracle::monolithic_leader_kkt(s.lp);
  double dh = norm_fwd(s.g, sol.h - kkt.h, &s.lp.follower.omega);
  CHECK(dh <= 1e-8 * std::max(1.0, norm_fwd(s.g, kkt.h, &s.lp.follower.omega)));
}

TEST_CASE("null control: stationarity and the duality identity") {
  Setup s(16, 16, 1.0, 0.5, 1.0);
  s.lp.epsilon = 1e-2;
  LeaderSolution sol = solve_null_control(s.lp, 1e-10, 800);
  CHECK(sol.diag.stationarity <= 1e-6);
  CHECK(sol.diag.identity_residual <= 1e-6);
}

TEST_CASE("epsilon sweep: monotone terminal energy, bounded control") {
  Setup s(16, 16, 1.0, 0.5, 0.1);
  s.lp.follower.omega = mask_from_interval(s.g, 0.15, 0.9, "omega");
  s.lp.follower.O = mask_from_interval(s.g, 0.1, 0.95, "O");
  auto rows = epsilon_sweep(s.lp, {1e-1, 1e-2, 1e-3}, 1e-9, 600);
  REQUIRE(rows.size() == 3);
  double Cfit = rows[0].norm_yT_sq / std::sqrt(rows[0].epsilon);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) CHECK(rows[i].norm_yT_sq <= rows[i - 1].norm_yT_sq * 1.05);
    CHECK(rows[i].norm_yT_sq <= Cfit * std::sqrt(rows[i].epsilon) * (1.0 + 1e-9));
    CHECK(rows[i].stationarity <= 1e-6);
    CHECK(rows[i].identity_residual <= 1e-6);
  }
  CHECK_THROWS_AS(epsilon_sweep(s.lp, {1e-2, 1e-1}, 1e-9, 100), ConfigError);
}
