#include <doctest.h>

#include <cmath>

#include "ipds/cgs.hpp"
#include "ipds/errors.hpp"
#include "ipds/rng.hpp"
#include "ipds/stacked.hpp"
#include "support/oracles.hpp"

using namespace ipds;

namespace {

std::vector<double> random_vec(int d, Rng& rng, double scale = 1.0) {
  std::vector<double> v(d);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

double phi(std::span<const double> g, std::span<const double> u, double beta, std::span<const double> x) {
  return dot(g, x) + 0.5 * beta * sqdist(x, u);
}

// Closed-form subproblem optimum: phi is beta/2 || x - (u - g/beta) ||^2 plus
// a constant, so the constrained minimizer is the projection of u - g/beta.
std::vector<double> phi_star_point(const ConstraintSet& set, std::span<const double> g, std::span<const double> u,
                                   double beta) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = u[i] - g[i] / beta;
  if (set.kind == SetKind::l1_ball) return oracle::l1_project_bisection(w, set.radius);
  // l2 ball: radial scaling
  double n = nrm2(w);
  if (n > set.radius)
    for (double& v : w) v *= set.radius / n;
  return w;
}

}  // namespace

TEST_CASE("wolfe_gap vanishes at the constrained minimizer") {
  Rng rng(3);
  auto set = ConstraintSet::l2_ball(4, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_vec(4, rng);
    auto u = project(set, random_vec(4, rng));
    double beta = 0.5 + rng.uniform01();
    auto star = phi_star_point(set, g, u, beta);
    auto r = wolfe_gap(set, g, u, beta, star);
    CHECK(r.gap >= -1e-12);
    CHECK(r.gap <= 1e-10);
  }
}

TEST_CASE("wolfe_gap is zero for g = 0 at u") {
  auto set = ConstraintSet::l2_ball(3, 2.0);
  std::vector<double> g(3, 0.0), u{0.5, -0.3, 0.1};
  auto r = wolfe_gap(set, g, u, 1.0, u);
  CHECK(r.gap == 0.0);
}

TEST_CASE("wolfe_gap upper-bounds the primal gap") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + static_cast<int>(rng.below(5));
    auto set = ConstraintSet::l2_ball(d, 1.0 + rng.uniform01());
    auto g = random_vec(d, rng);
    auto u = project(set, random_vec(d, rng));
    double beta = 0.3 + 2.0 * rng.uniform01();
    auto u_t = project(set, random_vec(d, rng));
    auto r = wolfe_gap(set, g, u, beta, u_t);
    auto star = phi_star_point(set, g, u, beta);
    double primal = phi(g, u, beta, u_t) - phi(g, u, beta, star);
    CHECK(r.gap >= primal - 1e-10);
  }
}

TEST_CASE("cgs_solve with g = 0 returns u after one LO call") {
  auto set = ConstraintSet::l1_ball(3, 1.0);
  std::vector<double> g(3, 0.0), u{0.2, -0.1, 0.3};
  auto res = cgs_solve(set, g, u, 1.0, 1e-10, 100);
  CHECK(res.lo_calls == 1);
  CHECK(res.final_gap == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(res.point[i] == u[i]);
}

TEST_CASE("cgs_solve reaches the projection closed form on the l2 ball") {
  auto set = ConstraintSet::l2_ball(2, 1.0);
  std::vector<double> g{2.0, 0.0}, u{0.0, 0.0};
  auto res = cgs_solve(set, g, u, 1.0, 1e-8, 1000000);
  CHECK(!res.hit_cap);
  CHECK(res.point[0] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(std::abs(res.point[1]) <= 1e-4);
}

TEST_CASE("cgs iterates stay feasible and phi never increases") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 2 + static_cast<int>(rng.below(6));
    ConstraintSet set = trial % 2 == 0 ? ConstraintSet::l2_ball(d, 1.0) : ConstraintSet::l1_ball(d, 1.5);
    auto g = random_vec(d, rng, 2.0);
    auto u = project(set, random_vec(d, rng));
    double beta = 0.4 + 3.0 * rng.uniform01();
    CgsTrace trace;
    auto res = cgs_solve(set, g, u, beta, 1e-7, 5000, &trace);
    for (const auto& it : trace.iterates) CHECK(contains(set, it, 1e-9));
    for (std::size_t i = 1; i < trace.phi.size(); ++i) CHECK(trace.phi[i] <= trace.phi[i - 1] + 1e-12);
    CHECK(contains(set, res.point, 1e-9));
    CHECK(res.lo_calls == trace.phi.size());
  }
}

TEST_CASE("termination by tolerance certifies the primal gap") {
  Rng rng(13);
  for (double tol : {1e-4, 1e-6}) {
    for (int trial = 0; trial < 50; ++trial) {
      int d = 2 + static_cast<int>(rng.below(19));
      ConstraintSet set = trial % 2 == 0 ? ConstraintSet::l2_ball(d, 1.0) : ConstraintSet::l1_ball(d, 1.0);
      auto g = random_vec(d, rng, 1.5);
      auto u = project(set, random_vec(d, rng));
      double beta = 0.5 + 2.0 * rng.uniform01();
      auto res = cgs_solve(set, g, u, beta, tol, 2000000);
      REQUIRE(!res.hit_cap);
      auto star = phi_star_point(set, g, u, beta);
      double primal = phi(g, u, beta, res.point) - phi(g, u, beta, star);
      CHECK(primal <= tol + 1e-12);
    }
  }
}

TEST_CASE("the classic iteration cap reaches epsilon accuracy") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 2 + static_cast<int>(rng.below(10));
    ConstraintSet set = trial % 2 == 0 ? ConstraintSet::l2_ball(d, 1.0) : ConstraintSet::l1_ball(d, 1.2);
    auto g = random_vec(d, rng, 1.5);
    auto u = project(set, random_vec(d, rng));
    double beta = 0.5 + 2.0 * rng.uniform01();
    double eps = 1e-4;
    double diam = diameter(set);
    auto cap = static_cast<std::uint64_t>(std::floor(12.0 * beta * diam * diam / eps));
    auto res = cgs_solve(set, g, u, beta, 0.0, cap);
    auto star = phi_star_point(set, g, u, beta);
    double primal = phi(g, u, beta, res.point) - phi(g, u, beta, star);
    CHECK(primal <= eps);
  }
}

TEST_CASE("infeasible warm start falls back to a feasible vertex") {
  auto set = ConstraintSet::l1_ball(3, 1.0);
  std::vector<double> g{1.0, -2.0, 0.5}, u{5.0, 5.0, 5.0};
  CgsTrace trace;
  auto res = cgs_solve(set, g, u, 1.0, 1e-6, 100000, &trace);
  for (const auto& it : trace.iterates) CHECK(contains(set, it, 1e-9));
  CHECK(contains(set, res.point, 1e-9));
}

TEST_CASE("reduce_subproblem closed forms") {
  std::vector<double> c{1.0, 2.0}, xp{0.5, -0.5}, xa{1.0, 1.0};

  // mu = 0, eta = 0 -> (c, x_anchor, p)
  auto s = reduce_subproblem(c, xp, xa, 0.0, 0.0, 2.0);
  CHECK(s.beta == 2.0);
  CHECK(s.g == c);
  CHECK(s.u == xa);

  // mu = eta = p = 1, x_prev = x_anchor = w -> (c, 2w/3, 3)
  std::vector<double> w{0.3, 0.9};
  s = reduce_subproblem(c, w, w, 1.0, 1.0, 1.0);
  CHECK(s.beta == 3.0);
  for (int i = 0; i < 2; ++i) CHECK(s.u[i] == doctest::Approx(2.0 * w[i] / 3.0).epsilon(1e-15));
}

TEST_CASE("reduced objective differs from the original by a constant") {
  Rng rng(19);
  auto set = ConstraintSet::l2_ball(5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_vec(5, rng);
    auto xp = project(set, random_vec(5, rng));
    auto xa = project(set, random_vec(5, rng));
    double mu = rng.uniform01(), eta = 2.0 * rng.uniform01(), p = 0.1 + rng.uniform01();
    auto sub = reduce_subproblem(c, xp, xa, mu, eta, p);

    auto original = [&](std::span<const double> x) {
      return 0.5 * mu * dot(x, x) + dot(c, x) + 0.5 * eta * sqdist(x, xp) + 0.5 * p * sqdist(x, xa);
    };
    auto reduced = [&](std::span<const double> x) { return dot(sub.g, x) + 0.5 * sub.beta * sqdist(x, sub.u); };

    double ref_diff = original(xp) - reduced(xp);
    for (int probe = 0; probe < 100; ++probe) {
      auto x = project(set, random_vec(5, rng, 2.0));
      CHECK(std::abs(original(x) - reduced(x) - ref_diff) <= 1e-10);
    }
  }
}

TEST_CASE("reduce_subproblem rejects a non-positive prox weight") {
  std::vector<double> c{1.0}, x{0.0};
  CHECK_THROWS_AS(reduce_subproblem(c, x, x, 0.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("zero denominator terminates cleanly at zero gap") {
  // u at a vertex with the gradient pointing so the LO stays at u
  auto set = ConstraintSet::l1_ball(2, 1.0);
  std::vector<double> u{-1.0, 0.0}, g{5.0, 0.0};
  auto res = cgs_solve(set, g, u, 1.0, 0.0, 10);
  CHECK(res.final_gap <= 1e-15);
  CHECK(res.point == u);
}
