#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "ipds/errors.hpp"
#include "ipds/model.hpp"
#include "ipds/rng.hpp"
#include "ipds/synthetic.hpp"
#include "support/oracles.hpp"

using namespace ipds;

namespace {

Dataset tiny_logistic_dataset(int n, int d, std::uint64_t seed) {
  Dataset ds;
  ds.n = n;
  ds.dim = d;
  ds.features.resize(static_cast<std::size_t>(n) * d);
  ds.labels.resize(n);
  Rng rng(seed);
  for (double& v : ds.features) v = rng.normal();
  for (int j = 0; j < n; ++j) ds.labels[j] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
  return ds;
}

StackedPoint random_stacked(int m, int d, std::uint64_t seed, double scale = 1.0) {
  StackedPoint x(m, d);
  Rng rng(seed);
  for (double& v : x.data) v = scale * rng.normal();
  return x;
}

}  // namespace

TEST_CASE("partition_dataset splits evenly") {
  Dataset ds = tiny_logistic_dataset(6, 2, 1);
  auto shards = partition_dataset(ds, 3, 0);
  for (const auto& s : shards) CHECK(s.size() == 2);

  Dataset ds7 = tiny_logistic_dataset(7, 2, 1);
  auto shards7 = partition_dataset(ds7, 3, 0);
  std::multiset<std::size_t> sizes;
  for (const auto& s : shards7) sizes.insert(s.size());
  CHECK(sizes == std::multiset<std::size_t>{2, 2, 3});

  // disjoint union covers all indices
  std::set<int> seen;
  for (const auto& s : shards7)
    for (int i : s) CHECK(seen.insert(i).second);
  CHECK(seen.size() == 7);
}

TEST_CASE("partition_dataset is deterministic") {
  Dataset ds = tiny_logistic_dataset(20, 2, 3);
  CHECK(partition_dataset(ds, 4, 9) == partition_dataset(ds, 4, 9));
  CHECK(partition_dataset(ds, 4, 9) != partition_dataset(ds, 4, 10));
}

TEST_CASE("partition_dataset rejects M < m") {
  Dataset ds = tiny_logistic_dataset(2, 2, 1);
  CHECK_THROWS_AS(partition_dataset(ds, 3, 0), ConfigError);
}

TEST_CASE("make_problem validates the dataset") {
  Dataset ds = tiny_logistic_dataset(6, 2, 1);
  ds.labels[0] = 0.5;
  CHECK_THROWS_AS(make_problem(ObjectiveKind::logistic, ds, 2, 0.0, 0.0, 1), DataError);
  Dataset nan_ds = tiny_logistic_dataset(6, 2, 1);
  nan_ds.features[3] = std::nan("");
  CHECK_THROWS_AS(make_problem(ObjectiveKind::logistic, nan_ds, 2, 0.0, 0.0, 1), DataError);
}

TEST_CASE("logistic full gradient at x = 0 is minus half the label-weighted sum") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(9, 3, 7), 3, 0.0, 0.0, 1);
  StackedPoint x(3, 3);
  StackedPoint g;
  OracleCounters counters;
  full_gradient(p, x, g, counters);
  CHECK(counters.samples == 9);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> expect(3, 0.0);
    for (int j : p.partition[i])
      for (int c = 0; c < 3; ++c) expect[c] += -0.5 * p.data.labels[j] * p.data.row(j)[c];
    for (int c = 0; c < 3; ++c) CHECK(g.row(i)[c] == doctest::Approx(expect[c]).epsilon(1e-12));
  }
}

TEST_CASE("quadratic full gradient matches the closed form") {
  ProblemSpec p = make_quadratic_problem(2, 4, 3, 2.0, 0.0, 0.0, 1.0, 5);
  StackedPoint x = random_stacked(2, 3, 11);
  StackedPoint g;
  OracleCounters counters;
  full_gradient(p, x, g, counters);
  for (int i = 0; i < 2; ++i) {
    std::vector<double> expect(3, 0.0);
    for (int j : p.partition[i]) {
      auto a = p.data.row(j);
      double resid = dot(a, x.row(i)) - p.data.labels[j];
      for (int c = 0; c < 3; ++c) expect[c] += resid * a[c];
    }
    for (int c = 0; c < 3; ++c) CHECK(g.row(i)[c] == doctest::Approx(expect[c]).epsilon(1e-12));
  }
}

TEST_CASE("full gradient matches central finite differences") {
  for (auto kind : {ObjectiveKind::logistic, ObjectiveKind::quadratic}) {
    ProblemSpec p = kind == ObjectiveKind::logistic
                        ? make_problem(kind, tiny_logistic_dataset(12, 4, 2), 3, 0.0, 0.0, 1)
                        : make_quadratic_problem(3, 5, 4, 1.5, 0.0, 0.0, 1.0, 2);
    for (int trial = 0; trial < 20; ++trial) {
      StackedPoint x = random_stacked(3, 4, 100 + trial, 0.7);
      StackedPoint g;
      OracleCounters counters;
      full_gradient(p, x, g, counters);
      StackedPoint u = random_stacked(3, 4, 200 + trial);
      auto f_all = [&](std::span<const double> flat) {
        StackedPoint xx(3, 4);
        xx.data.assign(flat.begin(), flat.end());
        double total = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j : p.partition[i]) total += datum_loss(p, j, xx.row(i));
        return total;
      };
      double fd = oracle::directional_derivative(f_all, x.data, u.data, 1e-5);
      double an = dot(std::span<const double>(g.data), std::span<const double>(u.data));
      CHECK(an == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("stochastic gradient in exhaustive mode equals the full gradient") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(12, 3, 4), 3, 0.0, 1.0, 1);
  StackedPoint x = random_stacked(3, 3, 21, 0.5);
  StackedPoint g_full, g_st;
  OracleCounters c1, c2;
  full_gradient(p, x, g_full, c1);
  stochastic_gradient(p, x, 4, 77, 1, g_st, c2, nullptr, SampleMode::exhaustive);
  for (std::size_t i = 0; i < g_full.data.size(); ++i)
    CHECK(g_st.data[i] == doctest::Approx(g_full.data[i]).epsilon(1e-12));
  CHECK(c2.samples == 12);
}

TEST_CASE("stochastic gradient is unbiased (Monte Carlo)") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(30, 3, 6), 3, 0.0, 1.0, 1);
  StackedPoint x = random_stacked(3, 3, 22, 0.5);
  StackedPoint g_full, g_st;
  OracleCounters c1, c2;
  full_gradient(p, x, g_full, c1);

  const int draws = 10000, batch = 2;
  StackedPoint mean(3, 3), m2(3, 3);
  for (int rep = 0; rep < draws; ++rep) {
    stochastic_gradient(p, x, batch, 900, rep, g_st, c2);
    for (std::size_t i = 0; i < g_st.data.size(); ++i) {
      double delta = g_st.data[i] - mean.data[i];
      mean.data[i] += delta / (rep + 1);
      m2.data[i] += delta * (g_st.data[i] - mean.data[i]);
    }
  }
  CHECK(c2.samples == static_cast<std::uint64_t>(draws) * 3 * batch);
  for (std::size_t i = 0; i < mean.data.size(); ++i) {
    double se = std::sqrt(m2.data[i] / (draws - 1.0) / draws);
    CHECK(std::abs(mean.data[i] - g_full.data[i]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("stochastic gradient is bitwise deterministic and thread-invariant") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(24, 3, 8), 4, 0.0, 1.0, 1);
  StackedPoint x = random_stacked(4, 3, 23, 0.4);
  StackedPoint a, b;
  OracleCounters ca, cb;
  ThreadPool pool(4);
  stochastic_gradient(p, x, 5, 42, 3, a, ca, nullptr);
  stochastic_gradient(p, x, 5, 42, 3, b, cb, &pool);
  CHECK(a.data == b.data);
}

TEST_CASE("stochastic gradient rejects an empty shard") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(6, 2, 9), 2, 0.0, 1.0, 1);
  p.partition[1].clear();
  StackedPoint x(2, 2);
  StackedPoint g;
  OracleCounters c;
  CHECK_THROWS_AS(stochastic_gradient(p, x, 2, 1, 1, g, c), ConfigError);
}

TEST_CASE("objective at zero is M log 2 for logistic") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(10, 3, 5), 2, 0.0, 0.0, 1);
  StackedPoint x(2, 3);
  CHECK(objective_value(p, x) == doctest::Approx(10.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mu adds the quadratic regularizer to the objective") {
  ProblemSpec p0 = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(10, 3, 5), 2, 0.0, 0.0, 1);
  ProblemSpec p1 = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(10, 3, 5), 2, 0.7, 0.0, 1);
  StackedPoint x = random_stacked(2, 3, 31);
  double extra = 0.0;
  for (int i = 0; i < 2; ++i) extra += 0.5 * 0.7 * dot(x.row(i), x.row(i));
  CHECK(objective_value(p1, x) == doctest::Approx(objective_value(p0, x) + extra).epsilon(1e-12));
}

TEST_CASE("quadratic objective matches the direct sum oracle") {
  ProblemSpec p = make_quadratic_problem(2, 4, 3, 2.0, 0.3, 0.0, 1.0, 6);
  StackedPoint x = random_stacked(2, 3, 32);
  double expect = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j : p.partition[i]) {
      double r = dot(p.data.row(j), x.row(i)) - p.data.labels[j];
      expect += 0.5 * r * r;
    }
    expect += 0.5 * 0.3 * dot(x.row(i), x.row(i));
  }
  CHECK(objective_value(p, x) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("reference_optimum matches the normal-equations solve on an interior quadratic") {
  const int d = 4;
  ProblemSpec p = make_quadratic_problem(3, 5, d, 1.0, 0.5, 0.0, 0.1, 12);
  auto set = ConstraintSet::l2_ball(d, 50.0);  // large radius keeps the optimum interior
  auto ref = reference_optimum(p, set, 1e-10);

  // (sum a a^T + m mu I) x = sum a y
  std::vector<double> A(d * d, 0.0), b(d, 0.0);
  for (int j = 0; j < p.data.n; ++j) {
    auto a = p.data.row(j);
    for (int r = 0; r < d; ++r) {
      b[r] += a[r] * p.data.labels[j];
      for (int c = 0; c < d; ++c) A[r * d + c] += a[r] * a[c];
    }
  }
  for (int r = 0; r < d; ++r) A[r * d + r] += 3 * 0.5;
  auto x_direct = oracle::solve_dense(A, b, d);
  for (int i = 0; i < d; ++i) CHECK(ref.x[i] == doctest::Approx(x_direct[i]).epsilon(1e-8));
  CHECK(ref.f == doctest::Approx(objective_value_consensus(p, x_direct)).epsilon(1e-10));
}

TEST_CASE("reference_optimum with a shrinking ball collapses to the center") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(8, 3, 2), 2, 1.0, 0.0, 1);
  auto set = ConstraintSet::l2_ball(3, 1e-9);
  auto ref = reference_optimum(p, set, 1e-8);
  for (double v : ref.x) CHECK(std::abs(v) <= 1e-9);
  CHECK(ref.f == doctest::Approx(objective_value_consensus(p, std::vector<double>(3, 0.0))).epsilon(1e-9));
}

TEST_CASE("reference_optimum on the l1 ball never exceeds f(0)") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(20, 4, 3), 2, 0.0, 0.0, 1);
  auto set = ConstraintSet::l1_ball(4, 1.0);
  auto ref = reference_optimum(p, set, 1e-8);
  CHECK(ref.f <= 20.0 * std::log(2.0) + 1e-9);
}

TEST_CASE("feasible objective values stay above the certified optimum") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(15, 3, 44), 3, 0.2, 0.0, 1);
  auto set = ConstraintSet::l2_ball(3, 2.0);
  const double tol = 1e-8;
  auto ref = reference_optimum(p, set, tol);
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> raw(3);
    for (auto& v : raw) v = 2.5 * rng.normal();
    auto y = project(set, raw);
    CHECK(objective_value_consensus(p, y) >= ref.f - tol);
  }
}

TEST_CASE("smoothness_estimate closed forms") {
  // single datum with ||a||^2 = 4 -> 1
  Dataset ds;
  ds.n = 1;
  ds.dim = 2;
  ds.features = {2.0, 0.0};
  ds.labels = {1.0};
  ProblemSpec p = make_problem(ObjectiveKind::logistic, ds, 1, 0.0, 0.0, 1);
  CHECK(smoothness_estimate(p) == doctest::Approx(1.0).epsilon(1e-12));

  // quadratic with B = I per node -> 1
  Dataset qd;
  qd.n = 3;
  qd.dim = 3;
  qd.features = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  qd.labels = {0.0, 0.0, 0.0};
  ProblemSpec q = make_problem(ObjectiveKind::quadratic, qd, 1, 0.0, 0.0, 1);
  CHECK(smoothness_estimate(q) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("smoothness_estimate upper-bounds Hessian-vector norms") {
  ProblemSpec p = make_problem(ObjectiveKind::logistic, tiny_logistic_dataset(18, 4, 14), 3, 0.0, 0.0, 1);
  double L = smoothness_estimate(p);
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    int node = static_cast<int>(rng.below(3));
    std::vector<double> x(4), v(4);
    for (auto& t : x) t = rng.normal();
    for (auto& t : v) t = rng.normal();
    std::vector<double> hv(4, 0.0);
    for (int j : p.partition[node]) {
      auto a = p.data.row(j);
      double s = dot(a, x);
      double y = p.data.labels[j];
      double sig = 1.0 / (1.0 + std::exp(y * s));
      double sprime = sig * (1.0 - sig);
      axpy(sprime * dot(a, v), a, hv);
    }
    CHECK(nrm2(hv) <= L * nrm2(v) * (1.0 + 1e-9));
  }
}

TEST_CASE("synthetic quadratic has the promised top curvature per node") {
  ProblemSpec p = make_quadratic_problem(3, 6, 4, 2.5, 0.0, 0.0, 1.0, 77);
  CHECK(p.exact_smoothness == 2.5);
  for (int node = 0; node < 3; ++node) {
    std::vector<double> gram(16, 0.0);
    for (int j : p.partition[node]) {
      auto a = p.data.row(j);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) gram[r * 4 + c] += a[r] * a[c];
    }
    auto ev = oracle::sym_eigenvalues(gram, 4);
    CHECK(ev.back() == doctest::Approx(2.5).epsilon(1e-9));
  }
}
