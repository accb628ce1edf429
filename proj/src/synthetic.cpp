#include "ipds/synthetic.hpp"

#include <cmath>

#include "ipds/errors.hpp"
#include "ipds/rng.hpp"

namespace ipds {

Dataset synth_logistic(int n, int d, std::uint64_t seed, double feature_scale) {
  if (n < 1 || d < 1) throw ConfigError("synth_logistic: need n >= 1 and d >= 1");
  if (!(feature_scale > 0.0)) throw ConfigError("synth_logistic: feature_scale must be > 0");
  Dataset ds;
  ds.n = n;
  ds.dim = d;
  ds.features.resize(static_cast<std::size_t>(n) * d);
  ds.labels.resize(n);

  Rng wrng = Rng::keyed(seed, 0x77ull, 0);
  std::vector<double> w(d);
  for (double& wi : w) wi = wrng.normal();

  const double row_scale = feature_scale / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < n; ++j) {
    Rng rng = Rng::keyed(seed, 0x666561ull, static_cast<std::uint64_t>(j));
    double score = 0.0;
    for (int c = 0; c < d; ++c) {
      double v = rng.normal() * row_scale;
      ds.features[static_cast<std::size_t>(j) * d + c] = v;
      score += v * w[c];
    }
    double noise = rng.normal();
    ds.labels[j] = (score + 0.3 * noise) > 0.0 ? 1.0 : -1.0;
  }
  return ds;
}

namespace {

// Orthonormal columns from a Gaussian matrix by modified Gram-Schmidt with
// re-orthogonalization. cols <= rows required.
std::vector<double> orthonormal_columns(int rows, int cols, Rng& rng) {
  std::vector<double> q(static_cast<std::size_t>(rows) * cols);
  for (double& v : q) v = rng.normal();
  auto col = [&](int j, int i) -> double& { return q[static_cast<std::size_t>(i) * cols + j]; };
  for (int j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int prev = 0; prev < j; ++prev) {
        double proj = 0.0;
        for (int i = 0; i < rows; ++i) proj += col(prev, i) * col(j, i);
        for (int i = 0; i < rows; ++i) col(j, i) -= proj * col(prev, i);
      }
    }
    double norm = 0.0;
    for (int i = 0; i < rows; ++i) norm += col(j, i) * col(j, i);
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericsError("orthonormal_columns: rank collapse");
    for (int i = 0; i < rows; ++i) col(j, i) /= norm;
  }
  return q;
}

}  // namespace

ProblemSpec make_quadratic_problem(int m, int rows_per_node, int d, double l_max, double mu, double sigma,
                                   double x_ref_scale, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ConfigError("make_quadratic_problem: need m >= 1, d >= 1");
  if (rows_per_node < d) throw ConfigError("make_quadratic_problem: rows_per_node must be >= d");
  if (!(l_max > 0.0)) throw ConfigError("make_quadratic_problem: l_max must be > 0");
  if (mu < 0.0 || sigma < 0.0) throw ConfigError("make_quadratic_problem: mu and sigma must be >= 0");

  const int n = m * rows_per_node;
  Dataset ds;
  ds.n = n;
  ds.dim = d;
  ds.features.assign(static_cast<std::size_t>(n) * d, 0.0);
  ds.labels.assign(n, 0.0);

  // Planted point the least-squares targets are consistent with.
  std::vector<double> x_ref(d, 0.0);
  if (x_ref_scale != 0.0) {
    Rng rng = Rng::keyed(seed, 0x7265ull, 0);
    for (double& v : x_ref) v = rng.normal();
    double norm = nrm2(x_ref);
    for (double& v : x_ref) v *= x_ref_scale / norm;
  }

  for (int node = 0; node < m; ++node) {
    Rng rng = Rng::keyed(seed, 0x420000ull, static_cast<std::uint64_t>(node));
    // B = Q diag(s) V^T with top singular value sqrt(l_max) exactly.
    std::vector<double> qcols = orthonormal_columns(rows_per_node, d, rng);
    std::vector<double> vcols = orthonormal_columns(d, d, rng);
    std::vector<double> s(d);
    const double s_top = std::sqrt(l_max);
    for (int j = 0; j < d; ++j)
      s[j] = d == 1 ? s_top : s_top * std::pow(3.0, -static_cast<double>(j) / (d - 1));  // condition number 9

    for (int r = 0; r < rows_per_node; ++r) {
      int row = node * rows_per_node + r;
      double* out = ds.features.data() + static_cast<std::size_t>(row) * d;
      for (int ccol = 0; ccol < d; ++ccol) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j)
          acc += qcols[static_cast<std::size_t>(r) * d + j] * s[j] * vcols[static_cast<std::size_t>(ccol) * d + j];
        out[ccol] = acc;
      }
      double target = 0.0;
      for (int ccol = 0; ccol < d; ++ccol) target += out[ccol] * x_ref[ccol];
      ds.labels[row] = target;
    }
  }

  ProblemSpec p;
  p.kind = ObjectiveKind::quadratic;
  p.m = m;
  p.d = d;
  p.mu = mu;
  p.sigma = sigma;
  p.data = std::move(ds);
  p.partition.resize(m);
  for (int node = 0; node < m; ++node) {
    p.partition[node].resize(rows_per_node);
    for (int r = 0; r < rows_per_node; ++r) p.partition[node][r] = node * rows_per_node + r;
  }
  p.exact_smoothness = l_max;
  return p;
}

}  // namespace ipds
