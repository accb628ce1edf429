#include "ipds/graph.hpp"

#include <algorithm>
#include <cmath>

#include "ipds/errors.hpp"
#include "ipds/rng.hpp"

namespace ipds {

Topology topology_from_string(const std::string& s) {
  if (s == "path") return Topology::path;
  if (s == "star") return Topology::star;
  if (s == "complete") return Topology::complete;
  if (s == "barbell") return Topology::barbell;
  if (s == "erdos_renyi") return Topology::erdos_renyi;
  throw ConfigError("unknown topology: " + s);
}

std::string to_string(Topology t) {
  switch (t) {
    case Topology::path: return "path";
    case Topology::star: return "star";
    case Topology::complete: return "complete";
    case Topology::barbell: return "barbell";
    case Topology::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

namespace {

Graph from_edges(Topology kind, int m, std::vector<std::pair<int, int>> edges) {
  std::sort(edges.begin(), edges.end());
  Graph g;
  g.kind = kind;
  g.m = m;
  g.edges = std::move(edges);
  g.laplacian.assign(static_cast<std::size_t>(m) * m, 0.0);
  g.neighbors.assign(m, {});
  for (auto [i, j] : g.edges) {
    g.laplacian[static_cast<std::size_t>(i) * m + j] = -1.0;
    g.laplacian[static_cast<std::size_t>(j) * m + i] = -1.0;
    g.laplacian[static_cast<std::size_t>(i) * m + i] += 1.0;
    g.laplacian[static_cast<std::size_t>(j) * m + j] += 1.0;
    g.neighbors[i].push_back(j);
    g.neighbors[j].push_back(i);
  }
  for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
  return g;
}

std::vector<std::pair<int, int>> sample_er_edges(int m, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (rng.uniform01() < p) edges.emplace_back(i, j);
  return edges;
}

}  // namespace

bool is_connected(const Graph& g) {
  if (g.m == 0) return false;
  std::vector<char> seen(g.m, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.m;
}

Graph build_topology(Topology kind, int m, const GraphParams& params, std::uint64_t seed) {
  if (m < 2) throw ConfigError("topology needs m >= 2 workers");
  switch (kind) {
    case Topology::path: {
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
      return from_edges(kind, m, std::move(e));
    }
    case Topology::star: {
      std::vector<std::pair<int, int>> e;
      for (int i = 1; i < m; ++i) e.emplace_back(0, i);
      return from_edges(kind, m, std::move(e));
    }
    case Topology::complete: {
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) e.emplace_back(i, j);
      return from_edges(kind, m, std::move(e));
    }
    case Topology::barbell: {
      if (m % 2 != 0 || m < 6) throw ConfigError("barbell needs even m >= 6");
      int h = m / 2;
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i < h; ++i)
        for (int j = i + 1; j < h; ++j) e.emplace_back(i, j);
      for (int i = h; i < m; ++i)
        for (int j = i + 1; j < m; ++j) e.emplace_back(i, j);
      e.emplace_back(h - 1, h);  // the bridge
      return from_edges(kind, m, std::move(e));
    }
    case Topology::erdos_renyi: {
      if (!(params.p > 0.0 && params.p <= 1.0)) throw ConfigError("erdos_renyi needs edge probability in (0, 1]");
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        Graph g = from_edges(kind, m, sample_er_edges(m, params.p, rng));
        if (is_connected(g)) return g;
      }
      throw GenerationError("erdos_renyi: no connected graph within 1000 resampling attempts");
    }
  }
  throw ConfigError("unreachable topology kind");
}

void apply_constraint(const Graph& g, const StackedPoint& x, StackedPoint& out) {
  if (x.rows != g.m) throw DimensionError("apply_constraint: row count does not match worker count");
  if (!x.same_shape(out)) out = StackedPoint(x.rows, x.cols);
  const int d = x.cols;
  for (int i = 0; i < g.m; ++i) {
    auto xi = x.row(i);
    auto yi = out.row(i);
    const double deg = static_cast<double>(g.neighbors[i].size());
    for (int c = 0; c < d; ++c) yi[c] = deg * xi[c];
    for (int j : g.neighbors[i]) {
      auto xj = x.row(j);
      for (int c = 0; c < d; ++c) yi[c] -= xj[c];
    }
  }
}

StackedPoint apply_constraint(const Graph& g, const StackedPoint& x) {
  StackedPoint out(x.rows, x.cols);
  apply_constraint(g, x, out);
  return out;
}

namespace {

// Largest eigenvalue of a symmetric operator restricted to the zero-mean
// subspace. op(v, w) must write w = M v. Terminates on the residual bound
// ||Mv - theta v|| <= tol_rel * scale, which certifies |theta - lambda| for
// symmetric M.
template <typename Op>
double deflated_top_eigenvalue(int m, double scale, const Op& op) {
  std::vector<double> v(m), w(m);
  Rng rng(0x5eed5eedull);
  for (double& vi : v) vi = rng.uniform01() - 0.5;
  auto deflate = [&](std::vector<double>& u) {
    double mean = 0.0;
    for (double ui : u) mean += ui;
    mean /= m;
    for (double& ui : u) ui -= mean;
  };
  auto normalize = [&](std::vector<double>& u) {
    double n = nrm2(u);
    if (n == 0.0) return false;
    for (double& ui : u) ui /= n;
    return true;
  };
  deflate(v);
  if (!normalize(v)) {  // m == 1 style degenerate input; cannot happen for m >= 2
    return 0.0;
  }
  const double tol = 1e-12 * std::max(scale, 1e-300);
  double theta = 0.0;
  for (long iter = 0; iter < 1000000; ++iter) {
    op(v, w);
    deflate(w);
    theta = dot(v, w);
    double res2 = 0.0;
    for (int i = 0; i < m; ++i) {
      double r = w[i] - theta * v[i];
      res2 += r * r;
    }
    if (std::sqrt(res2) <= tol) break;
    double n = nrm2(w);
    if (n <= 1e-300) {  // operator vanishes on the subspace: top eigenvalue 0
      theta = 0.0;
      break;
    }
    for (int i = 0; i < m; ++i) v[i] = w[i] / n;
  }
  return theta;
}

void lap_mul(const Graph& g, const std::vector<double>& v, std::vector<double>& w) {
  for (int i = 0; i < g.m; ++i) {
    double acc = static_cast<double>(g.neighbors[i].size()) * v[i];
    for (int j : g.neighbors[i]) acc -= v[j];
    w[i] = acc;
  }
}

}  // namespace

double operator_norm(const Graph& g) {
  double scale = 0.0;
  for (int i = 0; i < g.m; ++i) scale = std::max(scale, 2.0 * g.neighbors[i].size());  // Gershgorin
  if (scale == 0.0) return 0.0;
  return deflated_top_eigenvalue(g.m, scale, [&g](const std::vector<double>& v, std::vector<double>& w) {
    lap_mul(g, v, w);
  });
}

double spectral_gap(const Graph& g) {
  if (!is_connected(g)) throw ConfigError("spectral_gap requires a connected graph");
  const double lam_max = operator_norm(g);
  // Largest eigenvalue of lam_max*I - L on the zero-mean subspace is
  // lam_max - lambda_2.
  double shifted = deflated_top_eigenvalue(g.m, lam_max, [&](const std::vector<double>& v, std::vector<double>& w) {
    lap_mul(g, v, w);
    for (int i = 0; i < g.m; ++i) w[i] = lam_max * v[i] - w[i];
  });
  double lam2 = lam_max - shifted;
  return lam2 / lam_max;
}

}  // namespace ipds
