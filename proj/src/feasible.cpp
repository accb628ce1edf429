#include "ipds/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ipds/stacked.hpp"

namespace ipds {

SetKind set_kind_from_string(const std::string& s) {
  if (s == "l2_ball") return SetKind::l2_ball;
  if (s == "l1_ball") return SetKind::l1_ball;
  if (s == "simplex") return SetKind::simplex;
  if (s == "box") return SetKind::box;
  throw ConfigError("unknown constraint kind: " + s);
}

std::string to_string(SetKind k) {
  switch (k) {
    case SetKind::l2_ball: return "l2_ball";
    case SetKind::l1_ball: return "l1_ball";
    case SetKind::simplex: return "simplex";
    case SetKind::box: return "box";
  }
  return "?";
}

namespace {

void check_set(SetKind kind, int d, double r) {
  if (d < 1) throw ConfigError("constraint set dimension must be >= 1");
  if (kind != SetKind::box && !(r > 0.0)) throw ConfigError("constraint set radius must be > 0");
}

}  // namespace

ConstraintSet ConstraintSet::l2_ball(int d, double r) {
  check_set(SetKind::l2_ball, d, r);
  return {SetKind::l2_ball, d, r, {}, {}};
}

ConstraintSet ConstraintSet::l1_ball(int d, double r) {
  check_set(SetKind::l1_ball, d, r);
  return {SetKind::l1_ball, d, r, {}, {}};
}

ConstraintSet ConstraintSet::simplex(int d, double r) {
  check_set(SetKind::simplex, d, r);
  if (d < 2) throw ConfigError("simplex needs dimension >= 2 (d = 1 is a single point)");
  return {SetKind::simplex, d, r, {}, {}};
}

ConstraintSet ConstraintSet::box(int d, double lo, double hi) {
  return box(std::vector<double>(d, lo), std::vector<double>(d, hi));
}

ConstraintSet ConstraintSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError("box bounds must be nonempty and equal-sized");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw ConfigError("box requires lower < upper in every coordinate");
  ConstraintSet s;
  s.kind = SetKind::box;
  s.dim = static_cast<int>(lo.size());
  s.radius = 0.0;
  s.lower = std::move(lo);
  s.upper = std::move(hi);
  return s;
}

std::vector<double> center(const ConstraintSet& set) {
  std::vector<double> c(set.dim, 0.0);
  switch (set.kind) {
    case SetKind::l2_ball:
    case SetKind::l1_ball: break;
    case SetKind::simplex:
      std::fill(c.begin(), c.end(), set.radius / set.dim);
      break;
    case SetKind::box:
      for (int i = 0; i < set.dim; ++i) c[i] = 0.5 * (set.lower[i] + set.upper[i]);
      break;
  }
  return c;
}

void lo_oracle(const ConstraintSet& set, std::span<const double> g, std::span<double> out) {
  if (static_cast<int>(g.size()) != set.dim) throw DimensionError("lo_oracle: wrong gradient dimension");
  for (double v : g)
    if (std::isnan(v)) throw InputError("lo_oracle: NaN in gradient");

  bool zero = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
  if (zero) {
    auto c = center(set);
    copy_to(c, out);
    return;
  }

  switch (set.kind) {
    case SetKind::l2_ball: {
      // scale by the max entry first so the norm cannot overflow
      double top = 0.0;
      for (double v : g) top = std::max(top, std::abs(v));
      double s = 0.0;
      for (double v : g) s += (v / top) * (v / top);
      double n = top * std::sqrt(s);
      for (int i = 0; i < set.dim; ++i) out[i] = -set.radius * (g[i] / top) / (n / top);
      break;
    }
    case SetKind::l1_ball: {
      int best = 0;
      for (int i = 1; i < set.dim; ++i)
        if (std::abs(g[i]) > std::abs(g[best])) best = i;  // first maximal coordinate wins ties
      std::fill(out.begin(), out.end(), 0.0);
      out[best] = g[best] > 0.0 ? -set.radius : set.radius;
      break;
    }
    case SetKind::simplex: {
      int best = 0;
      for (int i = 1; i < set.dim; ++i)
        if (g[i] < g[best]) best = i;
      std::fill(out.begin(), out.end(), 0.0);
      out[best] = set.radius;
      break;
    }
    case SetKind::box: {
      for (int i = 0; i < set.dim; ++i) {
        if (g[i] > 0.0)
          out[i] = set.lower[i];
        else if (g[i] < 0.0)
          out[i] = set.upper[i];
        else
          out[i] = 0.5 * (set.lower[i] + set.upper[i]);
      }
      break;
    }
  }
}

std::vector<double> lo_oracle(const ConstraintSet& set, std::span<const double> g) {
  std::vector<double> out(set.dim);
  lo_oracle(set, g, out);
  return out;
}

namespace {

// Projection of u onto { x >= 0, sum x = r } (Held et al. threshold rule).
void project_simplex(std::span<const double> u, double r, std::span<double> out) {
  const int d = static_cast<int>(u.size());
  std::vector<double> sorted(u.begin(), u.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (int j = 0; j < d; ++j) {
    cum += sorted[j];
    double t = (cum - r) / (j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  for (int i = 0; i < d; ++i) out[i] = std::max(u[i] - theta, 0.0);
}

}  // namespace

void project(const ConstraintSet& set, std::span<const double> x, std::span<double> out) {
  if (static_cast<int>(x.size()) != set.dim) throw DimensionError("project: wrong dimension");
  switch (set.kind) {
    case SetKind::l2_ball: {
      double top = 0.0;
      for (double v : x) top = std::max(top, std::abs(v));
      if (top == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      double s = 0.0;
      for (double v : x) s += (v / top) * (v / top);
      double n = top * std::sqrt(s);
      double scale = n > set.radius ? set.radius / n : 1.0;
      if (n > set.radius && !std::isfinite(n))
        scale = 0.0;  // beyond double range: collapse toward the center
      for (int i = 0; i < set.dim; ++i) out[i] = scale * x[i];
      break;
    }
    case SetKind::box: {
      for (int i = 0; i < set.dim; ++i) out[i] = std::clamp(x[i], set.lower[i], set.upper[i]);
      break;
    }
    case SetKind::simplex: {
      project_simplex(x, set.radius, out);
      break;
    }
    case SetKind::l1_ball: {
      double l1 = 0.0;
      for (double v : x) l1 += std::abs(v);
      if (l1 <= set.radius) {
        copy_to(x, out);
        return;
      }
      std::vector<double> absx(set.dim);
      for (int i = 0; i < set.dim; ++i) absx[i] = std::abs(x[i]);
      project_simplex(absx, set.radius, out);
      for (int i = 0; i < set.dim; ++i) out[i] = std::copysign(out[i], x[i]);
      break;
    }
  }
}

std::vector<double> project(const ConstraintSet& set, std::span<const double> x) {
  std::vector<double> out(set.dim);
  project(set, x, out);
  return out;
}

double residual(const ConstraintSet& set, std::span<const double> x) {
  switch (set.kind) {
    case SetKind::l2_ball: return nrm2(x) - set.radius;
    case SetKind::l1_ball: {
      double l1 = 0.0;
      for (double v : x) l1 += std::abs(v);
      return l1 - set.radius;
    }
    case SetKind::simplex: {
      double sum = 0.0, neg = 0.0;
      for (double v : x) {
        sum += v;
        neg = std::max(neg, -v);
      }
      return std::max(neg, std::abs(sum - set.radius));
    }
    case SetKind::box: {
      double worst = -HUGE_VAL;
      for (int i = 0; i < set.dim; ++i) worst = std::max({worst, set.lower[i] - x[i], x[i] - set.upper[i]});
      return worst;
    }
  }
  return 0.0;
}

bool contains(const ConstraintSet& set, std::span<const double> x, double tol) {
  if (static_cast<int>(x.size()) != set.dim) throw DimensionError("contains: wrong dimension");
  return residual(set, x) <= tol;
}

double diameter(const ConstraintSet& set) {
  switch (set.kind) {
    case SetKind::l2_ball:
    case SetKind::l1_ball: return 2.0 * set.radius;
    case SetKind::simplex: return set.radius * std::sqrt(2.0);
    case SetKind::box: {
      double s = 0.0;
      for (int i = 0; i < set.dim; ++i) {
        double w = set.upper[i] - set.lower[i];
        s += w * w;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

}  // namespace ipds
