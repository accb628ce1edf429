#pragma once

#include <span>
#include <string>
#include <vector>

#include "ipds/errors.hpp"

namespace ipds {

enum class SetKind { l2_ball, l1_ball, simplex, box };

SetKind set_kind_from_string(const std::string& s);
std::string to_string(SetKind k);

// Per-node feasible set. Balls and the simplex are centered at the origin /
// scaled by `radius`; a box carries explicit per-coordinate bounds.
struct ConstraintSet {
  SetKind kind = SetKind::l2_ball;
  int dim = 0;
  double radius = 1.0;
  std::vector<double> lower, upper;  // box only

  static ConstraintSet l2_ball(int d, double r);
  static ConstraintSet l1_ball(int d, double r);
  static ConstraintSet simplex(int d, double r);  // { x >= 0, sum x = r }
  static ConstraintSet box(int d, double lo, double hi);
  static ConstraintSet box(std::vector<double> lo, std::vector<double> hi);
};

// Exact minimizer of <g, x> over the set; deterministic tie-breaking (lowest
// index). g = 0 returns the set's canonical center.
void lo_oracle(const ConstraintSet& set, std::span<const double> g, std::span<double> out);
std::vector<double> lo_oracle(const ConstraintSet& set, std::span<const double> g);

// Euclidean projection onto the set.
void project(const ConstraintSet& set, std::span<const double> x, std::span<double> out);
std::vector<double> project(const ConstraintSet& set, std::span<const double> x);

// Signed constraint residual; <= 0 means feasible.
double residual(const ConstraintSet& set, std::span<const double> x);

bool contains(const ConstraintSet& set, std::span<const double> x, double tol);

// Exact Euclidean diameter.
double diameter(const ConstraintSet& set);

// Canonical interior/central point (0 for balls, barycenter for simplex,
// midpoint for box). Used as the default start and as lo_oracle(0).
std::vector<double> center(const ConstraintSet& set);

}  // namespace ipds
