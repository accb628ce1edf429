#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ipds/feasible.hpp"
#include "ipds/stacked.hpp"
#include "ipds/threads.hpp"

namespace ipds {

enum class ObjectiveKind { logistic, quadratic };

ObjectiveKind objective_from_string(const std::string& s);
std::string to_string(ObjectiveKind k);

struct Dataset {
  int n = 0;    // samples
  int dim = 0;  // feature dimension
  std::vector<double> features;  // n x dim, row-major
  std::vector<double> labels;    // {-1,+1} for logistic, real targets for quadratic

  std::span<const double> row(int j) const {
    return {features.data() + static_cast<std::size_t>(j) * dim, static_cast<std::size_t>(dim)};
  }
};

// Cumulative oracle-access accounting. Monotone; never reset mid-run.
struct OracleCounters {
  std::uint64_t samples = 0;      // per-datum gradient evaluations
  std::uint64_t lo_calls = 0;     // linear minimization oracle invocations
  std::uint64_t comm_rounds = 0;  // Laplacian / gossip applications
};

// The decentralized objective: f_i = ft_i + mu * nu with nu = ||.||^2 / 2,
// where ft_i sums the per-datum losses of node i's shard.
struct ProblemSpec {
  ObjectiveKind kind = ObjectiveKind::logistic;
  int m = 0;
  int d = 0;
  double mu = 0.0;
  double sigma = 0.0;  // assumed oracle noise level; 0 = deterministic full gradients
  Dataset data;
  std::vector<std::vector<int>> partition;  // per-node data indices
  double exact_smoothness = 0.0;            // > 0 when the generator controls the spectrum
};

// Shuffled even split into m contiguous blocks (sizes differ by at most 1).
std::vector<std::vector<int>> partition_dataset(const Dataset& data, int m, std::uint64_t seed);

// Validates the dataset, partitions it, and assembles the problem.
ProblemSpec make_problem(ObjectiveKind kind, Dataset data, int m, double mu, double sigma, std::uint64_t seed);

// Gradient of the per-datum loss at x, accumulated into acc (+=).
void datum_gradient_accumulate(const ProblemSpec& p, int j, std::span<const double> x, std::span<double> acc,
                               double weight = 1.0);
double datum_loss(const ProblemSpec& p, int j, std::span<const double> x);

// Row i = grad ft_i(x_hat row i), summed over the node's shard.
// counters.samples += total data count.
void full_gradient(const ProblemSpec& p, const StackedPoint& x_hat, StackedPoint& out, OracleCounters& counters,
                   ThreadPool* pool = nullptr);

enum class SampleMode { with_replacement, exhaustive };

// Row i = unbiased estimate of grad ft_i from `batch` draws of node i's
// shard (uniform with replacement, scaled by the shard size).
// counters.samples += m * batch. Streams are keyed by (seed, node, k).
void stochastic_gradient(const ProblemSpec& p, const StackedPoint& x_hat, int batch, std::uint64_t seed, int outer_k,
                         StackedPoint& out, OracleCounters& counters, ThreadPool* pool = nullptr,
                         SampleMode mode = SampleMode::with_replacement);

// f(x) = sum_i [ ft_i(x row i) + mu ||x row i||^2 / 2 ]. Instrumentation:
// never touches counters.
double objective_value(const ProblemSpec& p, const StackedPoint& x);

// Same objective with every worker at the single point x.
double objective_value_consensus(const ProblemSpec& p, std::span<const double> x);

// Gradient of the consensus objective (includes the mu term).
void consensus_gradient(const ProblemSpec& p, std::span<const double> x, std::span<double> out);

struct ReferenceSolution {
  std::vector<double> x;
  double f = 0.0;
};

// Centralized solve of min_{x in set} sum_i f_i(x) by accelerated projected
// gradient, run until the duality (Wolfe) gap is <= tol.
ReferenceSolution reference_optimum(const ProblemSpec& p, const ConstraintSet& set, double tol);

// Upper bound on the gradient Lipschitz constant of ft_i, maximized over
// nodes.
double smoothness_estimate(const ProblemSpec& p);

}  // namespace ipds
