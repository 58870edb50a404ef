#pragma once

#include "netloc/cost.hpp"
#include "netloc/model.hpp"

#include <cstdint>
#include <vector>

namespace netloc {

struct StepRule {
  enum class Kind { fixed, backtracking, diminishing };

  Kind kind = Kind::backtracking;
  double fixed_alpha = 1e-2;  // fixed: constant step length
  double beta = 0.5;          // backtracking: shrink factor in (0,1)
  double armijo_c = 1e-4;     // backtracking: sufficient-decrease fraction in (0,1)
  double alpha0 = 0.1;        // diminishing: step length alpha0/sqrt(k), km

  static StepRule fixed(double alpha);
  static StepRule backtracking(double beta = 0.5, double armijo_c = 1e-4);
  static StepRule diminishing(double alpha0 = 0.1);
};

struct InitStrategy {
  enum class Kind { anchor_centroid_jitter, given, random_in_box };

  Kind kind = Kind::anchor_centroid_jitter;
  double jitter_sigma = 0.1;  // km
  Positions given_positions;

  static InitStrategy anchor_centroid_jitter(double sigma = 0.1);
  static InitStrategy given(Positions positions);
  static InitStrategy random_in_box();
};

struct SolverConfig {
  int max_iters = 50000;
  double grad_tol = 1e-7;  // stationarity tolerance on the gradient norm (km cost units)
  StepRule step_rule;
  InitStrategy init;
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct SolveResult {
  Positions estimate;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // one entry per iterate, starting at the init
};

/// Minimize the convex surrogate f over stacked sensor positions. Gradient
/// descent with Armijo backtracking for the huber/quadratic families (f is
/// continuously differentiable there); the absolute family is nonsmooth and
/// requires the diminishing-step subgradient rule, which tracks the best
/// iterate seen. Returns the best of `restarts` runs, each seeded with
/// config.seed + restart index. Throws std::invalid_argument on bad config
/// and std::runtime_error if the cost turns non-finite.
SolveResult minimize(const ProblemInstance& instance, Family family, const SolverConfig& config);

/// Armijo backtracking from alpha_max = 1: largest alpha = beta^k with
/// f(x + alpha * dir) <= f(x) - c * alpha * ||dir||^2, for dir the negative
/// gradient. Throws std::runtime_error once alpha underflows 1e-16.
double backtracking_step(const ProblemInstance& instance, Family family, const Positions& x,
                         const Eigen::VectorXd& direction, double beta, double armijo_c);

/// Deterministic starting positions for a network. anchor_centroid_jitter
/// places every sensor at the anchor centroid plus gaussian jitter;
/// random_in_box samples uniformly inside the anchors' bounding box.
Positions initialize(const Network& network, const InitStrategy& strategy, std::uint64_t seed);

}  // namespace netloc
