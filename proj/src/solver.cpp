#include "netloc/solver.hpp"

#include "netloc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace netloc {

StepRule StepRule::fixed(double alpha) {
  StepRule rule;
  rule.kind = Kind::fixed;
  rule.fixed_alpha = alpha;
  return rule;
}

StepRule StepRule::backtracking(double beta, double armijo_c) {
  StepRule rule;
  rule.kind = Kind::backtracking;
  rule.beta = beta;
  rule.armijo_c = armijo_c;
  return rule;
}

StepRule StepRule::diminishing(double alpha0) {
  StepRule rule;
  rule.kind = Kind::diminishing;
  rule.alpha0 = alpha0;
  return rule;
}

InitStrategy InitStrategy::anchor_centroid_jitter(double sigma) {
  InitStrategy s;
  s.kind = Kind::anchor_centroid_jitter;
  s.jitter_sigma = sigma;
  return s;
}

InitStrategy InitStrategy::given(Positions positions) {
  InitStrategy s;
  s.kind = Kind::given;
  s.given_positions = std::move(positions);
  return s;
}

InitStrategy InitStrategy::random_in_box() {
  InitStrategy s;
  s.kind = Kind::random_in_box;
  return s;
}

Positions initialize(const Network& network, const InitStrategy& strategy, std::uint64_t seed) {
  const int n = network.sensors;
  const int p = network.dim;
  switch (strategy.kind) {
    case InitStrategy::Kind::given: {
      if (strategy.given_positions.count() != n || strategy.given_positions.dim() != p) {
        throw std::invalid_argument("initialize: given positions do not match network shape");
      }
      return strategy.given_positions;
    }
    case InitStrategy::Kind::anchor_centroid_jitter: {
      if (network.anchor_count() == 0) {
        throw std::invalid_argument("initialize: anchor_centroid_jitter needs at least one anchor");
      }
      const Eigen::RowVectorXd centroid = network.anchors.colwise().mean();
      SplitMix64 rng(seed);
      Eigen::MatrixXd coords(n, p);
      for (int i = 0; i < n; ++i) {
        for (int d = 0; d < p; ++d) {
          coords(i, d) = centroid[d] + strategy.jitter_sigma * rng.gaussian();
        }
      }
      return Positions{std::move(coords)};
    }
    case InitStrategy::Kind::random_in_box: {
      if (network.anchor_count() == 0) {
        throw std::invalid_argument("initialize: random_in_box needs anchors to define the box");
      }
      const Eigen::RowVectorXd lo = network.anchors.colwise().minCoeff();
      const Eigen::RowVectorXd hi = network.anchors.colwise().maxCoeff();
      SplitMix64 rng(seed);
      Eigen::MatrixXd coords(n, p);
      for (int i = 0; i < n; ++i) {
        for (int d = 0; d < p; ++d) {
          coords(i, d) = rng.uniform(lo[d], hi[d]);
        }
      }
      return Positions{std::move(coords)};
    }
  }
  throw std::invalid_argument("initialize: unknown strategy");
}

namespace {

constexpr double kAlphaUnderflow = 1e-16;

void validate_config(const SolverConfig& config, Family family) {
  if (config.max_iters <= 0) throw std::invalid_argument("solver: max_iters must be > 0");
  if (!(config.grad_tol > 0.0)) throw std::invalid_argument("solver: grad_tol must be > 0");
  if (config.restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
  const StepRule& rule = config.step_rule;
  switch (rule.kind) {
    case StepRule::Kind::fixed:
      if (!(rule.fixed_alpha > 0.0)) throw std::invalid_argument("solver: fixed alpha must be > 0");
      break;
    case StepRule::Kind::backtracking:
      if (!(rule.beta > 0.0 && rule.beta < 1.0))
        throw std::invalid_argument("solver: backtracking beta must be in (0,1)");
      if (!(rule.armijo_c > 0.0 && rule.armijo_c < 1.0))
        throw std::invalid_argument("solver: armijo c must be in (0,1)");
      break;
    case StepRule::Kind::diminishing:
      if (!(rule.alpha0 > 0.0)) throw std::invalid_argument("solver: alpha0 must be > 0");
      break;
  }
  if (family == Family::absolute && rule.kind == StepRule::Kind::backtracking) {
    throw std::invalid_argument(
        "solver: the absolute family is nonsmooth; use the diminishing step rule");
  }
}

// Armijo search along -gradient starting from `alpha_start`. Returns the
// accepted step, or 0 when alpha underflows without satisfying the condition.
double armijo_search(const CostFunction& f, const Eigen::VectorXd& x, double fx,
                     const Eigen::VectorXd& gradient, double grad_sq, double alpha_start,
                     double beta, double armijo_c, Eigen::VectorXd& trial) {
  double alpha = alpha_start;
  while (alpha >= kAlphaUnderflow) {
    trial = x - alpha * gradient;
    const double ft = f.value(trial);
    if (std::isfinite(ft) && ft <= fx - armijo_c * alpha * grad_sq) return alpha;
    alpha *= beta;
  }
  return 0.0;
}

SolveResult run_descent(const CostFunction& f, const ProblemInstance& instance,
                        const SolverConfig& config, Positions start) {
  const StepRule& rule = config.step_rule;
  SolveResult result;
  Eigen::VectorXd x = stack(start);
  Eigen::VectorXd gradient(f.size());
  Eigen::VectorXd trial(f.size());
  double fx = f.value_and_gradient(x, gradient);
  if (!std::isfinite(fx)) throw std::runtime_error("solver: non-finite cost at initialization");
  result.cost_trace.push_back(fx);

  // Warm-started Armijo cap: the spec-level search starts at alpha_max = 1,
  // but near degenerate (quartic-flat) minima the curvature vanishes and the
  // useful step grows without bound. Doubling the cap after each accepted
  // full step keeps the Armijo guarantee while restoring a linear rate there.
  double alpha_cap = 1.0;
  int iter = 0;
  while (iter < config.max_iters) {
    const double grad_norm = gradient.norm();
    if (grad_norm <= config.grad_tol) {
      result.converged = true;
      break;
    }
    double alpha = 0.0;
    if (rule.kind == StepRule::Kind::fixed) {
      alpha = rule.fixed_alpha;
      trial = x - alpha * gradient;
    } else {
      alpha = armijo_search(f, x, fx, gradient, grad_norm * grad_norm, alpha_cap, rule.beta,
                            rule.armijo_c, trial);
      if (alpha == 0.0) break;  // underflow: stationarity at numerical precision
      alpha_cap = (alpha >= alpha_cap) ? alpha_cap * 2.0 : std::max(alpha * 2.0, 1.0);
    }
    x = trial;
    fx = f.value_and_gradient(x, gradient);
    if (!std::isfinite(fx)) throw std::runtime_error("solver: non-finite cost encountered");
    result.cost_trace.push_back(fx);
    ++iter;
  }
  if (!result.converged && iter < config.max_iters && !result.cost_trace.empty()) {
    // Line search underflowed; gradient norm above tol but no descent exists
    // at double precision. Report the point reached.
  }
  result.iterations = iter;
  result.final_cost = fx;
  result.estimate = unstack(x, instance.network.sensors, instance.network.dim);
  return result;
}

SolveResult run_subgradient(const CostFunction& f, const ProblemInstance& instance,
                            const SolverConfig& config, Positions start) {
  SolveResult result;
  Eigen::VectorXd x = stack(start);
  Eigen::VectorXd gradient(f.size());
  double fx = f.value_and_gradient(x, gradient);
  if (!std::isfinite(fx)) throw std::runtime_error("solver: non-finite cost at initialization");
  result.cost_trace.push_back(fx);

  Eigen::VectorXd best_x = x;
  double best_f = fx;
  // Window of iterates for the displacement stopping test.
  std::deque<Eigen::VectorXd> window;
  window.push_back(x);
  constexpr int kWindow = 50;

  int iter = 0;
  while (iter < config.max_iters) {
    const double grad_norm = gradient.norm();
    if (grad_norm <= config.grad_tol) {
      // Zero subgradient selection: global minimum of the convex objective.
      result.converged = true;
      break;
    }
    ++iter;
    const double step = config.step_rule.alpha0 / std::sqrt(static_cast<double>(iter));
    x -= (step / grad_norm) * gradient;
    fx = f.value_and_gradient(x, gradient);
    if (!std::isfinite(fx)) throw std::runtime_error("solver: non-finite cost encountered");
    result.cost_trace.push_back(fx);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    window.push_back(x);
    if (static_cast<int>(window.size()) > kWindow + 1) window.pop_front();
    if (static_cast<int>(window.size()) == kWindow + 1 &&
        (x - window.front()).norm() <= config.grad_tol) {
      result.converged = true;
      break;
    }
  }
  result.iterations = iter;
  result.final_cost = best_f;
  result.estimate = unstack(best_x, instance.network.sensors, instance.network.dim);
  return result;
}

}  // namespace

double backtracking_step(const ProblemInstance& instance, Family family, const Positions& x,
                         const Eigen::VectorXd& direction, double beta, double armijo_c) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("backtracking_step: beta in (0,1)");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("backtracking_step: c in (0,1)");
  CostFunction f(instance, family);
  const Eigen::VectorXd x0 = stack(x);
  if (direction.size() != x0.size()) {
    throw std::invalid_argument("backtracking_step: direction length mismatch");
  }
  const double dir_sq = direction.squaredNorm();
  const double fx = f.value(x0);
  if (dir_sq == 0.0) return 1.0;  // nothing to do at a stationary point
  double alpha = 1.0;
  Eigen::VectorXd trial(x0.size());
  while (alpha >= kAlphaUnderflow) {
    trial = x0 + alpha * direction;
    const double ft = f.value(trial);
    if (std::isfinite(ft) && ft <= fx - armijo_c * alpha * dir_sq) return alpha;
    alpha *= beta;
  }
  throw std::runtime_error("backtracking_step: alpha underflow below 1e-16");
}

SolveResult minimize(const ProblemInstance& instance, Family family, const SolverConfig& config) {
  validate_config(config, family);
  const CostFunction f(instance, family);

  SolveResult best;
  bool have_best = false;
  for (int restart = 0; restart < config.restarts; ++restart) {
    const std::uint64_t restart_seed = config.seed + static_cast<std::uint64_t>(restart);
    Positions start = initialize(instance.network, config.init, restart_seed);
    SolveResult run = (family == Family::absolute || config.step_rule.kind == StepRule::Kind::diminishing)
                          ? run_subgradient(f, instance, config, std::move(start))
                          : run_descent(f, instance, config, std::move(start));
    if (!have_best || run.final_cost < best.final_cost) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

}  // namespace netloc
