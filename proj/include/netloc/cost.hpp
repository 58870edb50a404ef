#pragma once

#include "netloc/model.hpp"

#include <Eigen/Core>

#include <map>
#include <vector>

namespace netloc {

/// Discrepancies delta = estimated distance minus measured range (km).
struct Residuals {
  std::map<Edge, double> edge_residuals;
  std::map<AnchorLink, double> anchor_residuals;
};

Residuals residuals(const ProblemInstance& instance, const Positions& positions);

struct CostEval {
  double value = 0.0;
  Eigen::VectorXd gradient;  // stacked, length n * dim
};

/// Scaling convention for the quadratic family's nonconvex cost: the ML cost
/// carries 1/2 per squared term, the plain variant does not. The two scalings
/// share minimizers; property tests compare against the matching one.
enum class QuadraticScaling { ml_half, plain };

/// Convex surrogate f(x): sum over terms of h(max{0, delta}) with exact
/// gradient. Terms with coincident points contribute value and gradient 0.
CostEval eval_convex(const ProblemInstance& instance, const Positions& positions, Family family);

/// Nonconvex cost (quadratic ML / L1 / Huber on raw residuals) with a chain
/// rule gradient. Diagnostic only; the solver never minimizes this.
CostEval eval_nonconvex(const ProblemInstance& instance, const Positions& positions, Family family,
                        QuadraticScaling scaling = QuadraticScaling::ml_half);

/// Max over coordinates of the discrepancy between the analytic convex
/// gradient and central finite differences of the convex value, relative to
/// max(1, |coordinate|). Callers must supply positions away from kink sets.
double gradient_check(const ProblemInstance& instance, const Positions& positions, Family family,
                      double step);

/// Term table compiled once per (instance, family) pair so the solver's inner
/// loop runs without map lookups or allocation.
class CostFunction {
 public:
  CostFunction(const ProblemInstance& instance, Family family);

  double value(const Eigen::VectorXd& stacked) const;
  /// Writes the gradient into `gradient` (resized to n*dim) and returns f.
  double value_and_gradient(const Eigen::VectorXd& stacked, Eigen::VectorXd& gradient) const;

  int sensors() const { return sensors_; }
  int dim() const { return dim_; }
  int size() const { return sensors_ * dim_; }

 private:
  struct EdgeTerm {
    int i, j;
    double range, radius;
  };
  struct AnchorTerm {
    int i;
    double range, radius;
    Eigen::Vector3d anchor;  // first `dim_` entries used
  };

  int sensors_ = 0;
  int dim_ = 0;
  Family family_;
  std::vector<EdgeTerm> edge_terms_;
  std::vector<AnchorTerm> anchor_terms_;
};

}  // namespace netloc
