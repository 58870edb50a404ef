#include "netloc/cost.hpp"

#include "netloc/loss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace netloc {

namespace {

void check_shape(const ProblemInstance& instance, const Positions& positions) {
  if (positions.count() != instance.network.sensors || positions.dim() != instance.network.dim) {
    std::ostringstream msg;
    msg << "positions shape " << positions.count() << "x" << positions.dim()
        << " does not match network " << instance.network.sensors << "x" << instance.network.dim;
    throw std::invalid_argument(msg.str());
  }
}

double measured_range(const std::map<Edge, double>& ranges, const Edge& edge) {
  auto it = ranges.find(edge);
  if (it == ranges.end()) {
    throw std::invalid_argument("missing range for edge {" + std::to_string(edge.first) + "," +
                                std::to_string(edge.second) + "}");
  }
  return it->second;
}

double measured_range(const std::map<AnchorLink, double>& ranges, const AnchorLink& link) {
  auto it = ranges.find(link);
  if (it == ranges.end()) {
    throw std::invalid_argument("missing range for anchor link (" + std::to_string(link.first) +
                                "," + std::to_string(link.second) + ")");
  }
  return it->second;
}

}  // namespace

Residuals residuals(const ProblemInstance& instance, const Positions& positions) {
  check_shape(instance, positions);
  Residuals out;
  for (const auto& edge : instance.network.edges) {
    const Edge key = make_edge(edge.first, edge.second);
    const double dist = (positions.coords.row(edge.first) - positions.coords.row(edge.second)).norm();
    out.edge_residuals[key] = dist - measured_range(instance.measurements.ranges, key);
  }
  for (const auto& link : instance.network.anchor_links) {
    const double dist =
        (positions.coords.row(link.first) - instance.network.anchors.row(link.second)).norm();
    out.anchor_residuals[link] = dist - measured_range(instance.measurements.anchor_ranges, link);
  }
  return out;
}

CostFunction::CostFunction(const ProblemInstance& instance, Family family)
    : sensors_(instance.network.sensors), dim_(instance.network.dim), family_(family) {
  if (family == Family::huber && !(instance.loss.huber_radius > 0.0)) {
    throw std::invalid_argument("huber family requires a positive radius");
  }
  edge_terms_.reserve(instance.network.edges.size());
  for (const auto& e : instance.network.edges) {
    const Edge key = make_edge(e.first, e.second);
    EdgeTerm term;
    term.i = key.first;
    term.j = key.second;
    term.range = measured_range(instance.measurements.ranges, key);
    term.radius = instance.loss.radius_for(key);
    if (family == Family::huber && !(term.radius > 0.0)) {
      throw std::invalid_argument("nonpositive huber radius override");
    }
    edge_terms_.push_back(term);
  }
  anchor_terms_.reserve(instance.network.anchor_links.size());
  for (const auto& link : instance.network.anchor_links) {
    AnchorTerm term;
    term.i = link.first;
    term.range = measured_range(instance.measurements.anchor_ranges, link);
    term.radius = instance.loss.radius_for(link);
    if (family == Family::huber && !(term.radius > 0.0)) {
      throw std::invalid_argument("nonpositive huber radius override");
    }
    term.anchor.setZero();
    term.anchor.head(dim_) = instance.network.anchors.row(link.second).transpose();
    anchor_terms_.push_back(term);
  }
}

double CostFunction::value(const Eigen::VectorXd& stacked) const {
  double total = 0.0;
  for (const auto& term : edge_terms_) {
    double sq = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double diff = stacked[term.i * dim_ + d] - stacked[term.j * dim_ + d];
      sq += diff * diff;
    }
    const double delta = std::sqrt(sq) - term.range;
    total += convexified_loss(family_, delta, term.radius).value;
  }
  for (const auto& term : anchor_terms_) {
    double sq = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const double diff = stacked[term.i * dim_ + d] - term.anchor[d];
      sq += diff * diff;
    }
    const double delta = std::sqrt(sq) - term.range;
    total += convexified_loss(family_, delta, term.radius).value;
  }
  return total;
}

double CostFunction::value_and_gradient(const Eigen::VectorXd& stacked,
                                        Eigen::VectorXd& gradient) const {
  gradient.setZero(size());
  double total = 0.0;
  // Deterministic accumulation order: edges first, then anchor links, both in
  // the network's canonical sorted order.
  for (const auto& term : edge_terms_) {
    double diff[3] = {0.0, 0.0, 0.0};
    double sq = 0.0;
    for (int d = 0; d < dim_; ++d) {
      diff[d] = stacked[term.i * dim_ + d] - stacked[term.j * dim_ + d];
      sq += diff[d] * diff[d];
    }
    const double dist = std::sqrt(sq);
    const LossValue lv = convexified_loss(family_, dist - term.range, term.radius);
    total += lv.value;
    if (lv.derivative != 0.0 && dist > 0.0) {
      const double scale = lv.derivative / dist;
      for (int d = 0; d < dim_; ++d) {
        gradient[term.i * dim_ + d] += scale * diff[d];
        gradient[term.j * dim_ + d] -= scale * diff[d];
      }
    }
  }
  for (const auto& term : anchor_terms_) {
    double diff[3] = {0.0, 0.0, 0.0};
    double sq = 0.0;
    for (int d = 0; d < dim_; ++d) {
      diff[d] = stacked[term.i * dim_ + d] - term.anchor[d];
      sq += diff[d] * diff[d];
    }
    const double dist = std::sqrt(sq);
    const LossValue lv = convexified_loss(family_, dist - term.range, term.radius);
    total += lv.value;
    if (lv.derivative != 0.0 && dist > 0.0) {
      const double scale = lv.derivative / dist;
      for (int d = 0; d < dim_; ++d) {
        gradient[term.i * dim_ + d] += scale * diff[d];
      }
    }
  }
  return total;
}

CostEval eval_convex(const ProblemInstance& instance, const Positions& positions, Family family) {
  check_shape(instance, positions);
  CostFunction f(instance, family);
  CostEval eval;
  const Eigen::VectorXd x = stack(positions);
  eval.value = f.value_and_gradient(x, eval.gradient);
  return eval;
}

CostEval eval_nonconvex(const ProblemInstance& instance, const Positions& positions, Family family,
                        QuadraticScaling scaling) {
  check_shape(instance, positions);
  const int dim = instance.network.dim;
  const double factor =
      (family == Family::quadratic && scaling == QuadraticScaling::ml_half) ? 0.5 : 1.0;
  CostEval eval;
  eval.gradient.setZero(instance.network.sensors * dim);
  for (const auto& e : instance.network.edges) {
    const Edge key = make_edge(e.first, e.second);
    const Eigen::VectorXd diff =
        (positions.coords.row(key.first) - positions.coords.row(key.second)).transpose();
    const double dist = diff.norm();
    const double d = measured_range(instance.measurements.ranges, key);
    const LossValue lv = family_loss(family, dist - d, instance.loss.radius_for(key));
    eval.value += factor * lv.value;
    if (dist > 0.0 && lv.derivative != 0.0) {
      const Eigen::VectorXd g = (factor * lv.derivative / dist) * diff;
      eval.gradient.segment(key.first * dim, dim) += g;
      eval.gradient.segment(key.second * dim, dim) -= g;
    }
  }
  for (const auto& link : instance.network.anchor_links) {
    const Eigen::VectorXd diff =
        (positions.coords.row(link.first) - instance.network.anchors.row(link.second)).transpose();
    const double dist = diff.norm();
    const double r = measured_range(instance.measurements.anchor_ranges, link);
    const LossValue lv = family_loss(family, dist - r, instance.loss.radius_for(link));
    eval.value += factor * lv.value;
    if (dist > 0.0 && lv.derivative != 0.0) {
      eval.gradient.segment(link.first * dim, dim) += (factor * lv.derivative / dist) * diff;
    }
  }
  return eval;
}

double gradient_check(const ProblemInstance& instance, const Positions& positions, Family family,
                      double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient_check: step must be > 0");
  check_shape(instance, positions);
  CostFunction f(instance, family);
  Eigen::VectorXd x = stack(positions);
  Eigen::VectorXd analytic;
  f.value_and_gradient(x, analytic);
  double worst = 0.0;
  for (int c = 0; c < x.size(); ++c) {
    const double saved = x[c];
    x[c] = saved + step;
    const double fp = f.value(x);
    x[c] = saved - step;
    const double fm = f.value(x);
    x[c] = saved;
    const double fd = (fp - fm) / (2.0 * step);
    const double denom = std::max({1.0, std::abs(analytic[c]), std::abs(fd)});
    worst = std::max(worst, std::abs(analytic[c] - fd) / denom);
  }
  return worst;
}

}  // namespace netloc
