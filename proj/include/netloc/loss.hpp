#pragma once

#include "netloc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace netloc {

/// Scalar kernel evaluation. `derivative` is a valid subgradient at kinks.
struct LossValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// h_Q(t) = t^2.
inline LossValue quadratic_loss(double t) { return {t * t, 2.0 * t}; }

/// h_|.|(t) = |t|, subgradient 0 chosen at t = 0.
inline LossValue absolute_loss(double t) {
  if (t > 0.0) return {t, 1.0};
  if (t < 0.0) return {-t, -1.0};
  return {0.0, 0.0};
}

/// Huber kernel: t^2 inside radius, 2R|t| - R^2 outside. Both branches agree
/// in value (R^2) and derivative (2R) at |t| = R.
inline LossValue huber_loss(double t, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("huber_loss: radius must be > 0");
  const double a = std::abs(t);
  if (a <= radius) return {t * t, 2.0 * t};
  const double sign = t > 0.0 ? 1.0 : -1.0;
  return {2.0 * radius * a - radius * radius, 2.0 * radius * sign};
}

/// Nondecreasing clamp s(t) = max{0, t}, subgradient 0 chosen at t = 0.
inline LossValue hinge(double t) {
  if (t > 0.0) return {t, 1.0};
  return {0.0, 0.0};
}

/// Convexified kernel c = h ∘ s: flat at 0 for t <= 0, equal to the plain
/// kernel for t >= 0. Chain rule gives c'(t) = h'(s(t)) * s'(t).
inline LossValue convexified_loss(Family family, double t, double radius = 0.0) {
  switch (family) {
    case Family::quadratic: {
      if (t <= 0.0) return {0.0, 0.0};
      return {t * t, 2.0 * t};
    }
    case Family::absolute:
      return hinge(t);
    case Family::huber: {
      if (!(radius > 0.0)) throw std::invalid_argument("convexified_loss: radius must be > 0");
      if (t <= 0.0) return {0.0, 0.0};
      if (t <= radius) return {t * t, 2.0 * t};
      return {2.0 * radius * t - radius * radius, 2.0 * radius};
    }
  }
  throw std::invalid_argument("convexified_loss: unknown family");
}

/// Plain (non-convexified) kernel for the selected family.
inline LossValue family_loss(Family family, double t, double radius = 0.0) {
  switch (family) {
    case Family::quadratic: return quadratic_loss(t);
    case Family::absolute: return absolute_loss(t);
    case Family::huber: return huber_loss(t, radius);
  }
  throw std::invalid_argument("family_loss: unknown family");
}

}  // namespace netloc
