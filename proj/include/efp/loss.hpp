#pragma once

#include <string>

namespace efp {

enum class LossKind { kSquared, kLogistic, kNegLog };

/// Convex scalar loss with derivatives and Fenchel conjugate.
///
/// Kinds:
///   Squared(y):   0.5 (z - y)^2            conjugate  0.5 g^2 + y g
///   Logistic(y):  log(1 + exp(-y z))       conjugate  binary entropy, y g in [-1, 0]
///   NegLog:       -log z, z > 0            conjugate  -1 - log(-g), g < 0
class ScalarLoss {
 public:
  static ScalarLoss squared(double target) { return {LossKind::kSquared, target}; }
  static ScalarLoss logistic(double label);  // label must be -1 or +1
  static ScalarLoss neg_log() { return {LossKind::kNegLog, 0.0}; }

  LossKind kind() const { return kind_; }
  double target() const { return param_; }
  double label() const { return param_; }

  bool in_domain(double z) const;
  bool in_conjugate_domain(double g) const;

  double value(double z) const;
  double deriv(double z) const;
  double second_deriv(double z) const;
  double conjugate(double g) const;

  std::string describe() const;

 private:
  ScalarLoss(LossKind kind, double param) : kind_(kind), param_(param) {}

  void check_domain(double z) const;

  LossKind kind_;
  double param_;
};

}  // namespace efp
