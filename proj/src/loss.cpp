#include "efp/loss.hpp"

#include <cmath>

#include "efp/errors.hpp"

namespace efp {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

}  // namespace

ScalarLoss ScalarLoss::logistic(double label) {
  if (label != 1.0 && label != -1.0)
    throw ConfigError("logistic loss label must be -1 or +1");
  return {LossKind::kLogistic, label};
}

bool ScalarLoss::in_domain(double z) const {
  if (!std::isfinite(z)) return false;
  return kind_ != LossKind::kNegLog || z > 0.0;
}

bool ScalarLoss::in_conjugate_domain(double g) const {
  if (!std::isfinite(g)) return false;
  switch (kind_) {
    case LossKind::kSquared:
      return true;
    case LossKind::kLogistic: {
      const double u = g * param_;
      return u >= -1.0 && u <= 0.0;
    }
    case LossKind::kNegLog:
      return g < 0.0;
  }
  return false;
}

void ScalarLoss::check_domain(double z) const {
  if (!in_domain(z))
    throw DomainError("loss " + describe() + " evaluated outside domain at z=" +
                      std::to_string(z));
}

double ScalarLoss::value(double z) const {
  check_domain(z);
  switch (kind_) {
    case LossKind::kSquared: {
      const double r = z - param_;
      return 0.5 * r * r;
    }
    case LossKind::kLogistic:
      return softplus(-param_ * z);
    case LossKind::kNegLog:
      return -std::log(z);
  }
  return 0.0;
}

double ScalarLoss::deriv(double z) const {
  check_domain(z);
  switch (kind_) {
    case LossKind::kSquared:
      return z - param_;
    case LossKind::kLogistic:
      return -param_ * sigmoid(-param_ * z);
    case LossKind::kNegLog:
      return -1.0 / z;
  }
  return 0.0;
}

double ScalarLoss::second_deriv(double z) const {
  check_domain(z);
  switch (kind_) {
    case LossKind::kSquared:
      return 1.0;
    case LossKind::kLogistic: {
      const double s = sigmoid(param_ * z);
      return s * (1.0 - s);
    }
    case LossKind::kNegLog:
      return 1.0 / (z * z);
  }
  return 0.0;
}

double ScalarLoss::conjugate(double g) const {
  if (!in_conjugate_domain(g))
    throw DomainError("conjugate of " + describe() + " undefined at g=" +
                      std::to_string(g));
  switch (kind_) {
    case LossKind::kSquared:
      return 0.5 * g * g + param_ * g;
    case LossKind::kLogistic: {
      // sup_z { zg - log(1+exp(-yz)) } = p log p + (1-p) log(1-p), p = -y g.
      // Endpoints p in {0, 1} give the limit value 0.
      const double p = -param_ * g;
      return xlogx(p) + xlogx(1.0 - p);
    }
    case LossKind::kNegLog:
      return -1.0 - std::log(-g);
  }
  return 0.0;
}

std::string ScalarLoss::describe() const {
  switch (kind_) {
    case LossKind::kSquared:
      return "squared(target=" + std::to_string(param_) + ")";
    case LossKind::kLogistic:
      return "logistic(label=" + std::to_string(param_) + ")";
    case LossKind::kNegLog:
      return "neg_log";
  }
  return "?";
}

}  // namespace efp
