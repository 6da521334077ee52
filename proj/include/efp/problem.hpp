#pragma once

#include <memory>
#include <span>
#include <vector>

#include "efp/ensemble.hpp"
#include "efp/features.hpp"
#include "efp/loss.hpp"

namespace efp {

/// Finite-sum objective over probability measures:
///   (1/n) sum_i l_i(E_mu[h_i]) + lambda' E_mu[|theta|^2] + lambda Ent(mu).
///
/// Immutable after construction; evaluation is pure and thread-safe.
class Problem {
 public:
  Problem(std::vector<ScalarLoss> losses,
          std::shared_ptr<const FeatureFamily> features, double lambda,
          double lambda_prime);

  std::size_t n() const { return losses_.size(); }
  std::size_t dim() const { return features_->dim(); }
  double lambda() const { return lambda_; }
  double lambda_prime() const { return lambda_prime_; }
  const ScalarLoss& loss(std::size_t i) const { return losses_[i]; }
  const FeatureFamily& features() const { return *features_; }
  std::shared_ptr<const FeatureFamily> features_ptr() const { return features_; }

  /// g_i = l_i'(H_i). For neg-log losses H_i is clamped below at 1e-12:
  /// kernel averages are positive in exact arithmetic but an empirical mean
  /// of far-away particles can underflow to 0, where l' = -1/z blows up.
  std::vector<double> coeffs_from_averages(std::span<const double> H) const;

 private:
  std::vector<ScalarLoss> losses_;
  std::shared_ptr<const FeatureFamily> features_;
  double lambda_;
  double lambda_prime_;
};

/// F_0 at tracked averages: (1/n) sum_i l_i(H_i).
double f0_value(const Problem& problem, std::span<const double> H);

/// (1/m) sum_r h_i(theta_r): the deployable predictor for feature i.
double predictor_value(const Ensemble& ensemble, const FeatureFamily& features,
                       std::size_t i);

/// Empirical averages of every feature over the ensemble (chunk-ordered
/// reduction, deterministic under any thread count).
std::vector<double> empirical_averages(const Ensemble& ensemble,
                                       const FeatureFamily& features);

/// Mean squared Euclidean norm over particles.
double mean_squared_norm(const Ensemble& ensemble);

}  // namespace efp
