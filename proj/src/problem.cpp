#include "efp/problem.hpp"

#include <algorithm>
#include <cmath>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"

namespace efp {

Problem::Problem(std::vector<ScalarLoss> losses,
                 std::shared_ptr<const FeatureFamily> features, double lambda,
                 double lambda_prime)
    : losses_(std::move(losses)),
      features_(std::move(features)),
      lambda_(lambda),
      lambda_prime_(lambda_prime) {
  if (!features_) throw ConfigError("Problem: null feature family");
  if (losses_.empty()) throw ConfigError("Problem: need at least one term");
  if (losses_.size() != features_->count())
    throw ConfigError("Problem: losses and features must have matching length");
  if (!(lambda_ > 0.0)) throw ConfigError("Problem: lambda must be > 0");
  if (!(lambda_prime_ >= 0.0)) throw ConfigError("Problem: lambda' must be >= 0");
}

std::vector<double> Problem::coeffs_from_averages(std::span<const double> H) const {
  if (H.size() != n()) throw ConfigError("coeffs_from_averages: length mismatch");
  std::vector<double> g(n());
  for (std::size_t i = 0; i < n(); ++i) {
    double z = H[i];
    if (losses_[i].kind() == LossKind::kNegLog) z = std::max(z, 1e-12);
    g[i] = losses_[i].deriv(z);
  }
  return g;
}

double f0_value(const Problem& problem, std::span<const double> H) {
  if (H.size() != problem.n()) throw ConfigError("f0_value: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i)
    sum += problem.loss(i).value(H[i]);
  return sum / static_cast<double>(problem.n());
}

double predictor_value(const Ensemble& ensemble, const FeatureFamily& features,
                       std::size_t i) {
  double sum = 0.0;
  for (std::size_t r = 0; r < ensemble.size(); ++r)
    sum += features.value_one(i, ensemble.particle(r));
  return sum / static_cast<double>(ensemble.size());
}

std::vector<double> empirical_averages(const Ensemble& ensemble,
                                       const FeatureFamily& features) {
  const std::size_t m = ensemble.size();
  const std::size_t n = features.count();
  constexpr std::size_t kChunk = 16;
  const std::size_t num_chunks = (m + kChunk - 1) / kChunk;

  std::vector<std::vector<double>> partial(num_chunks);
  parallel_chunks(m, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> acc(n, 0.0);
    std::vector<double> vals(n);
    for (std::size_t r = begin; r < end; ++r) {
      features.values(ensemble.particle(r), vals);
      for (std::size_t i = 0; i < n; ++i) acc[i] += vals[i];
    }
    partial[c] = std::move(acc);
  });

  std::vector<double> mean(n, 0.0);
  for (const auto& acc : partial)
    for (std::size_t i = 0; i < n; ++i) mean[i] += acc[i];
  const double inv_m = 1.0 / static_cast<double>(m);
  for (double& v : mean) v *= inv_m;
  return mean;
}

double mean_squared_norm(const Ensemble& ensemble) {
  double sum = 0.0;
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    for (double x : ensemble.particle(r)) sum += x * x;
  }
  return sum / static_cast<double>(ensemble.size());
}

}  // namespace efp
