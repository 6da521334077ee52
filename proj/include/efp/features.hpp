#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace efp {

/// A family of n feature functions h_i : R^d -> R sharing one parameter theta.
///
/// The batch entry points (values / weighted_grad) are the hot path: they
/// evaluate all n indices in a single pass so per-theta work (a dot product,
/// a rasterization) is shared. value_one / grad_one exist for tests and
/// spot diagnostics.
class FeatureFamily {
 public:
  virtual ~FeatureFamily() = default;

  virtual std::size_t count() const = 0;  // n
  virtual std::size_t dim() const = 0;    // d

  /// out[i] = h_i(theta) for all i; out.size() == count().
  virtual void values(std::span<const double> theta, std::span<double> out) const = 0;

  /// grad_out = sum_i coeff[i] * grad h_i(theta); grad_out.size() == dim().
  virtual void weighted_grad(std::span<const double> theta,
                             std::span<const double> coeff,
                             std::span<double> grad_out) const = 0;

  virtual double value_one(std::size_t i, std::span<const double> theta) const = 0;
  virtual void grad_one(std::size_t i, std::span<const double> theta,
                        std::span<double> grad_out) const = 0;
};

/// h_i(theta) = <w_i, theta>. The workhorse of analytic oracles: the induced
/// Gibbs measure is an exact Gaussian.
class LinearFeatures final : public FeatureFamily {
 public:
  LinearFeatures(std::vector<double> weights_flat, std::size_t dim);

  /// n = 1, h(theta) = theta_1 in d dimensions.
  static std::shared_ptr<LinearFeatures> first_coordinate(std::size_t dim);

  std::size_t count() const override { return count_; }
  std::size_t dim() const override { return dim_; }
  void values(std::span<const double> theta, std::span<double> out) const override;
  void weighted_grad(std::span<const double> theta, std::span<const double> coeff,
                     std::span<double> grad_out) const override;
  double value_one(std::size_t i, std::span<const double> theta) const override;
  void grad_one(std::size_t i, std::span<const double> theta,
                std::span<double> grad_out) const override;

  std::span<const double> weight(std::size_t i) const {
    return {weights_.data() + i * dim_, dim_};
  }

 private:
  std::vector<double> weights_;  // n x d row-major
  std::size_t dim_;
  std::size_t count_;
};

/// One tanh neuron per training input: h_i(theta) = tanh(<theta, x_i>).
class NeuronFeatures final : public FeatureFamily {
 public:
  NeuronFeatures(std::vector<double> inputs_flat, std::size_t dim);

  std::size_t count() const override { return count_; }
  std::size_t dim() const override { return dim_; }
  void values(std::span<const double> theta, std::span<double> out) const override;
  void weighted_grad(std::span<const double> theta, std::span<const double> coeff,
                     std::span<double> grad_out) const override;
  double value_one(std::size_t i, std::span<const double> theta) const override;
  void grad_one(std::size_t i, std::span<const double> theta,
                std::span<double> grad_out) const override;

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * dim_, dim_};
  }

 private:
  std::vector<double> inputs_;  // n x d row-major
  std::size_t dim_;
  std::size_t count_;
};

/// Gaussian bumps centred at observations:
/// h_i(theta) = (2 pi sigma^2)^{-d/2} exp(-|theta - zeta_i|^2 / (2 sigma^2)).
class GaussianKernelFeatures final : public FeatureFamily {
 public:
  GaussianKernelFeatures(std::vector<double> centers_flat, std::size_t dim,
                         double sigma);

  std::size_t count() const override { return count_; }
  std::size_t dim() const override { return dim_; }
  void values(std::span<const double> theta, std::span<double> out) const override;
  void weighted_grad(std::span<const double> theta, std::span<const double> coeff,
                     std::span<double> grad_out) const override;
  double value_one(std::size_t i, std::span<const double> theta) const override;
  void grad_one(std::size_t i, std::span<const double> theta,
                std::span<double> grad_out) const override;

  double sigma() const { return sigma_; }
  /// sup over theta: the kernel peak (2 pi sigma^2)^{-d/2}.
  double peak() const { return peak_; }

 private:
  std::vector<double> centers_;  // n x d row-major
  std::size_t dim_;
  std::size_t count_;
  double sigma_;
  double peak_;
};

}  // namespace efp
