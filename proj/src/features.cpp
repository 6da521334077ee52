#include "efp/features.hpp"

#include <cmath>
#include <numbers>

#include "efp/errors.hpp"

namespace efp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

void check_shapes(std::size_t n, std::size_t d, std::span<const double> theta,
                  std::span<const double> flat, const char* what) {
  if (d == 0 || n == 0) throw ConfigError(std::string(what) + ": empty family");
  if (flat.size() != n * d)
    throw ConfigError(std::string(what) + ": data size mismatch");
  (void)theta;
}

}  // namespace

// ---------------------------------------------------------------- Linear

LinearFeatures::LinearFeatures(std::vector<double> weights_flat, std::size_t dim)
    : weights_(std::move(weights_flat)), dim_(dim), count_(weights_.size() / dim) {
  check_shapes(count_, dim_, {}, weights_, "LinearFeatures");
}

std::shared_ptr<LinearFeatures> LinearFeatures::first_coordinate(std::size_t dim) {
  std::vector<double> w(dim, 0.0);
  w[0] = 1.0;
  return std::make_shared<LinearFeatures>(std::move(w), dim);
}

void LinearFeatures::values(std::span<const double> theta,
                            std::span<double> out) const {
  for (std::size_t i = 0; i < count_; ++i) out[i] = dot(weight(i), theta);
}

void LinearFeatures::weighted_grad(std::span<const double> theta,
                                   std::span<const double> coeff,
                                   std::span<double> grad_out) const {
  (void)theta;
  for (std::size_t j = 0; j < dim_; ++j) grad_out[j] = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double c = coeff[i];
    if (c == 0.0) continue;
    auto w = weight(i);
    for (std::size_t j = 0; j < dim_; ++j) grad_out[j] += c * w[j];
  }
}

double LinearFeatures::value_one(std::size_t i, std::span<const double> theta) const {
  return dot(weight(i), theta);
}

void LinearFeatures::grad_one(std::size_t i, std::span<const double> theta,
                              std::span<double> grad_out) const {
  (void)theta;
  auto w = weight(i);
  for (std::size_t j = 0; j < dim_; ++j) grad_out[j] = w[j];
}

// ---------------------------------------------------------------- Neuron

NeuronFeatures::NeuronFeatures(std::vector<double> inputs_flat, std::size_t dim)
    : inputs_(std::move(inputs_flat)), dim_(dim), count_(inputs_.size() / dim) {
  check_shapes(count_, dim_, {}, inputs_, "NeuronFeatures");
}

void NeuronFeatures::values(std::span<const double> theta,
                            std::span<double> out) const {
  for (std::size_t i = 0; i < count_; ++i) out[i] = std::tanh(dot(input(i), theta));
}

void NeuronFeatures::weighted_grad(std::span<const double> theta,
                                   std::span<const double> coeff,
                                   std::span<double> grad_out) const {
  for (std::size_t j = 0; j < dim_; ++j) grad_out[j] = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double c = coeff[i];
    if (c == 0.0) continue;
    auto x = input(i);
    const double t = std::tanh(dot(x, theta));
    const double scale = c * (1.0 - t * t);
    for (std::size_t j = 0; j < dim_; ++j) grad_out[j] += scale * x[j];
  }
}

double NeuronFeatures::value_one(std::size_t i, std::span<const double> theta) const {
  return std::tanh(dot(input(i), theta));
}

void NeuronFeatures::grad_one(std::size_t i, std::span<const double> theta,
                              std::span<double> grad_out) const {
  auto x = input(i);
  const double t = std::tanh(dot(x, theta));
  const double scale = 1.0 - t * t;
  for (std::size_t j = 0; j < dim_; ++j) grad_out[j] = scale * x[j];
}

// ---------------------------------------------------------------- Gaussian kernel

GaussianKernelFeatures::GaussianKernelFeatures(std::vector<double> centers_flat,
                                               std::size_t dim, double sigma)
    : centers_(std::move(centers_flat)),
      dim_(dim),
      count_(centers_.size() / dim),
      sigma_(sigma) {
  check_shapes(count_, dim_, {}, centers_, "GaussianKernelFeatures");
  if (!(sigma > 0.0)) throw ConfigError("GaussianKernelFeatures: sigma must be > 0");
  peak_ = std::pow(2.0 * std::numbers::pi * sigma_ * sigma_,
                   -0.5 * static_cast<double>(dim_));
}

void GaussianKernelFeatures::values(std::span<const double> theta,
                                    std::span<double> out) const {
  const double inv2s2 = 1.0 / (2.0 * sigma_ * sigma_);
  for (std::size_t i = 0; i < count_; ++i) {
    const double* z = centers_.data() + i * dim_;
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double r = theta[j] - z[j];
      sq += r * r;
    }
    out[i] = peak_ * std::exp(-sq * inv2s2);
  }
}

void GaussianKernelFeatures::weighted_grad(std::span<const double> theta,
                                           std::span<const double> coeff,
                                           std::span<double> grad_out) const {
  const double inv2s2 = 1.0 / (2.0 * sigma_ * sigma_);
  const double invs2 = 1.0 / (sigma_ * sigma_);
  for (std::size_t j = 0; j < dim_; ++j) grad_out[j] = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double c = coeff[i];
    if (c == 0.0) continue;
    const double* z = centers_.data() + i * dim_;
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double r = theta[j] - z[j];
      sq += r * r;
    }
    const double h = peak_ * std::exp(-sq * inv2s2);
    const double scale = -c * h * invs2;
    for (std::size_t j = 0; j < dim_; ++j) grad_out[j] += scale * (theta[j] - z[j]);
  }
}

double GaussianKernelFeatures::value_one(std::size_t i,
                                         std::span<const double> theta) const {
  const double* z = centers_.data() + i * dim_;
  double sq = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    const double r = theta[j] - z[j];
    sq += r * r;
  }
  return peak_ * std::exp(-sq / (2.0 * sigma_ * sigma_));
}

void GaussianKernelFeatures::grad_one(std::size_t i, std::span<const double> theta,
                                      std::span<double> grad_out) const {
  const double h = value_one(i, theta);
  const double* z = centers_.data() + i * dim_;
  const double invs2 = 1.0 / (sigma_ * sigma_);
  for (std::size_t j = 0; j < dim_; ++j)
    grad_out[j] = -h * invs2 * (theta[j] - z[j]);
}

}  // namespace efp
