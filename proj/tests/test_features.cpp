#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "efp/features.hpp"
#include "efp/rng.hpp"
#include "oracles.hpp"

using namespace efp;

namespace {

// Relative FD check of grad_one across all coordinates.
double fd_rel_error(const FeatureFamily& fam, std::size_t i,
                    std::vector<double> theta, double h) {
  std::vector<double> grad(fam.dim());
  fam.grad_one(i, theta, grad);
  double diff = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < fam.dim(); ++j) {
    const double fd = test::central_diff(
        [&](std::span<const double> t) { return fam.value_one(i, t); }, theta, j, h);
    diff += (fd - grad[j]) * (fd - grad[j]);
    norm += grad[j] * grad[j];
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-8);
}

}  // namespace

TEST_CASE("linear features evaluate and differentiate") {
  LinearFeatures lin({1.0, 2.0, 0.0, -1.0}, 2);  // w0 = (1,2), w1 = (0,-1)
  std::vector<double> theta{3.0, 4.0};
  std::vector<double> vals(2);
  lin.values(theta, vals);
  CHECK(vals[0] == doctest::Approx(11.0));
  CHECK(vals[1] == doctest::Approx(-4.0));

  std::vector<double> grad(2);
  lin.weighted_grad(theta, std::vector<double>{2.0, 3.0}, grad);
  CHECK(grad[0] == doctest::Approx(2.0));
  CHECK(grad[1] == doctest::Approx(1.0));

  auto first = LinearFeatures::first_coordinate(3);
  CHECK(first->value_one(0, std::vector<double>{5.0, 1.0, 2.0}) == 5.0);
}

TEST_CASE("neuron and kernel gradients pass finite differences") {
  RngStream rng(31);
  std::vector<double> inputs(6 * 3), centers(4 * 2);
  for (double& v : inputs) v = rng.normal();
  for (double& v : centers) v = rng.normal();
  NeuronFeatures neurons(inputs, 3);
  GaussianKernelFeatures kernels(centers, 2, 0.7);

  for (int k = 0; k < 20; ++k) {
    std::vector<double> t3{rng.normal(), rng.normal(), rng.normal()};
    CHECK(fd_rel_error(neurons, k % neurons.count(), t3, 1e-5) <= 1e-5);
    std::vector<double> t2{rng.normal(), rng.normal()};
    CHECK(fd_rel_error(kernels, k % kernels.count(), t2, 1e-5) <= 1e-5);
  }
}

TEST_CASE("gaussian kernel stays within its peak bound") {
  GaussianKernelFeatures kernels({0.5, -0.5}, 1, 0.4);
  const double bound = std::pow(2.0 * 3.14159265358979 * 0.16, -0.5);
  CHECK(kernels.peak() == doctest::Approx(bound));
  RngStream rng(32);
  for (int k = 0; k < 200; ++k) {
    const std::vector<double> theta{4.0 * rng.normal()};
    for (std::size_t i = 0; i < kernels.count(); ++i) {
      const double h = kernels.value_one(i, theta);
      CHECK(h >= 0.0);
      CHECK(h <= bound + 1e-15);
    }
  }
  // Value at the centre attains the peak.
  CHECK(kernels.value_one(0, std::vector<double>{0.5}) == doctest::Approx(bound));
}

TEST_CASE("batch paths agree with per-feature paths") {
  RngStream rng(33);
  std::vector<double> inputs(8 * 2);
  for (double& v : inputs) v = rng.normal();
  NeuronFeatures fam(inputs, 2);

  std::vector<double> theta{rng.normal(), rng.normal()};
  std::vector<double> vals(fam.count());
  fam.values(theta, vals);
  for (std::size_t i = 0; i < fam.count(); ++i)
    CHECK(vals[i] == doctest::Approx(fam.value_one(i, theta)).epsilon(1e-14));

  std::vector<double> coeff(fam.count());
  for (double& c : coeff) c = rng.normal();
  std::vector<double> batch(2), manual(2, 0.0), one(2);
  fam.weighted_grad(theta, coeff, batch);
  for (std::size_t i = 0; i < fam.count(); ++i) {
    fam.grad_one(i, theta, one);
    for (std::size_t j = 0; j < 2; ++j) manual[j] += coeff[i] * one[j];
  }
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(batch[j] == doctest::Approx(manual[j]).epsilon(1e-12));
}

TEST_CASE("tanh neuron outputs are bounded by one") {
  RngStream rng(34);
  std::vector<double> inputs(5 * 2);
  for (double& v : inputs) v = rng.normal();
  NeuronFeatures fam(inputs, 2);
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> theta{3.0 * rng.normal(), 3.0 * rng.normal()};
    for (std::size_t i = 0; i < fam.count(); ++i)
      CHECK(std::abs(fam.value_one(i, theta)) <= 1.0);
  }
}
