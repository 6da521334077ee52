// Test-only oracles, independent of the library paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace efp::test {

/// Brute-force Fenchel conjugate: sup over a 1-D grid of z*g - l(z).
inline double grid_sup_conjugate(const std::function<double(double)>& loss_value,
                                 double g, double z_min, double z_max,
                                 double step) {
  double best = -1e300;
  for (double z = z_min; z <= z_max; z += step)
    best = std::max(best, z * g - loss_value(z));
  return best;
}

/// Central finite difference of a scalar function along coordinate j.
inline double central_diff(const std::function<double(std::span<const double>)>& fn,
                           std::vector<double> theta, std::size_t j, double h) {
  const double saved = theta[j];
  theta[j] = saved + h;
  const double up = fn(theta);
  theta[j] = saved - h;
  const double down = fn(theta);
  return (up - down) / (2.0 * h);
}

/// Differential entropy of N(mean, sd^2 I_d).
inline double gaussian_entropy(double sd, std::size_t d) {
  return 0.5 * static_cast<double>(d) *
         std::log(2.0 * 3.14159265358979323846 * 2.718281828459045 * sd * sd);
}

}  // namespace efp::test
