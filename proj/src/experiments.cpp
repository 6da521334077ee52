#include "efp/experiments.hpp"

#include <cmath>

#include "efp/errors.hpp"
#include "efp/rng.hpp"

namespace efp {

namespace {
constexpr std::uint64_t kTeacherStreamKey = 0x7eac4e5;
}

Problem make_student_teacher(std::size_t n, std::size_t d,
                             std::size_t teacher_width, std::uint64_t seed,
                             double lambda, double lambda_prime) {
  if (n < 1 || d < 1) throw ConfigError("make_student_teacher: need n, d >= 1");

  // Inputs uniform on the unit sphere.
  std::vector<double> inputs(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, i, kTeacherStreamKey);
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      inputs[i * d + j] = rng.normal();
      norm_sq += inputs[i * d + j] * inputs[i * d + j];
    }
    const double inv = 1.0 / std::max(std::sqrt(norm_sq), 1e-300);
    for (std::size_t j = 0; j < d; ++j) inputs[i * d + j] *= inv;
  }

  // Teacher: y = (1/K) sum_k b_k cos(<w_k, x>), w_k ~ N(0, 4I), b_k = +-1.
  std::vector<double> teacher_w(teacher_width * d);
  std::vector<double> teacher_b(teacher_width);
  for (std::size_t k = 0; k < teacher_width; ++k) {
    RngStream rng(seed, k, kTeacherStreamKey + 1);
    for (std::size_t j = 0; j < d; ++j) teacher_w[k * d + j] = 2.0 * rng.normal();
    teacher_b[k] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }

  std::vector<ScalarLoss> losses;
  losses.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0.0;
    for (std::size_t k = 0; k < teacher_width; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        dot += teacher_w[k * d + j] * inputs[i * d + j];
      y += teacher_b[k] * std::cos(dot);
    }
    if (teacher_width > 0) y /= static_cast<double>(teacher_width);
    losses.push_back(ScalarLoss::squared(y));
  }

  auto features = std::make_shared<NeuronFeatures>(std::move(inputs), d);
  return Problem(std::move(losses), std::move(features), lambda, lambda_prime);
}

Problem make_density_problem(std::vector<double> obs_flat, std::size_t d,
                             double sigma, double lambda, double lambda_prime) {
  if (!(sigma > 0.0)) throw ConfigError("make_density_problem: sigma must be > 0");
  if (obs_flat.empty() || d < 1 || obs_flat.size() % d != 0)
    throw ConfigError("make_density_problem: bad observation array");
  const std::size_t n = obs_flat.size() / d;
  std::vector<ScalarLoss> losses(n, ScalarLoss::neg_log());
  auto features =
      std::make_shared<GaussianKernelFeatures>(std::move(obs_flat), d, sigma);
  return Problem(std::move(losses), std::move(features), lambda, lambda_prime);
}

Problem make_toy1d_problem(double target, double lambda, double lambda_prime) {
  std::vector<ScalarLoss> losses{ScalarLoss::squared(target)};
  return Problem(std::move(losses), LinearFeatures::first_coordinate(1), lambda,
                 lambda_prime);
}

Problem make_synth_image_problem(const GrayImage& target, double edge_sharpness,
                                 double lambda, double lambda_prime) {
  if (target.size() == 0) throw ConfigError("make_synth_image_problem: empty target");
  RenderConfig cfg;
  cfg.width = target.width;
  cfg.height = target.height;
  cfg.edge_sharpness = edge_sharpness;
  std::vector<ScalarLoss> losses;
  losses.reserve(target.size());
  for (double v : target.pixels) losses.push_back(ScalarLoss::squared(v));
  return Problem(std::move(losses), std::make_shared<TrianglePixelFeatures>(cfg),
                 lambda, lambda_prime);
}

double toy1d_gibbs_mean(const Problem& toy, double H) {
  // Potential g*theta + lambda'*theta^2 completes to a Gaussian centred at
  // -g / (2 lambda').
  if (toy.n() != 1 || toy.dim() != 1)
    throw ConfigError("toy1d_gibbs_mean: expects the 1-D single-term problem");
  const double g = toy.loss(0).deriv(H);
  return -g / (2.0 * toy.lambda_prime());
}

double toy1d_fixed_point(const Problem& toy, double damping, std::size_t iters,
                         double tol) {
  double H = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const double next = (1.0 - damping) * H + damping * toy1d_gibbs_mean(toy, H);
    if (std::abs(next - H) < tol) return next;
    H = next;
  }
  return H;
}

}  // namespace efp
