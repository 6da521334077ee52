#include "efp/gibbs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"
#include "efp/rng.hpp"

namespace efp {

GibbsSpec make_gibbs_spec(const Problem& problem, std::span<const double> H) {
  return GibbsSpec{&problem, problem.coeffs_from_averages(H)};
}

void LmcConfig::validate(double lambda_prime) const {
  switch (schedule) {
    case StepSchedule::kConstant:
      if (!(step > 0.0)) throw ConfigError("LmcConfig: step must be > 0");
      if (!(2.0 * step * lambda_prime < 1.0))
        throw ConfigError("LmcConfig: need 2*step*lambda' < 1, got step=" +
                          std::to_string(step));
      break;
    case StepSchedule::kCosineAnneal:
      if (!(anneal_end > 0.0) || !(anneal_start >= anneal_end))
        throw ConfigError("LmcConfig: cosine anneal needs start >= end > 0");
      if (!(2.0 * anneal_start * lambda_prime < 1.0))
        throw ConfigError("LmcConfig: need 2*start*lambda' < 1");
      break;
  }
}

double resolved_step(const LmcConfig& cfg, double progress) {
  if (cfg.schedule == StepSchedule::kConstant) return cfg.step;
  progress = std::min(1.0, std::max(0.0, progress));
  return cfg.anneal_end + 0.5 * (cfg.anneal_start - cfg.anneal_end) *
                              (1.0 + std::cos(std::numbers::pi * progress));
}

double data_potential_value(const GibbsSpec& spec, std::span<const double> theta) {
  const Problem& p = *spec.problem;
  const std::size_t n = p.n();
  std::vector<double> h(n);
  p.features().values(theta, h);
  double data = 0.0;
  for (std::size_t i = 0; i < n; ++i) data += spec.coeffs[i] * h[i];
  return data / static_cast<double>(n);
}

double potential_value(const GibbsSpec& spec, std::span<const double> theta) {
  double sq = 0.0;
  for (double x : theta) sq += x * x;
  return data_potential_value(spec, theta) + spec.problem->lambda_prime() * sq;
}

void data_grad(const GibbsSpec& spec, std::span<const double> theta,
               std::span<double> grad_out) {
  const Problem& p = *spec.problem;
  p.features().weighted_grad(theta, spec.coeffs, grad_out);
  const double inv_n = 1.0 / static_cast<double>(p.n());
  for (double& v : grad_out) v *= inv_n;
}

void potential_grad(const GibbsSpec& spec, std::span<const double> theta,
                    std::span<double> grad_out) {
  data_grad(spec, theta, grad_out);
  const double two_lp = 2.0 * spec.lambda_prime();
  for (std::size_t j = 0; j < theta.size(); ++j) grad_out[j] += two_lp * theta[j];
}

void lmc_step_inplace(const GibbsSpec& spec, double step, std::span<double> theta,
                      std::span<const double> noise, std::span<double> scratch) {
  data_grad(spec, theta, scratch);
  const double contraction = 1.0 - 2.0 * step * spec.lambda_prime();
  const double noise_scale = std::sqrt(2.0 * step * spec.lambda());
  for (std::size_t j = 0; j < theta.size(); ++j)
    theta[j] = contraction * theta[j] - step * scratch[j] + noise_scale * noise[j];
}

std::vector<double> lmc_step(std::span<const double> theta, const GibbsSpec& spec,
                             double step, std::span<const double> noise) {
  std::vector<double> out(theta.begin(), theta.end());
  std::vector<double> scratch(theta.size());
  lmc_step_inplace(spec, step, out, noise, scratch);
  return out;
}

Ensemble sample_gibbs(const GibbsSpec& spec, Ensemble init, const LmcConfig& cfg,
                      std::uint64_t iter_key, double anneal_progress) {
  cfg.validate(spec.lambda_prime());
  if (init.empty()) throw ConfigError("sample_gibbs: empty initial ensemble");
  if (init.dim() != spec.problem->dim())
    throw ConfigError("sample_gibbs: ensemble dimension mismatch");
  if (cfg.steps == 0) return init;

  const double step = resolved_step(cfg, anneal_progress);
  const std::size_t d = init.dim();

  parallel_chunks(init.size(), 8, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> noise(d), scratch(d);
    for (std::size_t r = begin; r < end; ++r) {
      RngStream rng(cfg.seed, r, iter_key);
      auto theta = init.particle(r);
      for (std::size_t s = 0; s < cfg.steps; ++s) {
        for (std::size_t j = 0; j < d; ++j) noise[j] = rng.normal();
        lmc_step_inplace(spec, step, theta, noise, scratch);
        for (std::size_t j = 0; j < d; ++j) {
          if (!std::isfinite(theta[j]))
            throw NumericalError("sample_gibbs: particle " + std::to_string(r) +
                                 " diverged at inner step " + std::to_string(s));
        }
      }
    }
  });
  return init;
}

double log_density_ratio(const GibbsSpec& spec_a, const GibbsSpec& spec_b,
                         std::span<const double> theta, double log_z_a,
                         double log_z_b) {
  const double lambda = spec_a.lambda();
  return (-potential_value(spec_a, theta) + potential_value(spec_b, theta)) / lambda +
         log_z_b - log_z_a;
}

}  // namespace efp
