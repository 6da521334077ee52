#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "efp/ensemble.hpp"
#include "efp/problem.hpp"

namespace efp {

/// Coefficient vector defining a Gibbs potential over the problem's features:
///   V_g(theta) = (1/n) sum_i g_i h_i(theta) + lambda' |theta|^2,
/// with unnormalized density q_g = exp(-V_g / lambda). For the proximal Gibbs
/// distribution of a measure with tracked averages H, g_i = l_i'(H_i).
struct GibbsSpec {
  const Problem* problem = nullptr;
  std::vector<double> coeffs;

  double lambda() const { return problem->lambda(); }
  double lambda_prime() const { return problem->lambda_prime(); }
};

GibbsSpec make_gibbs_spec(const Problem& problem, std::span<const double> H);

enum class StepSchedule { kConstant, kCosineAnneal };

/// Inner-loop Langevin Monte Carlo configuration.
struct LmcConfig {
  double step = 0.01;          // eta'
  std::size_t steps = 10;      // S
  StepSchedule schedule = StepSchedule::kConstant;
  double anneal_start = 0.1;   // cosine anneal endpoints
  double anneal_end = 0.01;
  std::uint64_t seed = 0;

  void validate(double lambda_prime) const;
};

/// Step size at training progress in [0,1]. The paper's cosine annealing is
/// applied across outer iterations; within one sampling call it is constant.
double resolved_step(const LmcConfig& cfg, double progress);

double potential_value(const GibbsSpec& spec, std::span<const double> theta);

/// The data part only: (1/n) sum_i g_i h_i(theta). Equals the first
/// variation of F_0 at the measure the coefficients came from.
double data_potential_value(const GibbsSpec& spec, std::span<const double> theta);

/// grad V_g = (1/n) sum_i g_i grad h_i + 2 lambda' theta.
void potential_grad(const GibbsSpec& spec, std::span<const double> theta,
                    std::span<double> grad_out);

/// The data part only: (1/n) sum_i g_i grad h_i. The quadratic term enters
/// the LMC update through the explicit (1 - 2 eta' lambda') contraction.
void data_grad(const GibbsSpec& spec, std::span<const double> theta,
               std::span<double> grad_out);

/// One LMC update with caller-supplied standard normal noise:
///   theta <- (1 - 2 eta' lambda') theta - eta' dataGrad(theta)
///            + sqrt(2 eta' lambda) xi.
std::vector<double> lmc_step(std::span<const double> theta, const GibbsSpec& spec,
                             double step, std::span<const double> noise);

/// In-place variant for hot loops; scratch must have size dim.
void lmc_step_inplace(const GibbsSpec& spec, double step, std::span<double> theta,
                      std::span<const double> noise, std::span<double> scratch);

/// Runs cfg.steps LMC updates on every particle, independent noise per
/// particle per step, streams keyed by (cfg.seed, particle, iter_key).
/// Deterministic given the seed; particles may be processed in parallel.
/// Throws NumericalError if a coordinate becomes non-finite.
Ensemble sample_gibbs(const GibbsSpec& spec, Ensemble init, const LmcConfig& cfg,
                      std::uint64_t iter_key = 0, double anneal_progress = 0.0);

/// log( q_a-normalized(theta) / q_b-normalized(theta) ) given log-partition
/// estimates for both specs.
double log_density_ratio(const GibbsSpec& spec_a, const GibbsSpec& spec_b,
                         std::span<const double> theta, double log_z_a,
                         double log_z_b);

}  // namespace efp
