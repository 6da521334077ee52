#include "efp/baselines.hpp"

#include <chrono>
#include <string>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"
#include "efp/rng.hpp"

namespace efp {

void MfldConfig::validate(double lambda_prime) const {
  if (!(step > 0.0)) throw ConfigError("MfldConfig: step must be > 0");
  if (!(2.0 * step * lambda_prime < 1.0))
    throw ConfigError("MfldConfig: need 2*step*lambda' < 1");
  if (iters < 1 || particles < 1)
    throw ConfigError("MfldConfig: iters and particles must be >= 1");
}

EfpState mfld_train(const Problem& problem, const MfldConfig& cfg,
                    const IterationHook& hook) {
  cfg.validate(problem.lambda_prime());

  EfpState state;
  state.gibbs = Ensemble::gaussian(cfg.particles, problem.dim(), cfg.init_scale,
                                   cfg.seed, 0);
  state.averages.h = empirical_averages(state.gibbs, problem.features());
  state.averages.iteration = 0;

  const std::size_t d = problem.dim();
  for (std::size_t t = 0; t < cfg.iters; ++t) {
    const auto start = std::chrono::steady_clock::now();
    GibbsSpec spec{&problem, problem.coeffs_from_averages(state.averages.h)};

    parallel_chunks(state.gibbs.size(), 8,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                      std::vector<double> noise(d), scratch(d);
                      for (std::size_t r = begin; r < end; ++r) {
                        RngStream rng(cfg.seed, r, t + 1);
                        auto theta = state.gibbs.particle(r);
                        for (std::size_t j = 0; j < d; ++j) noise[j] = rng.normal();
                        lmc_step_inplace(spec, cfg.step, theta, noise, scratch);
                      }
                    });
    if (!state.gibbs.all_finite())
      throw NumericalError("mfld_train: ensemble diverged at step " +
                           std::to_string(t));

    state.averages.h = empirical_averages(state.gibbs, problem.features());
    state.averages.iteration = t + 1;
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  start)
            .count();
    if (hook)
      hook(EfpIterationView{state.averages.iteration, state.averages, state.gibbs,
                            wall_ms});
  }
  return state;
}

EfpState pda_simplified_train(const Problem& problem, const PdaConfig& cfg,
                              const IterationHook& hook) {
  if (cfg.outer_iters < 1 || cfg.particles < 1)
    throw ConfigError("PdaConfig: iters and particles must be >= 1");
  LmcConfig lmc = cfg.lmc;
  lmc.seed = cfg.seed;
  lmc.validate(problem.lambda_prime());

  EfpState state;
  state.gibbs = Ensemble::gaussian(cfg.particles, problem.dim(), cfg.init_scale,
                                   cfg.seed, 0);
  state.averages.h = empirical_averages(state.gibbs, problem.features());
  state.averages.iteration = 0;

  // Uniform running average of the coefficient vectors g_{mu^(s)}, s <= t.
  std::vector<double> g_bar = problem.coeffs_from_averages(state.averages.h);

  const std::size_t T = cfg.outer_iters;
  for (std::size_t t = 0; t < T; ++t) {
    const auto start = std::chrono::steady_clock::now();
    GibbsSpec spec{&problem, g_bar};
    const double progress =
        T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 1.0;
    state.gibbs = sample_gibbs(spec, std::move(state.gibbs), lmc, t + 1, progress);

    state.averages.h = empirical_averages(state.gibbs, problem.features());
    state.averages.iteration = t + 1;

    const std::vector<double> g = problem.coeffs_from_averages(state.averages.h);
    const double count = static_cast<double>(t + 2);  // g_bar now averages t+2 terms
    for (std::size_t i = 0; i < g_bar.size(); ++i)
      g_bar[i] += (g[i] - g_bar[i]) / count;

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  start)
            .count();
    if (hook)
      hook(EfpIterationView{state.averages.iteration, state.averages, state.gibbs,
                            wall_ms});
  }
  return state;
}

}  // namespace efp
