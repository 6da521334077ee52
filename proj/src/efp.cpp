#include "efp/efp.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "efp/errors.hpp"

namespace efp {

void EfpConfig::validate() const {
  if (!(outer_step > 0.0 && outer_step <= 1.0))
    throw ConfigError("EfpConfig: outer_step must be in (0, 1]");
  if (outer_iters < 1) throw ConfigError("EfpConfig: outer_iters must be >= 1");
  if (particles < 1) throw ConfigError("EfpConfig: particles must be >= 1");
  if (!(init_scale > 0.0)) throw ConfigError("EfpConfig: init_scale must be > 0");
  if (outer_step > 0.125)
    std::cerr << "[efp] warning: outer_step " << outer_step
              << " exceeds 1/8; discrete-time guarantees assume eta*gamma <= 1/8\n";
}

RunningAverages running_average_update(RunningAverages averages,
                                       const Ensemble& gibbs, double outer_step,
                                       const Problem& problem) {
  if (!(outer_step >= 0.0 && outer_step <= 1.0))
    throw ConfigError("running_average_update: outer_step must be in [0, 1]");
  if (averages.h.size() != problem.n())
    throw ConfigError("running_average_update: length mismatch");

  const std::vector<double> fresh = empirical_averages(gibbs, problem.features());
  for (std::size_t i = 0; i < averages.h.size(); ++i)
    averages.h[i] = (1.0 - outer_step) * averages.h[i] + outer_step * fresh[i];
  averages.iteration += 1;
  return averages;
}

EfpState efp_train(const Problem& problem, const EfpConfig& cfg,
                   const IterationHook& hook) {
  cfg.validate();
  cfg.lmc.validate(problem.lambda_prime());

  EfpState state;
  // Stream key 0 is reserved for initialization; outer iteration t uses t+1.
  state.gibbs = Ensemble::gaussian(cfg.particles, problem.dim(), cfg.init_scale,
                                   cfg.seed, 0);
  state.averages.h = empirical_averages(state.gibbs, problem.features());
  state.averages.iteration = 0;

  LmcConfig lmc = cfg.lmc;
  lmc.seed = cfg.seed;
  const std::size_t T = cfg.outer_iters;
  for (std::size_t t = 0; t < T; ++t) {
    const auto start = std::chrono::steady_clock::now();
    GibbsSpec spec = make_gibbs_spec(problem, state.averages.h);
    const double progress =
        T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 1.0;
    state.gibbs = sample_gibbs(spec, std::move(state.gibbs), lmc, t + 1, progress);
    state.averages = running_average_update(std::move(state.averages), state.gibbs,
                                            cfg.outer_step, problem);
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

std::size_t MixtureHistory::total_particles() const {
  std::size_t total = 0;
  for (const auto& c : components) total += c.ensemble.size();
  return total;
}

double MixtureHistory::weight_sum() const {
  double s = 0.0;
  for (const auto& c : components) s += c.weight;
  return s;
}

MixtureHistory naive_efp_step(MixtureHistory history, const Ensemble& gibbs,
                              double outer_step) {
  if (!(outer_step >= 0.0 && outer_step <= 1.0))
    throw ConfigError("naive_efp_step: outer_step must be in [0, 1]");
  if (!history.components.empty() &&
      std::abs(history.weight_sum() - 1.0) > 1e-12)
    throw ConfigError("naive_efp_step: history weights must sum to 1");
  for (auto& c : history.components) c.weight *= 1.0 - outer_step;
  history.components.push_back({outer_step, gibbs});
  return history;
}

double mixture_expectation(const MixtureHistory& history,
                           const FeatureFamily& features, std::size_t i) {
  double total = 0.0;
  for (const auto& c : history.components)
    total += c.weight * predictor_value(c.ensemble, features, i);
  return total;
}

std::vector<double> mixture_averages(const MixtureHistory& history,
                                     const FeatureFamily& features) {
  std::vector<double> out(features.count(), 0.0);
  for (const auto& c : history.components) {
    const std::vector<double> mean = empirical_averages(c.ensemble, features);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c.weight * mean[i];
  }
  return out;
}

}  // namespace efp
