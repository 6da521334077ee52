#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "efp/ensemble.hpp"
#include "efp/gibbs.hpp"
#include "efp/problem.hpp"

namespace efp {

/// The n tracked statistics H_i ~ E_mu[h_i]. Together with the loss
/// derivatives these determine the Gibbs potential, so no past particles
/// need to be stored.
struct RunningAverages {
  std::vector<double> h;
  std::size_t iteration = 0;
};

/// Outer-loop configuration. outer_step is the fused eta*gamma: the paper
/// only ever uses the product.
struct EfpConfig {
  double outer_step = 0.01;
  std::size_t outer_iters = 100;
  std::size_t particles = 1000;
  LmcConfig lmc;
  double init_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // warns (stderr) when outer_step > 1/8
};

struct EfpState {
  RunningAverages averages;
  Ensemble gibbs;  // the particles theta_r^{(t)} from the latest sampling pass
};

/// What diagnostics hooks observe after each outer iteration.
struct EfpIterationView {
  std::size_t iteration;  // 1-based count of updates applied
  const RunningAverages& averages;
  const Ensemble& gibbs;
  double wall_ms;  // time spent inside this outer iteration
};

using IterationHook = std::function<void(const EfpIterationView&)>;

/// H_i <- (1 - s) H_i + (s/m) sum_r h_i(theta_r); iteration += 1.
RunningAverages running_average_update(RunningAverages averages,
                                       const Ensemble& gibbs, double outer_step,
                                       const Problem& problem);

/// Memory-efficient EFP: T outer iterations of (build Gibbs coefficients from
/// H, sample m particles by warm-started LMC, fold the fresh empirical means
/// into H). Live particle storage stays at m independent of T.
EfpState efp_train(const Problem& problem, const EfpConfig& cfg,
                   const IterationHook& hook = {});

/// Weighted list of frozen ensembles: the naive particle discretization in
/// which every outer iteration appends m more particles. Kept as the test
/// oracle for the running-average recursion and the memory comparison.
struct MixtureHistory {
  struct Component {
    double weight;
    Ensemble ensemble;
  };
  std::vector<Component> components;

  std::size_t total_particles() const;
  double weight_sum() const;
};

/// Scales existing weights by (1 - s) and appends (s, gibbs).
/// An empty history with s = 1 becomes {(1, gibbs)}.
MixtureHistory naive_efp_step(MixtureHistory history, const Ensemble& gibbs,
                              double outer_step);

/// sum_c w_c (1/m_c) sum_r h_i(theta_r^{(c)}): brute force over the mixture.
double mixture_expectation(const MixtureHistory& history,
                           const FeatureFamily& features, std::size_t i);

std::vector<double> mixture_averages(const MixtureHistory& history,
                                     const FeatureFamily& features);

}  // namespace efp
