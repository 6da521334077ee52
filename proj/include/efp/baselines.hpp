#pragma once

#include <cstdint>

#include "efp/efp.hpp"

namespace efp {

/// Mean-field Langevin dynamics: noisy gradient descent in which the Gibbs
/// coefficients are refreshed from the ensemble at every inner step.
struct MfldConfig {
  double step = 0.01;       // eta'
  std::size_t iters = 1000;
  std::size_t particles = 1000;
  double init_scale = 1.0;
  std::uint64_t seed = 0;

  void validate(double lambda_prime) const;
};

/// Trains with MFLD; the hook sees the same view as EFP (averages = fresh
/// empirical means of the current ensemble).
EfpState mfld_train(const Problem& problem, const MfldConfig& cfg,
                    const IterationHook& hook = {});

/// Particle dual averaging, simplified: the Gibbs potential uses the uniform
/// average of all past coefficient vectors instead of the weighted scheme.
struct PdaConfig {
  std::size_t outer_iters = 100;
  std::size_t particles = 1000;
  LmcConfig lmc;
  double init_scale = 1.0;
  std::uint64_t seed = 0;
};

EfpState pda_simplified_train(const Problem& problem, const PdaConfig& cfg,
                              const IterationHook& hook = {});

}  // namespace efp
