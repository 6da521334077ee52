#pragma once

#include <cstdint>
#include <span>

#include "efp/efp.hpp"
#include "efp/gibbs.hpp"
#include "efp/problem.hpp"

namespace efp {

struct LogPartitionEstimate {
  double value;     // estimate of log integral of q_g
  double std_err;   // jackknife standard error of the log estimate
  std::size_t samples;
};

/// Importance-sampled log partition of q_g. Decomposition:
///   int q_g = Z_nu * E_{theta ~ nu}[ exp(-(1/(lambda n)) sum_i g_i h_i) ],
/// with nu = N(0, (lambda/(2 lambda')) I) and Z_nu = (pi lambda/lambda')^{d/2},
/// so the quadratic term is absorbed exactly. At g = 0 the Monte Carlo factor
/// is identically 1 and the estimate is exact with zero variance.
/// Requires lambda' > 0 (ConfigError otherwise).
LogPartitionEstimate log_partition(const GibbsSpec& spec, std::size_t mc_samples,
                                   std::uint64_t seed);

/// Dual objective D(g) = -(1/n) sum_i l_i*(g_i) - lambda * logZ.
double dual_value(const Problem& problem, std::span<const double> g,
                  const LogPartitionEstimate& log_z);

/// Negative entropy Ent(mu) = -H where H is the Kozachenko-Leonenko
/// k-nearest-neighbour differential entropy estimate. Exact duplicates are
/// jittered by 1e-12 * scale (with a warning); throws DegenerateError when
/// fewer than k+1 distinct particles remain.
double entropy_knn(const Ensemble& ensemble, std::size_t k);

/// Primal objective proxy: f0 at the tracked averages plus lambda' and
/// entropy terms of the latest Gibbs ensemble (the deployable measure).
double primal_value(const Problem& problem, std::span<const double> H,
                    const Ensemble& gibbs, std::size_t k);

/// Primal for a naive mixture (test mode): exact weighted quadratic term,
/// entropy via deterministic systematic resampling to a flat ensemble.
double primal_value_mixture(const Problem& problem, const MixtureHistory& history,
                            std::size_t k);

struct DiagnosticsRow {
  std::size_t iter = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;      // primal - dual, exactly
  double kl_est = 0.0;   // gap / lambda, exactly
  double f0 = 0.0;
  double logz_stderr = 0.0;
  double wall_ms = 0.0;
};

struct DiagnosticsOptions {
  std::size_t mc_samples = 20000;
  std::size_t knn_k = 5;
  std::uint64_t seed = 0;
};

/// The paper's central diagnostic: gap = L(mu) - D(g_mu) = lambda KL(mu|mu^).
DiagnosticsRow duality_gap(const Problem& problem, const RunningAverages& averages,
                           const Ensemble& gibbs, const DiagnosticsOptions& opts,
                           double wall_ms = 0.0);

/// Reporting-only constants from the discrete-time convergence bound.
/// The theoretical gap floor is far above observed gaps at practical
/// hyperparameters, so it is printed in run manifests, never asserted.
struct TheoryConstants {
  double c_lambda;   // exp(4/lambda)
  double t0;         // ceil(1/outer_step)
  double gap_floor;  // 7 * outer_step * (1 + c_lambda) / lambda
};

TheoryConstants theory_constants(double lambda, double outer_step);

}  // namespace efp
