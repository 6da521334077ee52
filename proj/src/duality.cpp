#include "efp/duality.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>
#include <vector>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"
#include "efp/rng.hpp"

namespace efp {

namespace {

constexpr std::uint64_t kLogZStreamKey = 0x10627a;
constexpr std::uint64_t kJitterStreamKey = 0x217e6;

// digamma at a positive integer: psi(n) = -gamma + sum_{j<n} 1/j.
double digamma_int(std::size_t n) {
  double s = -std::numbers::egamma;
  for (std::size_t j = 1; j < n; ++j) s += 1.0 / static_cast<double>(j);
  return s;
}

double unit_ball_log_volume(std::size_t d) {
  const double hd = 0.5 * static_cast<double>(d);
  return hd * std::log(std::numbers::pi) - std::lgamma(hd + 1.0);
}

}  // namespace

LogPartitionEstimate log_partition(const GibbsSpec& spec, std::size_t mc_samples,
                                   std::uint64_t seed) {
  const Problem& p = *spec.problem;
  if (!(p.lambda_prime() > 0.0))
    throw ConfigError("log_partition: lambda' must be > 0 for a proper base measure");
  if (mc_samples < 1) throw ConfigError("log_partition: need at least one sample");

  const std::size_t d = p.dim();
  const std::size_t n = p.n();
  const double lambda = p.lambda();
  const double nu_sd = std::sqrt(lambda / (2.0 * p.lambda_prime()));
  const double log_z_nu =
      0.5 * static_cast<double>(d) * std::log(std::numbers::pi * lambda / p.lambda_prime());

  // Exponents a_k = -(1/(lambda n)) sum_i g_i h_i(theta_k), theta_k ~ nu.
  std::vector<double> a(mc_samples);
  const double scale = -1.0 / (lambda * static_cast<double>(n));
  parallel_chunks(mc_samples, 256, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> theta(d), h(n);
    for (std::size_t k = begin; k < end; ++k) {
      RngStream rng(seed, k, kLogZStreamKey);
      for (std::size_t j = 0; j < d; ++j) theta[j] = nu_sd * rng.normal();
      p.features().values(theta, h);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += spec.coeffs[i] * h[i];
      a[k] = scale * dot;
    }
  });

  const double peak = *std::max_element(a.begin(), a.end());
  double sum_exp = 0.0;
  for (double v : a) sum_exp += std::exp(v - peak);
  const double count = static_cast<double>(mc_samples);
  const double log_mean = peak + std::log(sum_exp / count);

  double std_err = 0.0;
  if (mc_samples > 1) {
    // Leave-one-out jackknife of the log-mean-exp.
    std::vector<double> rep(mc_samples);
    double rep_mean = 0.0;
    for (std::size_t k = 0; k < mc_samples; ++k) {
      const double rest = std::max(sum_exp - std::exp(a[k] - peak), 1e-300);
      rep[k] = peak + std::log(rest / (count - 1.0));
      rep_mean += rep[k];
    }
    rep_mean /= count;
    double ss = 0.0;
    for (double r : rep) ss += (r - rep_mean) * (r - rep_mean);
    std_err = std::sqrt(std::max(0.0, (count - 1.0) / count * ss));
  }

  return {log_z_nu + log_mean, std_err, mc_samples};
}

double dual_value(const Problem& problem, std::span<const double> g,
                  const LogPartitionEstimate& log_z) {
  if (g.size() != problem.n()) throw ConfigError("dual_value: length mismatch");
  double conj = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i)
    conj += problem.loss(i).conjugate(g[i]);
  return -conj / static_cast<double>(problem.n()) - problem.lambda() * log_z.value;
}

double entropy_knn(const Ensemble& ensemble, std::size_t k) {
  const std::size_t m = ensemble.size();
  const std::size_t d = ensemble.dim();
  if (k < 1 || m <= k)
    throw ConfigError("entropy_knn: need m > k >= 1");

  // Count distinct particles; jitter exact duplicates.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = ensemble.particle(a), pb = ensemble.particle(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    auto pa = ensemble.particle(a), pb = ensemble.particle(b);
    return std::equal(pa.begin(), pa.end(), pb.begin());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = m == 0 ? 0 : 1;
  std::vector<std::size_t> dup_indices;
  for (std::size_t s = 1; s < m; ++s) {
    if (equal(order[s], order[s - 1]))
      dup_indices.push_back(order[s]);
    else
      ++distinct;
  }
  if (distinct < k + 1)
    throw DegenerateError("entropy_knn: fewer than k+1 distinct particles");

  std::vector<double> points(ensemble.data(), ensemble.data() + m * d);
  if (!dup_indices.empty()) {
    double scale = 0.0;
    for (double x : points) scale = std::max(scale, std::abs(x));
    scale = std::max(scale, 1.0);
    std::cerr << "[efp] entropy_knn: jittering " << dup_indices.size()
              << " duplicate particle(s)\n";
    for (std::size_t r : dup_indices) {
      RngStream rng(kJitterStreamKey, r);
      for (std::size_t j = 0; j < d; ++j)
        points[r * d + j] += 1e-12 * scale * rng.normal();
    }
  }

  // k-th nearest neighbour distance per point, brute force.
  std::vector<double> log_r(m);
  parallel_chunks(m, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> best(k);
    for (std::size_t r = begin; r < end; ++r) {
      std::size_t filled = 0;
      const double* pr = points.data() + r * d;
      for (std::size_t s = 0; s < m; ++s) {
        if (s == r) continue;
        const double* ps = points.data() + s * d;
        double sq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = pr[j] - ps[j];
          sq += diff * diff;
        }
        if (filled < k) {
          best[filled++] = sq;
          if (filled == k) std::make_heap(best.begin(), best.end());
        } else if (sq < best.front()) {
          std::pop_heap(best.begin(), best.end());
          best.back() = sq;
          std::push_heap(best.begin(), best.end());
        }
      }
      log_r[r] = 0.5 * std::log(best.front());
    }
  });

  double mean_log_r = 0.0;
  for (double v : log_r) mean_log_r += v;
  mean_log_r /= static_cast<double>(m);

  const double h_diff = digamma_int(m) - digamma_int(k) + unit_ball_log_volume(d) +
                        static_cast<double>(d) * mean_log_r;
  return -h_diff;
}

double primal_value(const Problem& problem, std::span<const double> H,
                    const Ensemble& gibbs, std::size_t k) {
  double value = f0_value(problem, H);
  if (problem.lambda_prime() > 0.0)
    value += problem.lambda_prime() * mean_squared_norm(gibbs);
  value += problem.lambda() * entropy_knn(gibbs, k);
  return value;
}

double primal_value_mixture(const Problem& problem, const MixtureHistory& history,
                            std::size_t k) {
  if (history.components.empty())
    throw ConfigError("primal_value_mixture: empty history");
  const std::vector<double> H = mixture_averages(history, problem.features());
  double value = f0_value(problem, H);

  double msn = 0.0;
  for (const auto& c : history.components)
    msn += c.weight * mean_squared_norm(c.ensemble);
  value += problem.lambda_prime() * msn;

  // Systematic resampling to a flat ensemble for the entropy term.
  const std::size_t d = history.components.front().ensemble.dim();
  const std::size_t target = history.total_particles();
  struct Slot {
    double weight;
    const Ensemble* ens;
    std::size_t index;
  };
  std::vector<Slot> slots;
  for (const auto& c : history.components) {
    const double w = c.weight / static_cast<double>(c.ensemble.size());
    for (std::size_t r = 0; r < c.ensemble.size(); ++r)
      slots.push_back({w, &c.ensemble, r});
  }
  Ensemble flat(target, d);
  std::size_t slot = 0;
  double cum = slots.empty() ? 0.0 : slots[0].weight;
  for (std::size_t i = 0; i < target; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(target);
    while (cum < u && slot + 1 < slots.size()) cum += slots[++slot].weight;
    auto src = slots[slot].ens->particle(slots[slot].index);
    auto dst = flat.particle(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  value += problem.lambda() * entropy_knn(flat, k);
  return value;
}

DiagnosticsRow duality_gap(const Problem& problem, const RunningAverages& averages,
                           const Ensemble& gibbs, const DiagnosticsOptions& opts,
                           double wall_ms) {
  const std::vector<double> g = problem.coeffs_from_averages(averages.h);
  GibbsSpec spec{&problem, g};
  const std::uint64_t row_seed =
      RngStream::splitmix64(opts.seed ^ (0x9e3779b9ULL + averages.iteration));
  const LogPartitionEstimate log_z = log_partition(spec, opts.mc_samples, row_seed);

  DiagnosticsRow row;
  row.iter = averages.iteration;
  row.f0 = f0_value(problem, averages.h);
  row.primal = primal_value(problem, averages.h, gibbs, opts.knn_k);
  row.dual = dual_value(problem, g, log_z);
  row.gap = row.primal - row.dual;
  row.kl_est = row.gap / problem.lambda();
  row.logz_stderr = log_z.std_err;
  row.wall_ms = wall_ms;
  return row;
}

TheoryConstants theory_constants(double lambda, double outer_step) {
  TheoryConstants c;
  c.c_lambda = std::exp(4.0 / lambda);
  c.t0 = std::ceil(1.0 / outer_step);
  c.gap_floor = 7.0 * outer_step * (1.0 + c.c_lambda) / lambda;
  return c;
}

}  // namespace efp
