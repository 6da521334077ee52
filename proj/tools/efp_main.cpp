// Command-line harness: experiment drivers plus the verification suite.
//
// Exit codes: 0 success, 2 config error, 3 numerical/domain error,
// 4 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "efp/config.hpp"
#include "efp/errors.hpp"
#include "efp/parallel.hpp"
#include "efp/runner.hpp"
#include "efp/verify.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  // Optional flag values; only applied when the user passed them.
  std::string seed, mc_samples, knn_k, threads;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key=value config file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "RNG seed (overrides config)");
  cmd->add_option("--mc-samples", flags.mc_samples,
                  "Monte Carlo samples for the log-partition estimator");
  cmd->add_option("--knn-k", flags.knn_k, "k for the k-NN entropy estimator");
  cmd->add_option("--threads", flags.threads, "worker thread cap");
  cmd->add_option("--set", flags.overrides, "extra key=value overrides")
      ->type_name("KEY=VALUE");
}

efp::FlatConfig resolve(const CommonFlags& flags) {
  efp::FlatConfig cfg;
  if (!flags.config_path.empty()) cfg = efp::FlatConfig::load(flags.config_path);
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw efp::ConfigError("--set expects KEY=VALUE, got: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!flags.seed.empty()) cfg.set("seed", flags.seed);
  if (!flags.mc_samples.empty()) cfg.set("diag.mc_samples", flags.mc_samples);
  if (!flags.knn_k.empty()) cfg.set("diag.knn_k", flags.knn_k);
  if (!flags.threads.empty()) cfg.set("threads", flags.threads);
  return cfg;
}

void print_summary(const efp::RunResult& result) {
  if (result.rows.empty()) return;
  const auto& last = result.rows.back();
  std::printf("final: iter=%zu primal=%.6g dual=%.6g gap=%.6g kl=%.6g f0=%.6g\n",
              last.iter, last.primal, last.dual, last.gap, last.kl_est, last.f0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-based solver for entropy-regularized finite-sum "
               "optimization over probability measures"};
  app.require_subcommand(1);

  CommonFlags train_nn, density, synth, toy, verify_flags;
  auto* cmd_train = app.add_subcommand("train-nn", "student-teacher two-layer network");
  add_common(cmd_train, train_nn);
  auto* cmd_density = app.add_subcommand("density", "mixture density estimation");
  add_common(cmd_density, density);
  auto* cmd_synth = app.add_subcommand("synth-image", "triangle image synthesis");
  add_common(cmd_synth, synth);
  auto* cmd_toy = app.add_subcommand("toy1d", "1-D self-consistency toy");
  add_common(cmd_toy, toy);
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance property suite");
  add_common(cmd_verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_verify->parsed()) {
      const efp::FlatConfig cfg = resolve(verify_flags);
      if (cfg.has("threads")) efp::set_max_threads(cfg.get_size("threads", 0));
      const auto results = efp::verify::run_all(verify_flags.out_dir);
      bool all_ok = true;
      for (const auto& r : results) {
        std::printf("[%s] %s (%.1fs) %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.seconds, r.detail.c_str());
        all_ok = all_ok && r.passed;
      }
      return all_ok ? 0 : 4;
    }

    efp::RunResult result;
    if (cmd_train->parsed()) {
      result = efp::run_train_nn(resolve(train_nn), train_nn.out_dir);
    } else if (cmd_density->parsed()) {
      result = efp::run_density(resolve(density), density.out_dir);
    } else if (cmd_synth->parsed()) {
      result = efp::run_synth_image(resolve(synth), synth.out_dir);
    } else if (cmd_toy->parsed()) {
      result = efp::run_toy1d(resolve(toy), toy.out_dir);
    }
    print_summary(result);
    return 0;
  } catch (const efp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const efp::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const efp::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
