#pragma once

#include <string>
#include <vector>

#include "efp/config.hpp"
#include "efp/duality.hpp"

namespace efp {

inline constexpr const char* kVersion = "0.1.0";

/// Everything a finished run leaves behind in memory; the same data lands in
/// out_dir as diagnostics.csv + meta.json (+ images for synth-image).
struct RunResult {
  std::vector<DiagnosticsRow> rows;
  // synth-image extras: mean squared error against the target.
  double initial_sq_error = 0.0;
  double final_sq_error_h = 0.0;      // tracked-average image
  double final_sq_error_gibbs = 0.0;  // fresh-Gibbs predictor image
};

/// Training drivers; `algo` config key selects efp (default), mfld or pda.
RunResult run_train_nn(const FlatConfig& cfg, const std::string& out_dir);
RunResult run_density(const FlatConfig& cfg, const std::string& out_dir);
RunResult run_toy1d(const FlatConfig& cfg, const std::string& out_dir);
RunResult run_synth_image(const FlatConfig& cfg, const std::string& out_dir);

/// Default diagnostics cadence: every iteration up to 500 outer iterations,
/// else ceil(T / 500).
std::size_t default_diag_every(std::size_t outer_iters);

void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows,
                           const std::string& path);

}  // namespace efp
