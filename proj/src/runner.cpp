#include "efp/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>

#include "efp/baselines.hpp"
#include "efp/errors.hpp"
#include "efp/experiments.hpp"
#include "efp/parallel.hpp"

namespace efp {

namespace {

namespace fs = std::filesystem;

std::size_t diag_cadence(const FlatConfig& cfg, std::size_t outer_iters) {
  return cfg.get_size("diag.every", default_diag_every(outer_iters));
}

LmcConfig lmc_from_config(const FlatConfig& cfg) {
  LmcConfig lmc;
  lmc.step = cfg.get_double("lmc.step", 0.01);
  lmc.steps = cfg.get_size("lmc.steps", 10);
  const std::string sched = cfg.get_string("lmc.schedule", "constant");
  if (sched == "constant") {
    lmc.schedule = StepSchedule::kConstant;
  } else if (sched == "cosine") {
    lmc.schedule = StepSchedule::kCosineAnneal;
    lmc.anneal_start = cfg.get_double("lmc.anneal_start", 0.1);
    lmc.anneal_end = cfg.get_double("lmc.anneal_end", 0.01);
  } else {
    throw ConfigError("lmc.schedule must be 'constant' or 'cosine'");
  }
  return lmc;
}

EfpConfig efp_from_config(const FlatConfig& cfg) {
  EfpConfig e;
  e.outer_step = cfg.get_double("efp.outer_step", 0.01);
  e.outer_iters = cfg.get_size("efp.outer_iters", 100);
  e.particles = cfg.get_size("efp.particles", 1000);
  e.init_scale = cfg.get_double("efp.init_scale", 1.0);
  e.seed = cfg.get_u64("seed", 0);
  e.lmc = lmc_from_config(cfg);
  return e;
}

DiagnosticsOptions diag_from_config(const FlatConfig& cfg) {
  DiagnosticsOptions d;
  d.mc_samples = cfg.get_size("diag.mc_samples", 20000);
  d.knn_k = cfg.get_size("diag.knn_k", 5);
  d.seed = cfg.get_u64("seed", 0);
  return d;
}

void apply_threads(const FlatConfig& cfg) {
  if (cfg.has("threads")) set_max_threads(cfg.get_size("threads", 0));
}

void write_manifest(const FlatConfig& cfg, const Problem& problem,
                    const std::string& experiment, const std::string& out_dir,
                    const nlohmann::json& extra = {}) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["experiment"] = experiment;
  meta["seed"] = cfg.get_u64("seed", 0);
  meta["config"] = nlohmann::json::object();
  for (const auto& [k, v] : cfg.entries()) meta["config"][k] = v;
  meta["problem"] = {{"n", problem.n()},
                     {"d", problem.dim()},
                     {"lambda", problem.lambda()},
                     {"lambda_prime", problem.lambda_prime()}};
  // Primal rows report the entropy and quadratic terms of the latest Gibbs
  // ensemble (the deployable measure); f0 uses the tracked averages.
  meta["primal_measure"] = "gibbs_ensemble";
  const TheoryConstants tc =
      theory_constants(problem.lambda(), cfg.get_double("efp.outer_step", 0.01));
  meta["theory"] = {{"c_lambda", tc.c_lambda},
                    {"t0", tc.t0},
                    {"gap_floor", tc.gap_floor}};
  if (!extra.empty()) meta["extra"] = extra;
  std::ofstream out(out_dir + "/meta.json");
  if (!out) throw ConfigError("cannot write manifest in " + out_dir);
  out << meta.dump(2) << "\n";
}

struct DiagnosticsCollector {
  const Problem* problem;
  DiagnosticsOptions opts;
  std::size_t every = 1;
  std::size_t total_iters = 0;
  std::vector<DiagnosticsRow> rows;

  void operator()(const EfpIterationView& view) {
    if (view.iteration % every != 0 && view.iteration != total_iters) return;
    rows.push_back(
        duality_gap(*problem, view.averages, view.gibbs, opts, view.wall_ms));
  }
};

RunResult finish_run(const FlatConfig& cfg, const Problem& problem,
                     const std::string& experiment,
                     std::vector<DiagnosticsRow> rows, const std::string& out_dir,
                     const nlohmann::json& extra = {}) {
  fs::create_directories(out_dir);
  RunResult result;
  result.rows = std::move(rows);
  write_diagnostics_csv(result.rows, out_dir + "/diagnostics.csv");
  write_manifest(cfg, problem, experiment, out_dir, extra);
  return result;
}

/// Shared train loop for the non-image experiments.
RunResult train_and_collect(const FlatConfig& cfg, const Problem& problem,
                            const std::string& experiment,
                            const std::string& out_dir) {
  apply_threads(cfg);
  const std::string algo = cfg.get_string("algo", "efp");
  DiagnosticsCollector collect{&problem, diag_from_config(cfg), 1, 0, {}};

  if (algo == "efp") {
    EfpConfig e = efp_from_config(cfg);
    collect.every = diag_cadence(cfg, e.outer_iters);
    collect.total_iters = e.outer_iters;
    efp_train(problem, e, std::ref(collect));
  } else if (algo == "mfld") {
    MfldConfig m;
    m.step = cfg.get_double("mfld.step", cfg.get_double("lmc.step", 0.01));
    m.iters = cfg.get_size("mfld.iters", 1000);
    m.particles = cfg.get_size("efp.particles", 1000);
    m.init_scale = cfg.get_double("efp.init_scale", 1.0);
    m.seed = cfg.get_u64("seed", 0);
    collect.every = diag_cadence(cfg, m.iters);
    collect.total_iters = m.iters;
    mfld_train(problem, m, std::ref(collect));
  } else if (algo == "pda") {
    PdaConfig p;
    p.outer_iters = cfg.get_size("pda.outer_iters", cfg.get_size("efp.outer_iters", 100));
    p.particles = cfg.get_size("efp.particles", 1000);
    p.init_scale = cfg.get_double("efp.init_scale", 1.0);
    p.seed = cfg.get_u64("seed", 0);
    p.lmc = lmc_from_config(cfg);
    collect.every = diag_cadence(cfg, p.outer_iters);
    collect.total_iters = p.outer_iters;
    pda_simplified_train(problem, p, std::ref(collect));
  } else {
    throw ConfigError("algo must be one of efp, mfld, pda");
  }
  return finish_run(cfg, problem, experiment, std::move(collect.rows), out_dir);
}

}  // namespace

std::size_t default_diag_every(std::size_t outer_iters) {
  if (outer_iters <= 500) return 1;
  return (outer_iters + 499) / 500;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "iter,primal,dual,gap,kl_est,f0,logz_stderr,wall_ms\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.iter << ',' << r.primal << ',' << r.dual << ',' << r.gap << ','
        << r.kl_est << ',' << r.f0 << ',' << r.logz_stderr << ',' << r.wall_ms
        << '\n';
  }
}

RunResult run_train_nn(const FlatConfig& cfg, const std::string& out_dir) {
  const Problem problem = make_student_teacher(
      cfg.get_size("problem.n", 500), cfg.get_size("problem.d", 5),
      cfg.get_size("teacher.width", 10), cfg.get_u64("seed", 0),
      cfg.get_double("problem.lambda", 0.01),
      cfg.get_double("problem.lambda_prime", 0.01));
  return train_and_collect(cfg, problem, "train-nn", out_dir);
}

RunResult run_density(const FlatConfig& cfg, const std::string& out_dir) {
  const std::size_t d = cfg.get_size("problem.d", 1);
  const std::size_t n = cfg.get_size("problem.n", 40);
  // Observations from a symmetric two-component Gaussian mixture at +-2.
  std::vector<double> obs(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(cfg.get_u64("seed", 0), i, 0xd5a7a);
    const double center = rng.uniform() < 0.5 ? -2.0 : 2.0;
    for (std::size_t j = 0; j < d; ++j)
      obs[i * d + j] = (j == 0 ? center : 0.0) + 0.5 * rng.normal();
  }
  const Problem problem = make_density_problem(
      std::move(obs), d, cfg.get_double("density.sigma", 0.5),
      cfg.get_double("problem.lambda", 0.05),
      cfg.get_double("problem.lambda_prime", 0.05));
  return train_and_collect(cfg, problem, "density", out_dir);
}

RunResult run_toy1d(const FlatConfig& cfg, const std::string& out_dir) {
  const Problem problem = make_toy1d_problem(
      cfg.get_double("toy.target", 0.0), cfg.get_double("problem.lambda", 0.1),
      cfg.get_double("problem.lambda_prime", 0.1));
  return train_and_collect(cfg, problem, "toy1d", out_dir);
}

RunResult run_synth_image(const FlatConfig& cfg, const std::string& out_dir) {
  apply_threads(cfg);
  fs::create_directories(out_dir);

  GrayImage target;
  const std::string target_path = cfg.get_string("image.target", "");
  if (target_path.empty()) {
    target = radial_gradient(cfg.get_size("image.width", 64),
                             cfg.get_size("image.height", 64));
  } else {
    target = read_pgm(target_path);
  }

  const Problem problem = make_synth_image_problem(
      target, cfg.get_double("image.edge_sharpness", 50.0),
      cfg.get_double("problem.lambda", 1e-5),
      cfg.get_double("problem.lambda_prime", 1e-4));
  const auto& tri_features =
      dynamic_cast<const TrianglePixelFeatures&>(problem.features());
  const RenderConfig& render_cfg = tri_features.config();

  EfpConfig e = efp_from_config(cfg);
  const std::size_t checkpoint_every =
      cfg.get_size("image.checkpoint_every", std::max<std::size_t>(1, e.outer_iters / 10));
  const std::size_t row_every = diag_cadence(cfg, e.outer_iters);
  const DiagnosticsOptions diag_opts = diag_from_config(cfg);

  std::vector<DiagnosticsRow> rows;
  std::ofstream img_csv(out_dir + "/images.csv");
  img_csv << "iter,sq_err_h,sq_err_gibbs\n" << std::setprecision(17);

  RunResult result;
  {
    // H^(0) is deterministic given the seed; reproduce it for the pre-training
    // error without touching the training loop's particle accounting.
    const Ensemble init = Ensemble::gaussian(e.particles, kTriangleDim,
                                             e.init_scale, e.seed, 0);
    const std::vector<double> h0 = empirical_averages(init, problem.features());
    result.initial_sq_error = image_sq_error(h0, target);
    img_csv << 0 << ',' << result.initial_sq_error << ',' << result.initial_sq_error
            << '\n';
  }

  auto checkpoint = [&](const EfpIterationView& view) {
    const std::size_t t = view.iteration;
    GrayImage h_img{target.width, target.height, view.averages.h};
    const std::vector<double> gibbs_pixels = image_expectation(view.gibbs, render_cfg);
    GrayImage g_img{target.width, target.height, gibbs_pixels};

    const double err_h = image_sq_error(h_img, target);
    const double err_g = image_sq_error(g_img, target);
    img_csv << t << ',' << err_h << ',' << err_g << '\n';
    result.final_sq_error_h = err_h;
    result.final_sq_error_gibbs = err_g;

    char name[64];
    std::snprintf(name, sizeof(name), "/h_image_%06zu.pgm", t);
    write_pgm(h_img, out_dir + name);
    std::snprintf(name, sizeof(name), "/gibbs_image_%06zu.pgm", t);
    write_pgm(g_img, out_dir + name);
  };

  auto hook = [&](const EfpIterationView& view) {
    if (view.iteration % row_every == 0 || view.iteration == e.outer_iters)
      rows.push_back(
          duality_gap(problem, view.averages, view.gibbs, diag_opts, view.wall_ms));
    if (view.iteration % checkpoint_every == 0 || view.iteration == e.outer_iters)
      checkpoint(view);
  };

  efp_train(problem, e, hook);

  nlohmann::json extra = {{"initial_sq_error", result.initial_sq_error},
                          {"final_sq_error_h", result.final_sq_error_h},
                          {"final_sq_error_gibbs", result.final_sq_error_gibbs},
                          {"image_width", target.width},
                          {"image_height", target.height}};
  RunResult finished =
      finish_run(cfg, problem, "synth-image", std::move(rows), out_dir, extra);
  finished.initial_sq_error = result.initial_sq_error;
  finished.final_sq_error_h = result.final_sq_error_h;
  finished.final_sq_error_gibbs = result.final_sq_error_gibbs;
  return finished;
}

}  // namespace efp
