#include "almm/commands.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "almm/almm_su.hpp"
#include "almm/almm_svdl.hpp"
#include "almm/baselines.hpp"
#include "almm/matrix_io.hpp"
#include "almm/metrics.hpp"
#include "almm/model.hpp"
#include "almm/synthetic.hpp"

namespace almm {

namespace fs = std::filesystem;

namespace {

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

Matrix load_required(const std::string& path, const char* what) {
  if (path.empty()) {
    throw ConfigError(std::string("inputs.") + what + " is required");
  }
  return read_matrix(path);
}

void write_status_csv(const fs::path& path,
                      const std::vector<PixelStatus>& status) {
  std::ostringstream out;
  for (PixelStatus s : status) out << static_cast<int>(s) << '\n';
  write_text_atomic(path, out.str());
}

void escalate_nonconvergence(const RunConfig& cfg,
                             const std::vector<PixelStatus>& status) {
  if (!cfg.strict) return;
  long bad = 0;
  for (PixelStatus s : status) {
    if (s == PixelStatus::NotConverged) ++bad;
  }
  if (bad > 0) {
    throw ConvergenceError(std::to_string(bad) +
                               " pixel(s) did not converge (strict mode)",
                           Vector());
  }
}

// Reconstruction, metrics row and file drop shared by unmix and learn.
void write_estimate(const RunConfig& cfg, const std::string& algorithm,
                    const HyperspectralImage& Y, const EndmemberDictionary& A,
                    const AbundanceMatrix& X, const ScalingFactors& S,
                    const VariabilityDictionary& E,
                    const VariabilityCoefficients& B,
                    const std::vector<PixelStatus>& status, double wall_ms) {
  write_matrix(out_path(cfg, "X_hat.almm"), X.data);
  if (S.values.size() > 0) {
    write_matrix(out_path(cfg, "S_hat.almm"), S.values);
  }
  if (B.data.size() > 0) {
    write_matrix(out_path(cfg, "B_hat.almm"), B.data);
  }
  write_status_csv(out_path(cfg, "status.csv"), status);

  MetricsRow row;
  row.run_id = cfg.run_id;
  row.algorithm = algorithm;
  row.wall_ms = wall_ms;
  ScalingFactors ones = S.values.size() > 0
                            ? S
                            : ScalingFactors(Vector::Ones(Y.num_pixels()));
  const Matrix Y_hat = reconstruct(A, X, ones, E, B);
  row.rrmse = rrmse(Y.data, Y_hat);
  row.asam = asam(Y.data, Y_hat);
  bool have_truth = false;
  if (!cfg.inputs.truth_abundances.empty()) {
    const Matrix X_true = read_matrix(cfg.inputs.truth_abundances);
    row.armse = armse(X_true, X.data);
    have_truth = true;
  }
  if (!cfg.inputs.labels.empty()) {
    row.oa = overall_accuracy(read_labels_csv(cfg.inputs.labels), X);
    have_truth = true;
  }
  if (have_truth) {
    write_metrics_csv(out_path(cfg, "metrics.csv"), {row});
  }
}

}  // namespace

void cmd_simulate(const RunConfig& cfg) {
  const Scene scene = generate_scene(cfg.scene);
  write_matrix(out_path(cfg, "Y.almm"), scene.image.data);
  write_matrix(out_path(cfg, "X_true.almm"), scene.abundances.data);
  write_matrix(out_path(cfg, "A.almm"), scene.endmembers.data);
  write_matrix(out_path(cfg, "scale_field.almm"), scene.scale_field);
  nlohmann::json manifest;
  manifest["command"] = "simulate";
  manifest["run_id"] = cfg.run_id;
  manifest["scene"] = scene_to_json(cfg.scene);
  write_text_atomic(out_path(cfg, "manifest.json"), manifest.dump(2) + "\n");
}

void cmd_unmix(const RunConfig& cfg) {
  const HyperspectralImage Y(load_required(cfg.inputs.image, "image"));
  const EndmemberDictionary A(
      load_required(cfg.inputs.endmembers, "endmembers"));

  const auto t0 = std::chrono::steady_clock::now();
  AbundanceMatrix X;
  ScalingFactors S;
  VariabilityDictionary E;
  VariabilityCoefficients B;
  std::vector<PixelStatus> status;

  if (cfg.model == "fclsu") {
    auto r = unmix_fclsu(Y, A);
    X = std::move(r.abundances);
    status = std::move(r.status);
  } else if (cfg.model == "clsu") {
    auto r = unmix_clsu(Y, A);
    X = std::move(r.abundances);
    status = std::move(r.status);
  } else if (cfg.model == "sclsu") {
    auto r = unmix_sclsu(Y, A);
    X = std::move(r.abundances);
    S = std::move(r.scales);
    status = std::move(r.status);
  } else if (cfg.model == "sunsal") {
    auto r = unmix_sunsal(Y, A, cfg.lambda_sparse, cfg.solver);
    X = std::move(r.abundances);
    status = std::move(r.status);
  } else if (cfg.model == "ssunsal") {
    auto r = unmix_ssunsal(Y, A, cfg.lambda_sparse, cfg.solver);
    X = std::move(r.abundances);
    S = std::move(r.scales);
    status = std::move(r.status);
  } else if (cfg.model == "almm") {
    if (cfg.inputs.dict.empty()) {
      throw ConfigError(
          "model 'almm' needs a spectral variability dictionary: set "
          "inputs.dict, or run the learn command first");
    }
    E = VariabilityDictionary(read_matrix(cfg.inputs.dict));
    auto r = unmix_image_almm(Y, A, E, cfg.solver);
    X = std::move(r.abundances);
    S = std::move(r.scales);
    B = std::move(r.coefficients);
    status = std::move(r.status);
  } else {
    throw ConfigError("unknown model '" + cfg.model +
                      "' (expected fclsu|clsu|sclsu|sunsal|ssunsal|almm)");
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count();

  write_estimate(cfg, cfg.model, Y, A, X, S, E, B, status, wall_ms);
  escalate_nonconvergence(cfg, status);
}

void cmd_learn(const RunConfig& cfg) {
  const HyperspectralImage Y(load_required(cfg.inputs.image, "image"));
  const EndmemberDictionary A(
      load_required(cfg.inputs.endmembers, "endmembers"));

  SvdlObserver observer;
  if (cfg.checkpoint_every > 0) {
    const int every = cfg.checkpoint_every;
    const RunConfig* c = &cfg;
    observer = [c, every](const SvdlState& st) {
      if (st.iter % every != 0) return;
      write_matrix(out_path(*c, "checkpoint_E.almm"), st.E);
      write_matrix(out_path(*c, "checkpoint_X.almm"), st.X);
      write_matrix(out_path(*c, "checkpoint_S.almm"), st.S);
      write_matrix(out_path(*c, "checkpoint_B.almm"), st.B);
    };
  }

  const auto t0 = std::chrono::steady_clock::now();
  SvdlResult r = learn_svdl(Y, A, cfg.solver, observer);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count();

  write_matrix(out_path(cfg, "E_hat.almm"), r.dictionary.data);

  std::ostringstream diag;
  diag.precision(17);
  diag << "iter,objective,coherence,gram_deviation,r_gx,r_hx,r_mxs,r_qe,"
          "r_ts,r_de,xi\n";
  for (const auto& row : r.state.history) {
    diag << row.iter << ',' << row.objective << ',' << row.coherence << ','
         << row.gram_deviation;
    for (double rr : row.residuals) diag << ',' << rr;
    diag << ',' << row.xi << '\n';
  }
  write_text_atomic(out_path(cfg, "diagnostics.csv"), diag.str());

  write_estimate(cfg, "almm-svdl", Y, A, r.abundances, r.scales,
                 r.dictionary, r.coefficients, r.state.status, wall_ms);
  if (cfg.strict && !r.state.converged) {
    throw ConvergenceError("dictionary learning hit the iteration cap "
                           "(strict mode)",
                           Vector());
  }
}

void cmd_eval(const RunConfig& cfg) {
  const HyperspectralImage Y(load_required(cfg.inputs.image, "image"));
  const EndmemberDictionary A(
      load_required(cfg.inputs.endmembers, "endmembers"));
  const AbundanceMatrix X(load_required(cfg.inputs.abundances, "abundances"),
                          false);

  ScalingFactors S(Vector::Ones(Y.num_pixels()));
  if (!cfg.inputs.scales.empty()) {
    Matrix s = read_matrix(cfg.inputs.scales);
    S = ScalingFactors(Vector(s.reshaped()));
  }
  VariabilityDictionary E;
  VariabilityCoefficients B;
  if (!cfg.inputs.dict.empty() && !cfg.inputs.coefficients.empty()) {
    E = VariabilityDictionary(read_matrix(cfg.inputs.dict));
    B = VariabilityCoefficients(read_matrix(cfg.inputs.coefficients));
  }

  MetricsRow row;
  row.run_id = cfg.run_id;
  row.algorithm = cfg.model;
  const Matrix Y_hat = reconstruct(A, X, S, E, B);
  row.rrmse = rrmse(Y.data, Y_hat);
  row.asam = asam(Y.data, Y_hat);
  if (!cfg.inputs.truth_abundances.empty()) {
    row.armse = armse(read_matrix(cfg.inputs.truth_abundances), X.data);
  }
  if (!cfg.inputs.labels.empty()) {
    row.oa = overall_accuracy(read_labels_csv(cfg.inputs.labels), X);
  }
  write_metrics_csv(out_path(cfg, "metrics.csv"), {row});
}

void cmd_render(const RunConfig& cfg) {
  const Matrix X = load_required(cfg.inputs.abundances, "abundances");
  const int rows = cfg.render.rows;
  const int cols = cfg.render.cols;
  if (rows < 1 || cols < 1) {
    throw ConfigError("render.rows and render.cols are required");
  }
  if (static_cast<long>(rows) * cols != X.cols()) {
    throw ConfigError("render.rows * render.cols must equal the pixel count");
  }
  for (Eigen::Index p = 0; p < X.rows(); ++p) {
    const std::string name = "abundance_" + std::to_string(p) + ".pgm";
    write_pgm(out_path(cfg, name), X.row(p).transpose(), rows, cols,
              cfg.render.lo, cfg.render.hi);
  }
}

}  // namespace almm
