#include "almm/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace almm {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    throw ConfigError("config section '" + section + "' must be an object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown config key: " + section + "." + item.key());
    }
  }
}

template <typename T>
void load(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("bad value for config key: ") + key);
    }
  }
}

double load_snr(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("bad value for config key: snr_db (use a number or "
                      "\"inf\")");
  }
  if (!v.is_number()) {
    throw ConfigError("bad value for config key: snr_db");
  }
  return v.get<double>();
}

}  // namespace

json scene_to_json(const SceneSpec& spec) {
  json j;
  j["rows"] = spec.rows;
  j["cols"] = spec.cols;
  j["bands"] = spec.num_bands;
  j["endmembers"] = spec.num_endmembers;
  j["scale_min"] = spec.scale_min;
  j["scale_max"] = spec.scale_max;
  if (std::isinf(spec.snr_db)) {
    j["snr_db"] = "inf";
  } else {
    j["snr_db"] = spec.snr_db;
  }
  if (spec.snr_db_stage1) {
    if (std::isinf(*spec.snr_db_stage1)) {
      j["snr_db_stage1"] = "inf";
    } else {
      j["snr_db_stage1"] = *spec.snr_db_stage1;
    }
  }
  j["smoothness"] = spec.smoothness;
  j["field_spread"] = spec.field_spread;
  j["shared_scale"] = spec.shared_scale;
  j["noise"] = spec.noise == NoiseKind::GaussianSnr ? "gaussian" : "mixture";
  j["mixture_components"] = spec.mixture_components;
  j["seed"] = spec.rng_seed;
  return j;
}

SceneSpec scene_from_json(const json& j) {
  check_keys(j, "scene",
             {"rows", "cols", "bands", "endmembers", "scale_min", "scale_max",
              "snr_db", "snr_db_stage1", "smoothness", "field_spread", "shared_scale",
              "noise", "mixture_components", "seed"});
  SceneSpec spec;
  load(j, "rows", spec.rows);
  load(j, "cols", spec.cols);
  load(j, "bands", spec.num_bands);
  load(j, "endmembers", spec.num_endmembers);
  load(j, "scale_min", spec.scale_min);
  load(j, "scale_max", spec.scale_max);
  spec.snr_db = load_snr(j, "snr_db", spec.snr_db);
  if (j.contains("snr_db_stage1")) {
    spec.snr_db_stage1 = load_snr(j, "snr_db_stage1", 25.0);
  }
  load(j, "smoothness", spec.smoothness);
  load(j, "field_spread", spec.field_spread);
  load(j, "shared_scale", spec.shared_scale);
  if (j.contains("noise")) {
    const std::string kind = j.at("noise").get<std::string>();
    if (kind == "gaussian") {
      spec.noise = NoiseKind::GaussianSnr;
    } else if (kind == "mixture") {
      spec.noise = NoiseKind::GaussianMixture;
    } else {
      throw ConfigError("bad value for config key: scene.noise ('" + kind +
                        "')");
    }
  }
  load(j, "mixture_components", spec.mixture_components);
  load(j, "seed", spec.rng_seed);
  spec.validate();
  return spec;
}

json solver_to_json(const SolverConfig& cfg) {
  json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["gamma"] = cfg.gamma;
  j["eta"] = cfg.eta;
  j["num_atoms"] = cfg.num_atoms;
  j["mu0"] = cfg.mu0;
  j["mu_max"] = cfg.mu_max;
  j["rho"] = cfg.rho;
  j["eps"] = cfg.eps;
  j["max_iter"] = cfg.max_iter;
  j["seed"] = cfg.rng_seed;
  return j;
}

SolverConfig solver_from_json(const json& j) {
  check_keys(j, "solver",
             {"alpha", "beta", "gamma", "eta", "num_atoms", "mu0", "mu_max",
              "rho", "eps", "max_iter", "seed"});
  SolverConfig cfg;
  load(j, "alpha", cfg.alpha);
  load(j, "beta", cfg.beta);
  load(j, "gamma", cfg.gamma);
  load(j, "eta", cfg.eta);
  load(j, "num_atoms", cfg.num_atoms);
  load(j, "mu0", cfg.mu0);
  load(j, "mu_max", cfg.mu_max);
  load(j, "rho", cfg.rho);
  load(j, "eps", cfg.eps);
  load(j, "max_iter", cfg.max_iter);
  load(j, "seed", cfg.rng_seed);
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, "config",
             {"out", "run_id", "strict", "model", "lambda_sparse",
              "checkpoint_every", "scene", "solver", "inputs", "render"});
  RunConfig cfg;
  load(j, "out", cfg.out_dir);
  load(j, "run_id", cfg.run_id);
  load(j, "strict", cfg.strict);
  load(j, "model", cfg.model);
  load(j, "lambda_sparse", cfg.lambda_sparse);
  load(j, "checkpoint_every", cfg.checkpoint_every);
  if (j.contains("scene")) cfg.scene = scene_from_json(j.at("scene"));
  if (j.contains("solver")) cfg.solver = solver_from_json(j.at("solver"));
  if (j.contains("inputs")) {
    const json& in = j.at("inputs");
    check_keys(in, "inputs",
               {"image", "endmembers", "dict", "abundances", "scales",
                "coefficients", "truth_abundances", "labels"});
    load(in, "image", cfg.inputs.image);
    load(in, "endmembers", cfg.inputs.endmembers);
    load(in, "dict", cfg.inputs.dict);
    load(in, "abundances", cfg.inputs.abundances);
    load(in, "scales", cfg.inputs.scales);
    load(in, "coefficients", cfg.inputs.coefficients);
    load(in, "truth_abundances", cfg.inputs.truth_abundances);
    load(in, "labels", cfg.inputs.labels);
  }
  if (j.contains("render")) {
    const json& r = j.at("render");
    check_keys(r, "render", {"lo", "hi", "rows", "cols"});
    load(r, "lo", cfg.render.lo);
    load(r, "hi", cfg.render.hi);
    load(r, "rows", cfg.render.rows);
    load(r, "cols", cfg.render.cols);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " +
                      e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["out"] = out_dir;
  j["run_id"] = run_id;
  j["strict"] = strict;
  j["model"] = model;
  j["lambda_sparse"] = lambda_sparse;
  j["checkpoint_every"] = checkpoint_every;
  j["scene"] = scene_to_json(scene);
  j["solver"] = solver_to_json(solver);
  json in;
  in["image"] = inputs.image;
  in["endmembers"] = inputs.endmembers;
  in["dict"] = inputs.dict;
  in["abundances"] = inputs.abundances;
  in["scales"] = inputs.scales;
  in["coefficients"] = inputs.coefficients;
  in["truth_abundances"] = inputs.truth_abundances;
  in["labels"] = inputs.labels;
  j["inputs"] = in;
  json r;
  r["lo"] = render.lo;
  r["hi"] = render.hi;
  r["rows"] = render.rows;
  r["cols"] = render.cols;
  j["render"] = r;
  return j;
}

}  // namespace almm
