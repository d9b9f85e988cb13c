#ifndef ALMM_CONFIG_HPP_
#define ALMM_CONFIG_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "almm/synthetic.hpp"
#include "almm/types.hpp"

namespace almm {

/// Parameter bundle for one CLI run: solver and scene knobs plus input
/// and output paths. Parsing is strict; any unknown key fails with the
/// key name. CLI flags override file values.
struct RunConfig {
  std::string out_dir = ".";
  std::string run_id = "run";
  bool strict = false;
  std::string model = "sclsu";
  double lambda_sparse = 6e-3;  // SUnSAL / SSUnSAL sparsity weight
  int checkpoint_every = 0;     // learn: dump state every k iterations
  SceneSpec scene;
  SolverConfig solver;

  struct Inputs {
    std::string image;             // Y
    std::string endmembers;        // A
    std::string dict;              // E, for --model almm
    std::string abundances;        // X-hat, for eval/render
    std::string scales;            // S-hat, for eval
    std::string coefficients;      // B-hat, for eval
    std::string truth_abundances;  // ground truth X
    std::string labels;            // class ids for OA
  } inputs;

  struct Render {
    double lo = 0.0;
    double hi = 1.0;
    int rows = 0;
    int cols = 0;
  } render;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// SceneSpec <-> JSON (also the simulate manifest payload). snr_db
/// accepts a number or the string "inf".
nlohmann::json scene_to_json(const SceneSpec& spec);
SceneSpec scene_from_json(const nlohmann::json& j);

nlohmann::json solver_to_json(const SolverConfig& cfg);
SolverConfig solver_from_json(const nlohmann::json& j);

}  // namespace almm

#endif  // ALMM_CONFIG_HPP_
