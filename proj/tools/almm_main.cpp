#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "almm/commands.hpp"

namespace {

// Exit codes: 0 ok, 2 config error, 3 data error, 4 numerical failure.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kNumericalError = 4;

struct CliOverrides {
  std::string config_path;
  std::string model;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool strict = false;
};

almm::RunConfig resolve(const CliOverrides& o) {
  almm::RunConfig cfg;
  if (!o.config_path.empty()) {
    cfg = almm::RunConfig::from_file(o.config_path);
  }
  if (!o.model.empty()) cfg.model = o.model;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed_set) {
    cfg.scene.rng_seed = o.seed;
    cfg.solver.rng_seed = o.seed;
  }
  if (o.strict) cfg.strict = true;
  return cfg;
}

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "RNG seed (scene and solver)")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_flag("--strict", o.strict,
                "escalate non-convergence to a failing exit code");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALMM spectral unmixing toolkit"};
  app.require_subcommand(1);

  CliOverrides o;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a scene");
  CLI::App* unmix = app.add_subcommand("unmix", "run one unmixing model");
  CLI::App* learn =
      app.add_subcommand("learn", "learn the variability dictionary");
  CLI::App* eval = app.add_subcommand("eval", "score an estimate");
  CLI::App* render = app.add_subcommand("render", "export abundance PGMs");
  for (CLI::App* cmd : {simulate, unmix, learn, eval, render}) {
    add_common_flags(cmd, o);
  }
  unmix->add_option("--model", o.model,
                    "fclsu|clsu|sclsu|sunsal|ssunsal|almm");

  CLI11_PARSE(app, argc, argv);

  try {
    const almm::RunConfig cfg = resolve(o);
    if (simulate->parsed()) {
      almm::cmd_simulate(cfg);
    } else if (unmix->parsed()) {
      almm::cmd_unmix(cfg);
    } else if (learn->parsed()) {
      almm::cmd_learn(cfg);
    } else if (eval->parsed()) {
      almm::cmd_eval(cfg);
    } else if (render->parsed()) {
      almm::cmd_render(cfg);
    }
  } catch (const almm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const almm::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const almm::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const almm::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}
