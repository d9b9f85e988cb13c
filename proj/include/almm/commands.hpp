#ifndef ALMM_COMMANDS_HPP_
#define ALMM_COMMANDS_HPP_

#include "almm/config.hpp"

namespace almm {

/// The five CLI verbs, as library calls so they can be driven in-process.
/// All of them throw ConfigError / DataError / ConvergenceError; the CLI
/// maps those to exit codes. Outputs land in cfg.out_dir under fixed
/// names (see README).

/// Writes Y.almm, X_true.almm, A.almm, scale_field.almm and
/// manifest.json (the fully resolved scene spec, seed included).
void cmd_simulate(const RunConfig& cfg);

/// Runs cfg.model over inputs.image/endmembers; writes X_hat.almm plus
/// S_hat.almm / B_hat.almm where the model produces them, status.csv,
/// and metrics.csv when ground truth is supplied.
void cmd_unmix(const RunConfig& cfg);

/// Dictionary learning; writes E_hat.almm, X_hat.almm, S_hat.almm,
/// B_hat.almm, status.csv, diagnostics.csv and optional checkpoints.
void cmd_learn(const RunConfig& cfg);

/// Scores an existing estimate against the inputs; writes metrics.csv.
void cmd_eval(const RunConfig& cfg);

/// Writes one 8-bit PGM per endmember from inputs.abundances using the
/// render window and display range.
void cmd_render(const RunConfig& cfg);

}  // namespace almm

#endif  // ALMM_COMMANDS_HPP_
