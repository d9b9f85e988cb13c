#ifndef ALMM_ALMM_SVDL_HPP_
#define ALMM_ALMM_SVDL_HPP_

#include <array>
#include <functional>
#include <vector>

#include "almm/types.hpp"

namespace almm {

/// One diagnostics row, recorded at initialization and after every
/// iteration of the dictionary learner.
struct SvdlIterationStats {
  int iter = 0;
  double objective = 0.0;       // full model objective at (X, S, E, B)
  double coherence = 0.0;       // ||A^T E||_F
  double gram_deviation = 0.0;  // ||E^T E - I||_F
  std::array<double, 6> residuals{};  // ||G-X||, ||H-X||, ||M-XS||,
                                      // ||Q-E||, ||T-S||, ||E_t+1 - E_t||
  double xi = 0.0;
};

/// Full optimizer state after learn_svdl: primal blocks, auxiliaries,
/// multipliers, penalty, and the per-iteration history.
struct SvdlState {
  Matrix X;  // P x N, unit-sum columns (post-rescale)
  Vector S;  // length N
  Matrix E;  // D x L
  Matrix B;  // L x N
  Matrix G, H, M;       // P x N auxiliaries
  Vector T;             // length N, stands for the nonnegative part of S
  Matrix Q;             // D x L, stands for E
  Matrix Lambda, V, Omega;  // P x N multipliers
  Matrix Pi;                // D x L multiplier
  Vector Delta;             // length N multiplier
  double xi = 0.0;
  int iter = 0;
  bool converged = false;
  std::array<double, 6> residuals{};
  std::vector<PixelStatus> status;
  double max_anc_violation = 0.0;
  std::vector<SvdlIterationStats> history;  // length iter + 1
};

struct SvdlResult {
  VariabilityDictionary dictionary;
  AbundanceMatrix abundances;  // unit-sum columns
  ScalingFactors scales;
  VariabilityCoefficients coefficients;
  SvdlState state;
};

/// Called after each iteration when installed; used for checkpointing.
using SvdlObserver = std::function<void(const SvdlState&)>;

/// Joint spectral-variability dictionary learning and unmixing:
/// alternating updates of X, S, E, B plus the auxiliary blocks
/// G, H, M, T, Q under an increasing penalty. Abundances start from the
/// scaled-CLSU estimate and the dictionary from the orthonormal factor
/// of a seeded Gaussian draw (needs num_atoms <= D). Stops when all six
/// residuals drop below cfg.eps or the iteration cap is reached.
SvdlResult learn_svdl(const HyperspectralImage& Y,
                      const EndmemberDictionary& A, const SolverConfig& cfg,
                      const SvdlObserver& observer = {});

/// Per-iteration series extracted from the state, one entry per recorded
/// iteration (initialization included).
struct SvdlDiagnostics {
  std::vector<double> objective;
  std::vector<double> coherence;
  std::vector<double> gram_deviation;
  std::vector<std::array<double, 6>> residuals;
  std::vector<double> xi;
};

SvdlDiagnostics svdl_diagnostics(const SvdlState& state);

}  // namespace almm

#endif  // ALMM_ALMM_SVDL_HPP_
