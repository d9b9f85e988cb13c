#ifndef ALMM_BASELINES_HPP_
#define ALMM_BASELINES_HPP_

#include <vector>

#include "almm/types.hpp"

namespace almm {

/// Image-wide unmixing output shared by the classical baselines.
/// scales is empty for the unscaled variants. status flags degenerate
/// (all-zero) and non-convergent pixels instead of failing the image.
struct BaselineResult {
  AbundanceMatrix abundances;
  ScalingFactors scales;
  std::vector<PixelStatus> status;
};

/// Fully constrained least squares (ANC + ASC), per-pixel delta-augmented
/// NNLS followed by an exact column renormalization.
BaselineResult unmix_fclsu(const HyperspectralImage& Y,
                           const EndmemberDictionary& A);

/// Nonnegativity-constrained least squares (ANC only); column sums are
/// free and routinely exceed 1 on scaled data.
BaselineResult unmix_clsu(const HyperspectralImage& Y,
                          const EndmemberDictionary& A);

/// Scaled CLSU: NNLS solution split into a unit-sum abundance and a
/// per-pixel scale S_k = 1^T x_k.
BaselineResult unmix_sclsu(const HyperspectralImage& Y,
                           const EndmemberDictionary& A);

/// Sparse unmixing: per-pixel ADMM for
///   min 1/2 ||y - A x||^2 + lambda ||x||_1  s.t. x >= 0,
/// using the {x, g, h} splitting and the increasing penalty schedule of
/// the full pixel solver. schedule supplies mu0/rho/mu_max/eps/max_iter;
/// its regularization weights are ignored in favor of lambda_sparse.
BaselineResult unmix_sunsal(const HyperspectralImage& Y,
                            const EndmemberDictionary& A,
                            double lambda_sparse = 6e-3,
                            const SolverConfig& schedule = SolverConfig{});

/// Scaled SUnSAL: unmix_sunsal followed by the unit-sum/scale split.
BaselineResult unmix_ssunsal(const HyperspectralImage& Y,
                             const EndmemberDictionary& A,
                             double lambda_sparse = 6e-3,
                             const SolverConfig& schedule = SolverConfig{});

}  // namespace almm

#endif  // ALMM_BASELINES_HPP_
