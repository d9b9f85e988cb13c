#ifndef ALMM_ALMM_SU_HPP_
#define ALMM_ALMM_SU_HPP_

#include <vector>

#include "almm/types.hpp"

namespace almm {

/// Final ADMM state of one pixel solve: iterates, multipliers, penalty
/// and the three primal residuals ||g-x||, ||h-x||, ||x_{t+1}-x_t|| the
/// convergence check saw last.
struct PixelAdmmState {
  Vector x, g, h;      // length P
  Vector b;            // length L
  double S = 1.0;
  Vector lambda, nu;   // length-P multipliers
  double mu = 0.0;
  int iter = 0;
  bool converged = false;
  double residual_g = 0.0;
  double residual_h = 0.0;
  double residual_dx = 0.0;
  PixelStatus status = PixelStatus::Ok;
  double anc_violation = 0.0;  // most negative abundance before output clamp
};

struct PixelResult {
  Vector x;   // unit-sum abundances
  double S = 0.0;
  Vector b;
  PixelAdmmState state;
};

/// Joint pixel estimate of abundances, scale and variability coefficients
/// with the dictionary E held fixed, by multi-block ADMM with the
/// increasing penalty schedule from cfg. E may be empty (L = 0), which
/// drops b and the variability term entirely. An all-zero normalization
/// sum marks the pixel degenerate (x = 0, S = 0) instead of dividing.
PixelResult unmix_pixel_almm(const Vector& y, const EndmemberDictionary& A,
                             const VariabilityDictionary& E,
                             const SolverConfig& cfg);

struct AlmmImageResult {
  AbundanceMatrix abundances;        // unit-sum columns
  ScalingFactors scales;
  VariabilityCoefficients coefficients;
  std::vector<PixelStatus> status;
  int converged_pixels = 0;
  double max_anc_violation = 0.0;
};

/// Column-wise application of unmix_pixel_almm. Pixels are independent,
/// so the result does not depend on the parallel schedule.
AlmmImageResult unmix_image_almm(const HyperspectralImage& Y,
                                 const EndmemberDictionary& A,
                                 const VariabilityDictionary& E,
                                 const SolverConfig& cfg);

}  // namespace almm

#endif  // ALMM_ALMM_SU_HPP_
