#ifndef ALMM_SYNTHETIC_HPP_
#define ALMM_SYNTHETIC_HPP_

#include <cstdint>
#include <optional>

#include "almm/rng.hpp"
#include "almm/types.hpp"

namespace almm {

enum class NoiseKind : std::uint8_t {
  GaussianSnr = 0,      // white Gaussian calibrated to snr_db
  GaussianMixture = 1,  // mixture of <= 3 Gaussians, means/vars in [0, 0.01]
};

/// Scene recipe: smooth unit-sum abundance fields, per-pixel-per-endmember
/// signature scaling, and two-stage noise injection (once on the scaled
/// signatures, once on the mixed pixels).
struct SceneSpec {
  int rows = 200;
  int cols = 200;
  int num_bands = 224;
  int num_endmembers = 5;
  double scale_min = 0.75;
  double scale_max = 1.25;
  double snr_db = 25.0;  // +infinity disables the noise
  // Signature-stage SNR override; unset means it tracks snr_db. Lets a
  // noise-robustness sweep vary the observation noise while the
  // endmember-level variability stays at its scene default.
  std::optional<double> snr_db_stage1;
  double smoothness = 10.0;  // Gaussian field kernel width in pixels
  double field_spread = 3.0;  // softmax contrast; higher means sparser pixels
  bool shared_scale = false;  // one scale per pixel instead of per endmember
  NoiseKind noise = NoiseKind::GaussianSnr;
  int mixture_components = 3;
  std::uint64_t rng_seed = 0;

  int num_pixels() const { return rows * cols; }
  void validate() const;
};

/// Everything a run needs: the observation plus the ground truth it was
/// mixed from, and the realized per-stage SNRs for auditing.
struct Scene {
  HyperspectralImage image;
  AbundanceMatrix abundances;      // ground truth, unit-sum columns
  EndmemberDictionary endmembers;  // ground truth A
  Matrix scale_field;              // P x N of c_{kp}
  double realized_snr_stage1 = 0.0;  // dB; +inf when noise-free
  double realized_snr_stage2 = 0.0;
};

/// P smooth nonnegative spectra (sums of 3-6 Gaussian bumps, peak <= 1),
/// kept pairwise at least 0.1 rad apart by rejection.
EndmemberDictionary generate_endmembers(const SceneSpec& spec);

/// Softmax of per-endmember white-noise fields smoothed by a Gaussian
/// kernel of width spec.smoothness; strictly positive, exact unit sums.
AbundanceMatrix generate_abundances(const SceneSpec& spec);

/// M plus white Gaussian noise with variance
/// ||M||_F^2 / (numel * 10^(snr_db/10)); identity for snr_db = +inf,
/// error for an all-zero M (SNR undefined).
Matrix add_noise_snr(const Matrix& M, double snr_db, Rng& rng);

/// M plus noise drawn from a mixture of up to max_components Gaussians
/// whose means and variances are drawn uniformly from [0, 0.01].
Matrix add_noise_gaussian_mixture(const Matrix& M, int max_components,
                                  Rng& rng);

/// Full protocol: draw c_{kp}, noise the scaled per-pixel signatures,
/// mix with the ground-truth abundances, noise the mixed image.
Scene generate_scene(const SceneSpec& spec);

}  // namespace almm

#endif  // ALMM_SYNTHETIC_HPP_
