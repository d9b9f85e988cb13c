#include "almm/synthetic.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace almm {

namespace {

// Distinct deterministic sub-streams of the scene seed, so the
// standalone generators and generate_scene agree on each piece.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kStreamEndmembers = 1;
constexpr std::uint64_t kStreamAbundances = 2;
constexpr std::uint64_t kStreamScales = 3;
constexpr std::uint64_t kStreamNoise1 = 4;
constexpr std::uint64_t kStreamNoise2 = 5;

double spectral_angle(const Vector& a, const Vector& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Vector bump_spectrum(int bands, Rng& rng) {
  const int nbumps = rng.uniform_int(3, 6);
  Vector s = Vector::Zero(bands);
  for (int b = 0; b < nbumps; ++b) {
    const double center = rng.uniform(0.0, bands - 1.0);
    const double width = rng.uniform(bands / 30.0 + 1.0, bands / 6.0 + 2.0);
    const double amp = rng.uniform(0.3, 1.0);
    for (int d = 0; d < bands; ++d) {
      const double t = (d - center) / width;
      s[d] += amp * std::exp(-0.5 * t * t);
    }
  }
  const double peak = rng.uniform(0.6, 1.0);
  s *= peak / s.maxCoeff();
  return s;
}

// Separable Gaussian blur with reflected boundaries.
void smooth_field(Matrix& field, double sigma) {
  if (sigma <= 0.0) return;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  Vector kernel(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  kernel /= kernel.sum();

  const auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - i - 1;
    }
    return i;
  };

  const int rows = static_cast<int>(field.rows());
  const int cols = static_cast<int>(field.cols());
  Matrix tmp(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * field(r, reflect(c + i, cols));
      }
      tmp(r, c) = acc;
    }
  }
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp(reflect(r + i, rows), c);
      }
      field(r, c) = acc;
    }
  }
}

}  // namespace

void SceneSpec::validate() const {
  if (rows < 1 || cols < 1) throw ContractError("SceneSpec: rows/cols vs >= 1");
  if (num_bands < 1) throw ContractError("SceneSpec: num_bands vs >= 1");
  if (num_endmembers < 1 || num_endmembers > num_bands) {
    throw ContractError("SceneSpec: num_endmembers vs 1 <= P <= D");
  }
  if (!(scale_min > 0.0 && scale_min <= scale_max)) {
    throw ContractError("SceneSpec: scale_min vs 0 < scale_min <= scale_max");
  }
  if (std::isnan(snr_db)) throw ContractError("SceneSpec: snr_db vs finite or +inf");
  if (snr_db_stage1 && std::isnan(*snr_db_stage1)) {
    throw ContractError("SceneSpec: snr_db_stage1 vs finite or +inf");
  }
  if (smoothness < 0.0) throw ContractError("SceneSpec: smoothness vs >= 0");
  if (!(field_spread > 0.0)) {
    throw ContractError("SceneSpec: field_spread vs > 0");
  }
  if (mixture_components < 1 || mixture_components > 3) {
    throw ContractError("SceneSpec: mixture_components vs 1..3");
  }
}

EndmemberDictionary generate_endmembers(const SceneSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.rng_seed, kStreamEndmembers));
  const int D = spec.num_bands;
  const int P = spec.num_endmembers;
  constexpr double kMinAngle = 0.1;  // rad
  constexpr int kMaxAttempts = 1000;

  Matrix A(D, P);
  for (int p = 0; p < P; ++p) {
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt >= kMaxAttempts) {
        throw DataError(
            "generate_endmembers: could not place a spectrum 0.1 rad from "
            "the others");
      }
      const Vector cand = bump_spectrum(D, rng);
      bool distinct = true;
      for (int q = 0; q < p && distinct; ++q) {
        distinct = spectral_angle(cand, A.col(q)) >= kMinAngle;
      }
      if (distinct) {
        A.col(p) = cand;
        break;
      }
    }
  }
  return EndmemberDictionary(std::move(A));
}

AbundanceMatrix generate_abundances(const SceneSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.rng_seed, kStreamAbundances));
  const int P = spec.num_endmembers;
  const int N = spec.num_pixels();

  std::vector<Matrix> fields;
  fields.reserve(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) {
    Matrix f(spec.rows, spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) f(r, c) = rng.normal();
    }
    smooth_field(f, spec.smoothness);
    // Smoothing shrinks the variance; restandardize to the configured
    // spread so the softmax yields regions dominated by single
    // materials, the way Gaussian-field reference scenes look.
    const double mean = f.mean();
    const double sd = std::sqrt((f.array() - mean).square().mean());
    if (sd > 0.0) f = (f.array() - mean) * (spec.field_spread / sd);
    fields.push_back(std::move(f));
  }

  Matrix X(P, N);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int k = r * spec.cols + c;
      double fmax = fields[0](r, c);
      for (int p = 1; p < P; ++p) fmax = std::max(fmax, fields[static_cast<std::size_t>(p)](r, c));
      double sum = 0.0;
      for (int p = 0; p < P; ++p) {
        const double e = std::exp(fields[static_cast<std::size_t>(p)](r, c) - fmax);
        X(p, k) = e;
        sum += e;
      }
      X.col(k) /= sum;
    }
  }
  return AbundanceMatrix(std::move(X), true);
}

Matrix add_noise_snr(const Matrix& M, double snr_db, Rng& rng) {
  if (std::isinf(snr_db) && snr_db > 0.0) return M;
  const double power = M.squaredNorm();
  if (power == 0.0) {
    throw DataError("add_noise_snr: zero matrix has no defined SNR");
  }
  const double sigma =
      std::sqrt(power / (static_cast<double>(M.size()) *
                         std::pow(10.0, snr_db / 10.0)));
  Matrix out = M;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) += sigma * rng.normal();
    }
  }
  return out;
}

Matrix add_noise_gaussian_mixture(const Matrix& M, int max_components,
                                  Rng& rng) {
  if (max_components < 1 || max_components > 3) {
    throw ContractError("add_noise_gaussian_mixture: components vs 1..3");
  }
  std::vector<double> means, sigmas;
  for (int c = 0; c < max_components; ++c) {
    means.push_back(rng.uniform(0.0, 0.01));
    sigmas.push_back(std::sqrt(rng.uniform(0.0, 0.01)));
  }
  Matrix out = M;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const int c = rng.uniform_int(0, max_components - 1);
      out(i, j) += means[static_cast<std::size_t>(c)] +
                   sigmas[static_cast<std::size_t>(c)] * rng.normal();
    }
  }
  return out;
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  const int D = spec.num_bands;
  const int P = spec.num_endmembers;
  const int N = spec.num_pixels();
  const double inf = std::numeric_limits<double>::infinity();
  const double snr1 = spec.snr_db_stage1.value_or(spec.snr_db);
  const bool gaussian = spec.noise == NoiseKind::GaussianSnr;
  const bool stage1_free = gaussian && std::isinf(snr1);
  const bool stage2_free = gaussian && std::isinf(spec.snr_db);

  Scene scene;
  scene.endmembers = generate_endmembers(spec);
  scene.abundances = generate_abundances(spec);
  const Matrix& A = scene.endmembers.data;
  const Matrix& X = scene.abundances.data;

  Rng scale_rng(derive_seed(spec.rng_seed, kStreamScales));
  scene.scale_field.resize(P, N);
  for (int k = 0; k < N; ++k) {
    if (spec.shared_scale) {
      const double c = scale_rng.uniform(spec.scale_min, spec.scale_max);
      scene.scale_field.col(k).setConstant(c);
    } else {
      for (int p = 0; p < P; ++p) {
        scene.scale_field(p, k) =
            scale_rng.uniform(spec.scale_min, spec.scale_max);
      }
    }
  }

  // Stage 1: noise the scaled per-pixel signature matrices. One sigma
  // calibrated on the whole stage keeps the aggregate SNR on target.
  Rng noise1(derive_seed(spec.rng_seed, kStreamNoise1));
  double sigma1 = 0.0;
  if (!stage1_free && gaussian) {
    double signal_power = 0.0;
    for (int p = 0; p < P; ++p) {
      signal_power +=
          A.col(p).squaredNorm() * scene.scale_field.row(p).squaredNorm();
    }
    sigma1 = std::sqrt(signal_power /
                       (static_cast<double>(D) * P * N *
                        std::pow(10.0, snr1 / 10.0)));
  }
  std::vector<double> mix_means, mix_sigmas;
  if (spec.noise == NoiseKind::GaussianMixture) {
    for (int c = 0; c < spec.mixture_components; ++c) {
      mix_means.push_back(noise1.uniform(0.0, 0.01));
      mix_sigmas.push_back(std::sqrt(noise1.uniform(0.0, 0.01)));
    }
  }

  Matrix Y(D, N);
  Matrix Ak(D, P);
  double stage1_signal = 0.0;
  double stage1_noise = 0.0;
  for (int k = 0; k < N; ++k) {
    for (int p = 0; p < P; ++p) {
      Ak.col(p) = scene.scale_field(p, k) * A.col(p);
    }
    stage1_signal += Ak.squaredNorm();
    if (!stage1_free) {
      for (int p = 0; p < P; ++p) {
        for (int d = 0; d < D; ++d) {
          double w = 0.0;
          if (gaussian) {
            w = sigma1 * noise1.normal();
          } else {
            const int c = noise1.uniform_int(0, spec.mixture_components - 1);
            w = mix_means[static_cast<std::size_t>(c)] +
                mix_sigmas[static_cast<std::size_t>(c)] * noise1.normal();
          }
          Ak(d, p) += w;
          stage1_noise += w * w;
        }
      }
    }
    Y.col(k) = Ak * X.col(k);
  }
  scene.realized_snr_stage1 =
      stage1_noise > 0.0 ? 10.0 * std::log10(stage1_signal / stage1_noise)
                         : inf;

  // Stage 2: noise the mixed pixels.
  if (stage2_free) {
    scene.realized_snr_stage2 = inf;
  } else {
    Rng noise2(derive_seed(spec.rng_seed, kStreamNoise2));
    const double signal_power = Y.squaredNorm();
    Matrix noisy = gaussian
                       ? add_noise_snr(Y, spec.snr_db, noise2)
                       : add_noise_gaussian_mixture(
                             Y, spec.mixture_components, noise2);
    const double noise_power = (noisy - Y).squaredNorm();
    scene.realized_snr_stage2 =
        noise_power > 0.0 ? 10.0 * std::log10(signal_power / noise_power)
                          : inf;
    Y = std::move(noisy);
  }

  scene.image = HyperspectralImage(std::move(Y), spec.rows, spec.cols);
  return scene;
}

}  // namespace almm
