#ifndef ALMM_TYPES_HPP_
#define ALMM_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace almm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an operation is handed inconsistent dimensions or an
/// argument that violates a documented precondition. The message names
/// the offending pair.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on malformed or unreadable input data (files, non-finite values).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed run configuration (unknown keys, bad values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solve exhausts its iteration budget.
/// Carries the best iterate found so callers can degrade gracefully.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vector best)
      : std::runtime_error(what), best_iterate(std::move(best)) {}
  Vector best_iterate;
};

/// Per-pixel outcome of an image-wide solve.
enum class PixelStatus : std::uint8_t {
  Ok = 0,
  Degenerate = 1,    // all-zero abundance; scale forced to 0
  NotConverged = 2,  // iteration cap hit; result is the last iterate
};

namespace detail {
void require_finite(const char* name, const Matrix& m);
void require_finite(const char* name, const Vector& v);
}  // namespace detail

/// D x N band-by-pixel observation matrix with optional spatial layout.
struct HyperspectralImage {
  Matrix data;                       // D x N
  int rows = 0;                      // optional; 0 means no spatial layout
  int cols = 0;
  std::vector<double> wavelengths;   // optional, length D (nm)

  HyperspectralImage() = default;
  explicit HyperspectralImage(Matrix y, int spatial_rows = 0,
                              int spatial_cols = 0,
                              std::vector<double> wl = {});

  int num_bands() const { return static_cast<int>(data.rows()); }
  int num_pixels() const { return static_cast<int>(data.cols()); }
};

/// D x P endmember signature matrix.
struct EndmemberDictionary {
  Matrix data;                     // D x P, entries >= 0, no all-zero column
  std::vector<std::string> names;  // optional, length P

  EndmemberDictionary() = default;
  explicit EndmemberDictionary(Matrix a, std::vector<std::string> n = {});

  int num_bands() const { return static_cast<int>(data.rows()); }
  int num_endmembers() const { return static_cast<int>(data.cols()); }
};

/// P x N fractional abundances. Entries are clamped to 0 from above
/// -kNegTol on construction; anything more negative is a contract
/// violation. With asc_normalized set, each column sums to one within
/// kAscTol; all-zero columns are tolerated as the documented degenerate
/// (flagged) pixel case.
struct AbundanceMatrix {
  static constexpr double kNegTol = 1e-12;
  static constexpr double kAscTol = 1e-9;

  Matrix data;                 // P x N
  bool asc_normalized = false;

  AbundanceMatrix() = default;
  AbundanceMatrix(Matrix x, bool asc);

  int num_endmembers() const { return static_cast<int>(data.rows()); }
  int num_pixels() const { return static_cast<int>(data.cols()); }
};

/// Length-N per-pixel nonnegative scale factors (the diagonal of S).
struct ScalingFactors {
  Vector values;

  ScalingFactors() = default;
  explicit ScalingFactors(Vector s);

  int num_pixels() const { return static_cast<int>(values.size()); }
};

/// D x L spectral variability dictionary. Per-atom norms and coherence
/// with the endmembers are soft targets steered by regularization, not
/// hard invariants; atom_norms() surfaces them for diagnostics.
struct VariabilityDictionary {
  Matrix data;  // D x L

  VariabilityDictionary() = default;
  explicit VariabilityDictionary(Matrix e);

  int num_bands() const { return static_cast<int>(data.rows()); }
  int num_atoms() const { return static_cast<int>(data.cols()); }
  Vector atom_norms() const;
};

/// L x N coefficients pairing with a VariabilityDictionary.
struct VariabilityCoefficients {
  Matrix data;  // L x N

  VariabilityCoefficients() = default;
  explicit VariabilityCoefficients(Matrix b);

  int num_atoms() const { return static_cast<int>(data.rows()); }
  int num_pixels() const { return static_cast<int>(data.cols()); }
};

/// Shared knob set for the ADMM solvers and the dictionary learner.
struct SolverConfig {
  double alpha = 2e-3;   // abundance sparsity weight
  double beta = 2e-3;    // variability coefficient weight
  double gamma = 5e-3;   // dictionary coherence weight
  double eta = 5e-3;     // dictionary Gram-deviation weight
  int num_atoms = 100;   // L
  double mu0 = 1e-3;     // initial penalty (also xi0 for the learner)
  double mu_max = 1e6;
  double rho = 1.5;      // penalty growth factor
  double eps = 1e-6;     // residual tolerance
  int max_iter = 500;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

}  // namespace almm

#endif  // ALMM_TYPES_HPP_
