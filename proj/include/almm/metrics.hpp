#ifndef ALMM_METRICS_HPP_
#define ALMM_METRICS_HPP_

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "almm/types.hpp"

namespace almm {

/// Abundance RMSE: mean over pixels of the per-pixel root mean square
/// abundance error.
double armse(const Matrix& X_true, const Matrix& X_est);

/// Reconstruction RMSE: same shape over bands.
double rrmse(const Matrix& Y, const Matrix& Y_hat);

/// Average spectral angle (radians) between matching columns; the
/// arccos argument is clamped to [-1, 1]. Zero-norm columns contribute
/// angle 0 and are counted into *degenerate_count when it is non-null.
double asam(const Matrix& Y, const Matrix& Y_hat,
            int* degenerate_count = nullptr);

/// Permutation p minimizing the total spectral angle, with
/// A_est column i matched to A_ref column p[i]. Exhaustive for P <= 8,
/// assignment solver above.
std::vector<int> match_endmembers(const Matrix& A_est, const Matrix& A_ref);

/// Minimum-cost square assignment: result[i] is the column assigned to
/// row i of cost.
std::vector<int> assignment_min_cost(const Matrix& cost);

/// Percentage of pixels whose argmax abundance (ties -> lowest index)
/// matches the reference label. Labels equal to -1 mask the pixel out;
/// all-zero abundance columns count as mismatches.
double overall_accuracy(const std::vector<int>& labels_ref,
                        const AbundanceMatrix& X_est);

/// One evaluation record, serialized as a CSV row by the io layer.
/// Fields that were not computed (no ground truth, no labels) stay NaN.
struct MetricsRow {
  std::string run_id;
  std::string algorithm;
  double armse = std::numeric_limits<double>::quiet_NaN();
  double rrmse = std::numeric_limits<double>::quiet_NaN();
  double asam = std::numeric_limits<double>::quiet_NaN();
  double oa = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
};

/// Mean and sample standard deviation over per-seed values.
std::pair<double, double> mean_std(const std::vector<double>& values);

}  // namespace almm

#endif  // ALMM_METRICS_HPP_
