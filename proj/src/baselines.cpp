#include "almm/baselines.hpp"

#include <cmath>
#include <string>

#include "almm/model.hpp"
#include "almm/nnls.hpp"
#include "almm/parallel.hpp"

namespace almm {

namespace {

constexpr double kDegenerateSum = 1e-12;

void check_image_dims(const HyperspectralImage& Y,
                      const EndmemberDictionary& A) {
  if (Y.data.rows() != A.data.rows()) {
    throw ContractError("dimension mismatch: Y rows (D) vs A rows");
  }
}

// Eq.-style unit-sum split: S_k = 1^T x_k, x_k <- x_k / S_k, with
// all-zero columns flagged degenerate.
void split_scale(Matrix& X, Vector& S, std::vector<PixelStatus>& status) {
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    const double sum = X.col(k).sum();
    if (sum > kDegenerateSum) {
      S[k] = sum;
      X.col(k) /= sum;
    } else {
      S[k] = 0.0;
      X.col(k).setZero();
      status[static_cast<std::size_t>(k)] = PixelStatus::Degenerate;
    }
  }
}

template <typename PixelSolve>
BaselineResult per_pixel_nnls(const HyperspectralImage& Y,
                              const EndmemberDictionary& A,
                              PixelSolve&& solve) {
  const int N = Y.num_pixels();
  const int P = A.num_endmembers();
  Matrix X(P, N);
  std::vector<PixelStatus> status(static_cast<std::size_t>(N),
                                  PixelStatus::Ok);
  parallel_for(N, [&](int k) {
    try {
      X.col(k) = solve(Y.data.col(k));
    } catch (const ConvergenceError& e) {
      X.col(k) = e.best_iterate;
      status[static_cast<std::size_t>(k)] = PixelStatus::NotConverged;
    } catch (const std::exception& e) {
      throw DataError("pixel " + std::to_string(k) + ": " + e.what());
    }
  });
  BaselineResult result;
  result.abundances = AbundanceMatrix(std::move(X), false);
  result.status = std::move(status);
  return result;
}

}  // namespace

BaselineResult unmix_fclsu(const HyperspectralImage& Y,
                           const EndmemberDictionary& A) {
  check_image_dims(Y, A);
  BaselineResult result = per_pixel_nnls(
      Y, A, [&](const auto& y) { return solve_fclsu_pixel(A.data, y); });
  // The delta-augmented solve leaves column sums within ~1e-6 of one;
  // renormalize so the ASC holds exactly.
  Matrix X = std::move(result.abundances.data);
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    const double sum = X.col(k).sum();
    if (sum > kDegenerateSum) {
      X.col(k) /= sum;
    } else {
      X.col(k).setZero();
      result.status[static_cast<std::size_t>(k)] = PixelStatus::Degenerate;
    }
  }
  result.abundances = AbundanceMatrix(std::move(X), true);
  return result;
}

BaselineResult unmix_clsu(const HyperspectralImage& Y,
                          const EndmemberDictionary& A) {
  check_image_dims(Y, A);
  return per_pixel_nnls(
      Y, A, [&](const auto& y) { return solve_nnls(A.data, y); });
}

BaselineResult unmix_sclsu(const HyperspectralImage& Y,
                           const EndmemberDictionary& A) {
  BaselineResult result = unmix_clsu(Y, A);
  Matrix X = std::move(result.abundances.data);
  Vector S(X.cols());
  split_scale(X, S, result.status);
  result.abundances = AbundanceMatrix(std::move(X), true);
  result.scales = ScalingFactors(std::move(S));
  return result;
}

BaselineResult unmix_sunsal(const HyperspectralImage& Y,
                            const EndmemberDictionary& A,
                            double lambda_sparse,
                            const SolverConfig& schedule) {
  check_image_dims(Y, A);
  if (lambda_sparse < 0.0) {
    throw ContractError("unmix_sunsal: lambda_sparse vs >= 0");
  }
  schedule.validate();

  const int N = Y.num_pixels();
  const int P = A.num_endmembers();

  // (A^T A + 2 mu I)^-1 via one shared eigendecomposition; mu moves
  // every iteration so a fixed factorization would not survive.
  const Matrix AtA = A.data.transpose() * A.data;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(AtA);
  const Matrix V = eig.eigenvectors();
  const Vector ev = eig.eigenvalues();

  Matrix X(P, N);
  std::vector<PixelStatus> status(static_cast<std::size_t>(N),
                                  PixelStatus::Ok);

  parallel_for(N, [&](int k) {
    const Vector Aty = A.data.transpose() * Y.data.col(k);
    Vector x = Vector::Zero(P);
    Vector g = Vector::Zero(P);
    Vector h = Vector::Zero(P);
    Vector lam = Vector::Zero(P);
    Vector nu = Vector::Zero(P);
    double mu = schedule.mu0;
    bool converged = false;
    for (int t = 0; t < schedule.max_iter; ++t) {
      const Vector rhs = mu * g + lam + mu * h + nu + Aty;
      const Vector x_new =
          V * ((ev.array() + 2.0 * mu).inverse().matrix().asDiagonal() *
               (V.transpose() * rhs));
      const Vector g_prev = g;
      const Vector h_prev = h;
      g = soft_threshold(x_new - lam / mu, lambda_sparse / mu);
      h = (x_new - nu / mu).cwiseMax(0.0);
      lam += mu * (g - x_new);
      nu += mu * (h - x_new);
      const double r_g = (g - x_new).norm();
      const double r_h = (h - x_new).norm();
      const double r_x = (x_new - x).norm();
      // Residual balancing instead of the blind geometric ramp: a penalty
      // that outruns the duals freezes the iterate before the active set
      // settles, stranding it off the optimum.
      const double primal = std::sqrt(r_g * r_g + r_h * r_h);
      const double dual = mu * std::sqrt((g - g_prev).squaredNorm() +
                                         (h - h_prev).squaredNorm());
      if (primal > 10.0 * dual) {
        mu = std::min(2.0 * mu, schedule.mu_max);
      } else if (dual > 10.0 * primal) {
        mu = std::max(0.5 * mu, 1e-8);
      }
      x = x_new;
      if (r_g < schedule.eps && r_h < schedule.eps && r_x < schedule.eps) {
        converged = true;
        break;
      }
    }
    if (!converged) status[static_cast<std::size_t>(k)] = PixelStatus::NotConverged;
    X.col(k) = x.cwiseMax(0.0);
  });

  BaselineResult result;
  result.abundances = AbundanceMatrix(std::move(X), false);
  result.status = std::move(status);
  return result;
}

BaselineResult unmix_ssunsal(const HyperspectralImage& Y,
                             const EndmemberDictionary& A,
                             double lambda_sparse,
                             const SolverConfig& schedule) {
  BaselineResult result = unmix_sunsal(Y, A, lambda_sparse, schedule);
  Matrix X = std::move(result.abundances.data);
  Vector S(X.cols());
  split_scale(X, S, result.status);
  result.abundances = AbundanceMatrix(std::move(X), true);
  result.scales = ScalingFactors(std::move(S));
  return result;
}

}  // namespace almm
