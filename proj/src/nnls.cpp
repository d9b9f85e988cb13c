#include "almm/nnls.hpp"

#include <cmath>
#include <vector>

namespace almm {

namespace {

// Least-squares solve restricted to the listed columns of A.
Vector subset_ls(const Matrix& A, const Vector& y,
                 const std::vector<int>& cols) {
  const int np = static_cast<int>(cols.size());
  Matrix Ap(A.rows(), np);
  for (int j = 0; j < np; ++j) Ap.col(j) = A.col(cols[j]);
  return Ap.colPivHouseholderQr().solve(y);
}

}  // namespace

Vector solve_nnls(const Matrix& A, const Vector& y, double tol) {
  if (!A.allFinite() || !y.allFinite()) {
    throw DataError("solve_nnls: non-finite input");
  }
  if (A.rows() != y.size()) {
    throw ContractError("dimension mismatch: A rows vs y length");
  }
  if (!(tol > 0.0)) throw ContractError("solve_nnls: tol vs tol > 0");
  const int n = static_cast<int>(A.cols());
  for (int j = 0; j < n; ++j) {
    if (A.col(j).cwiseAbs().maxCoeff() <= 0.0) {
      throw ContractError("solve_nnls: all-zero column " + std::to_string(j));
    }
  }

  const double kkt = tol * (1.0 + (A.transpose() * y).cwiseAbs().maxCoeff());

  Vector x = Vector::Zero(n);
  std::vector<bool> in_passive(n, false);
  std::vector<int> passive;

  const int max_outer = 3 * n + 10;
  int outer = 0;
  while (true) {
    if (++outer > max_outer) {
      throw ConvergenceError("solve_nnls: iteration cap exceeded", x);
    }
    Vector w = A.transpose() * (y - A * x);

    // Select the most violated zero coordinate whose trial coefficient
    // is positive; candidates failing the trial are masked for this
    // round (the Lawson-Hanson near-dependence guard).
    std::vector<bool> masked(n, false);
    int accepted = -1;
    Vector z;
    while (true) {
      int best = -1;
      double wmax = kkt;
      for (int j = 0; j < n; ++j) {
        if (!in_passive[j] && !masked[j] && w[j] > wmax) {
          wmax = w[j];
          best = j;
        }
      }
      if (best < 0) break;
      passive.push_back(best);
      z = subset_ls(A, y, passive);
      if (z[static_cast<Eigen::Index>(passive.size()) - 1] > 0.0) {
        accepted = best;
        in_passive[best] = true;
        break;
      }
      passive.pop_back();
      masked[best] = true;
    }
    if (accepted < 0) break;  // KKT satisfied

    // Feasibility loop: step toward the passive LS solution, dropping
    // coordinates that hit zero, until the solution is interior.
    while (true) {
      double min_z = z.minCoeff();
      if (min_z > 0.0) {
        x.setZero();
        for (std::size_t j = 0; j < passive.size(); ++j) {
          x[passive[j]] = z[static_cast<Eigen::Index>(j)];
        }
        break;
      }
      double step = 1.0;
      for (std::size_t j = 0; j < passive.size(); ++j) {
        const double zj = z[static_cast<Eigen::Index>(j)];
        if (zj <= 0.0) {
          const double xj = x[passive[j]];
          step = std::min(step, xj / (xj - zj));
        }
      }
      for (std::size_t j = 0; j < passive.size(); ++j) {
        const int col = passive[j];
        x[col] += step * (z[static_cast<Eigen::Index>(j)] - x[col]);
      }
      std::vector<int> kept;
      kept.reserve(passive.size());
      for (int col : passive) {
        if (x[col] <= 0.0) {
          x[col] = 0.0;
          in_passive[col] = false;
        } else {
          kept.push_back(col);
        }
      }
      passive.swap(kept);
      if (passive.empty()) break;
      z = subset_ls(A, y, passive);
    }
  }
  return x;
}

double solve_scalar_nnls(const Vector& z, const Vector& r) {
  if (!z.allFinite() || !r.allFinite()) {
    throw DataError("solve_scalar_nnls: non-finite input");
  }
  if (z.size() != r.size()) {
    throw ContractError("dimension mismatch: z length vs r length");
  }
  const double zz = z.squaredNorm();
  if (zz == 0.0) return 0.0;
  return std::max(0.0, z.dot(r) / zz);
}

Vector solve_fclsu_pixel(const Matrix& A, const Vector& y, double delta) {
  if (!(delta > 0.0)) {
    throw ContractError("solve_fclsu_pixel: delta vs delta > 0");
  }
  const Eigen::Index d = A.rows();
  Matrix Aug(d + 1, A.cols());
  Aug.topRows(d) = A;
  Vector yaug(d + 1);
  yaug.head(d) = y;
  // The augmented row enforces the sum only to ~||A^T r||/delta^2, so
  // escalate delta until the unit sum actually holds.
  Vector x;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Aug.row(d).setConstant(delta);
    yaug[d] = delta;
    x = solve_nnls(Aug, yaug);
    if (std::abs(x.sum() - 1.0) <= 1e-6) break;
    delta *= 10.0;
  }
  return x;
}

}  // namespace almm
