#include "almm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace almm {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* lhs,
                      const char* rhs) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractError(std::string("dimension mismatch: ") + lhs + " vs " +
                        rhs);
  }
}

}  // namespace

double armse(const Matrix& X_true, const Matrix& X_est) {
  check_same_shape(X_true, X_est, "X_true", "X_est");
  const double P = static_cast<double>(X_true.rows());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < X_true.cols(); ++k) {
    acc += std::sqrt((X_true.col(k) - X_est.col(k)).squaredNorm() / P);
  }
  return acc / static_cast<double>(X_true.cols());
}

double rrmse(const Matrix& Y, const Matrix& Y_hat) {
  check_same_shape(Y, Y_hat, "Y", "Y_hat");
  const double D = static_cast<double>(Y.rows());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < Y.cols(); ++k) {
    acc += std::sqrt((Y.col(k) - Y_hat.col(k)).squaredNorm() / D);
  }
  return acc / static_cast<double>(Y.cols());
}

double asam(const Matrix& Y, const Matrix& Y_hat, int* degenerate_count) {
  check_same_shape(Y, Y_hat, "Y", "Y_hat");
  int degenerate = 0;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < Y.cols(); ++k) {
    const double ny = Y.col(k).norm();
    const double nh = Y_hat.col(k).norm();
    if (ny == 0.0 || nh == 0.0) {
      ++degenerate;
      continue;  // angle 0 by convention
    }
    const double c = std::clamp(Y.col(k).dot(Y_hat.col(k)) / (ny * nh),
                                -1.0, 1.0);
    acc += std::acos(c);
  }
  if (degenerate_count) *degenerate_count = degenerate;
  return acc / static_cast<double>(Y.cols());
}

std::vector<int> assignment_min_cost(const Matrix& cost) {
  // Jonker-Volgenant style shortest augmenting path, O(n^3).
  if (cost.rows() != cost.cols()) {
    throw ContractError("assignment_min_cost: cost rows vs cols (square)");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // col -> row, 1-based

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) -
                           u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0) {
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] =
          j - 1;
    }
  }
  return row_to_col;
}

std::vector<int> match_endmembers(const Matrix& A_est, const Matrix& A_ref) {
  check_same_shape(A_est, A_ref, "A_est", "A_ref");
  const int P = static_cast<int>(A_est.cols());
  Matrix angle(P, P);
  for (int i = 0; i < P; ++i) {
    const double ni = A_est.col(i).norm();
    if (ni == 0.0) {
      throw ContractError("match_endmembers: zero-norm estimated column " +
                          std::to_string(i));
    }
    for (int j = 0; j < P; ++j) {
      const double nj = A_ref.col(j).norm();
      if (nj == 0.0) {
        throw ContractError("match_endmembers: zero-norm reference column " +
                            std::to_string(j));
      }
      const double c =
          std::clamp(A_est.col(i).dot(A_ref.col(j)) / (ni * nj), -1.0, 1.0);
      angle(i, j) = std::acos(c);
    }
  }

  if (P <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(P));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int i = 0; i < P; ++i) cost += angle(i, perm[static_cast<std::size_t>(i)]);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  return assignment_min_cost(angle);
}

double overall_accuracy(const std::vector<int>& labels_ref,
                        const AbundanceMatrix& X_est) {
  if (static_cast<long>(labels_ref.size()) != X_est.data.cols()) {
    throw ContractError("dimension mismatch: labels length vs X_est columns");
  }
  long considered = 0;
  long matches = 0;
  for (Eigen::Index k = 0; k < X_est.data.cols(); ++k) {
    const int ref = labels_ref[static_cast<std::size_t>(k)];
    if (ref < 0) continue;  // masked-out sentinel
    ++considered;
    const auto col = X_est.data.col(k);
    if (col.maxCoeff() <= 0.0) continue;  // degenerate column -> mismatch
    int arg = 0;
    for (Eigen::Index p = 1; p < col.size(); ++p) {
      if (col[p] > col[arg]) arg = static_cast<int>(p);  // ties keep lowest
    }
    if (arg == ref) ++matches;
  }
  if (considered == 0) return 0.0;
  return 100.0 * static_cast<double>(matches) /
         static_cast<double>(considered);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace almm
