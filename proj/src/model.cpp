#include "almm/model.hpp"

#include <cmath>
#include <string>

namespace almm {

namespace {

void check_pair(bool ok, const char* lhs, const char* rhs) {
  if (!ok) {
    throw ContractError(std::string("dimension mismatch: ") + lhs + " vs " +
                        rhs);
  }
}

void check_model_dims(const EndmemberDictionary& A, const AbundanceMatrix& X,
                      const ScalingFactors& S, const VariabilityDictionary& E,
                      const VariabilityCoefficients& B) {
  check_pair(A.data.cols() == X.data.rows(), "A columns (P)", "X rows");
  check_pair(X.data.cols() == S.values.size(), "X columns (N)", "S length");
  const bool has_var = E.data.size() > 0 || B.data.size() > 0;
  if (has_var) {
    check_pair(E.data.rows() == A.data.rows(), "E rows (D)", "A rows");
    check_pair(E.data.cols() == B.data.rows(), "E columns (L)", "B rows");
    check_pair(B.data.cols() == X.data.cols(), "B columns (N)", "X columns");
  }
}

}  // namespace

Matrix reconstruct(const EndmemberDictionary& A, const AbundanceMatrix& X,
                   const ScalingFactors& S, const VariabilityDictionary& E,
                   const VariabilityCoefficients& B) {
  check_model_dims(A, X, S, E, B);
  Matrix Y = A.data * X.data;
  Y = Y * S.values.asDiagonal();
  if (E.data.size() > 0 && B.data.size() > 0) {
    Y.noalias() += E.data * B.data;
  }
  return Y;
}

double objective_value(const Matrix& Y, const EndmemberDictionary& A,
                       const AbundanceMatrix& X, const ScalingFactors& S,
                       const VariabilityDictionary& E,
                       const VariabilityCoefficients& B,
                       const SolverConfig& cfg) {
  check_model_dims(A, X, S, E, B);
  check_pair(Y.rows() == A.data.rows(), "Y rows (D)", "A rows");
  check_pair(Y.cols() == X.data.cols(), "Y columns (N)", "X columns");

  const Matrix R = Y - reconstruct(A, X, S, E, B);
  double value = 0.5 * R.squaredNorm();
  if (cfg.alpha > 0.0) {
    value += cfg.alpha * X.data.cwiseAbs().sum();
  }
  const Eigen::Index L = E.data.cols();
  if (L > 0) {
    if (cfg.beta > 0.0) value += 0.5 * cfg.beta * B.data.squaredNorm();
    if (cfg.gamma > 0.0) {
      value += 0.5 * cfg.gamma * (A.data.transpose() * E.data).squaredNorm();
    }
    if (cfg.eta > 0.0) {
      Matrix G = E.data.transpose() * E.data;
      G.diagonal().array() -= 1.0;
      value += 0.5 * cfg.eta * G.squaredNorm();
    }
  }
  return value;
}

Vector soft_threshold(const Vector& v, double t) {
  if (t < 0.0) throw ContractError("soft_threshold: t vs t >= 0");
  Vector g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double sign = v[i] >= 0.0 ? 1.0 : -1.0;  // sign(0) = +1
    g[i] = std::max(0.0, std::abs(v[i]) - t) * sign;
  }
  return g;
}

std::vector<double> coherence_stats(const EndmemberDictionary& A,
                                    const Matrix& V) {
  if (V.cols() < 1) {
    throw ContractError("coherence_stats: V columns vs >= 1");
  }
  check_pair(V.rows() == A.data.rows(), "V rows (D)", "A rows");
  const Eigen::Index P = A.data.cols();
  const Eigen::Index M = V.cols();
  std::vector<double> cosines;
  cosines.reserve(static_cast<std::size_t>(P * M));
  for (Eigen::Index p = 0; p < P; ++p) {
    const double na = A.data.col(p).norm();
    if (na <= 0.0) {
      throw ContractError("coherence_stats: zero-norm endmember column " +
                          std::to_string(p));
    }
    for (Eigen::Index j = 0; j < M; ++j) {
      const double nv = V.col(j).norm();
      cosines.push_back(nv > 0.0 ? A.data.col(p).dot(V.col(j)) / (na * nv)
                                 : 0.0);
    }
  }
  return cosines;
}

}  // namespace almm
