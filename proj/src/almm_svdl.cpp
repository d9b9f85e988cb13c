#include "almm/almm_svdl.hpp"

#include <cmath>

#include "almm/baselines.hpp"
#include "almm/model.hpp"
#include "almm/rng.hpp"

namespace almm {

namespace {

constexpr double kDegenerateSum = 1e-12;

// Thin orthonormal factor of a seeded standard-normal D x L draw.
Matrix random_orthonormal(int d, int l, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(d, l);
  for (int j = 0; j < l; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(d, l);
}

double model_objective(const Matrix& Y, const Matrix& A, const Matrix& X,
                       const Vector& S, const Matrix& E, const Matrix& B,
                       const SolverConfig& cfg) {
  Matrix R = Y - (A * X) * S.asDiagonal();
  R.noalias() -= E * B;
  double value = 0.5 * R.squaredNorm();
  if (cfg.alpha > 0.0) value += cfg.alpha * X.cwiseAbs().sum();
  if (cfg.beta > 0.0) value += 0.5 * cfg.beta * B.squaredNorm();
  if (cfg.gamma > 0.0) value += 0.5 * cfg.gamma * (A.transpose() * E).squaredNorm();
  if (cfg.eta > 0.0) {
    Matrix Gr = E.transpose() * E;
    Gr.diagonal().array() -= 1.0;
    value += 0.5 * cfg.eta * Gr.squaredNorm();
  }
  return value;
}

void record(SvdlState& st, const Matrix& Y, const Matrix& A,
            const SolverConfig& cfg, int iter,
            const std::array<double, 6>& residuals) {
  SvdlIterationStats row;
  row.iter = iter;
  row.objective = model_objective(Y, A, st.X, st.S, st.E, st.B, cfg);
  row.coherence = (A.transpose() * st.E).norm();
  Matrix Gr = st.E.transpose() * st.E;
  Gr.diagonal().array() -= 1.0;
  row.gram_deviation = Gr.norm();
  row.residuals = residuals;
  row.xi = st.xi;
  st.history.push_back(row);
}

}  // namespace

SvdlResult learn_svdl(const HyperspectralImage& Yimg,
                      const EndmemberDictionary& Adict,
                      const SolverConfig& cfg, const SvdlObserver& observer) {
  cfg.validate();
  const Matrix& Y = Yimg.data;
  const Matrix& A = Adict.data;
  if (Y.rows() != A.rows()) {
    throw ContractError("dimension mismatch: Y rows (D) vs A rows");
  }
  const int D = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Y.cols());
  const int P = static_cast<int>(A.cols());
  const int L = cfg.num_atoms;
  if (L < 1) {
    throw ContractError(
        "learn_svdl: num_atoms vs >= 1 (use the fixed-dictionary pixel "
        "solver when no atoms are wanted)");
  }
  if (L > D) {
    throw ContractError(
        "learn_svdl: num_atoms vs <= D (orthonormal initialization)");
  }

  SvdlState st;
  st.X = unmix_sclsu(Yimg, Adict).abundances.data;
  st.S = Vector::Ones(N);
  st.E = random_orthonormal(D, L, cfg.rng_seed);
  st.B = Matrix::Zero(L, N);
  st.G = Matrix::Zero(P, N);
  st.H = Matrix::Zero(P, N);
  st.M = Matrix::Zero(P, N);
  st.T = Vector::Zero(N);
  st.Q = Matrix::Zero(D, L);
  st.Lambda = Matrix::Zero(P, N);
  st.V = Matrix::Zero(P, N);
  st.Omega = Matrix::Zero(P, N);
  st.Pi = Matrix::Zero(D, L);
  st.Delta = Vector::Zero(N);
  st.xi = cfg.mu0;
  st.status.assign(static_cast<std::size_t>(N), PixelStatus::Ok);

  const Matrix AtA = A.transpose() * A;
  const Matrix AtY = A.transpose() * Y;
  const Matrix gammaAAt = cfg.gamma * (A * A.transpose());

  // Residuals at the initial point, for the iteration-0 history row.
  {
    std::array<double, 6> r0{};
    r0[0] = (st.G - st.X).norm();
    r0[1] = (st.H - st.X).norm();
    r0[2] = (st.M - st.X * st.S.asDiagonal()).norm();
    r0[3] = (st.Q - st.E).norm();
    r0[4] = (st.T - st.S).norm();
    r0[5] = 0.0;
    record(st, Y, A, cfg, 0, r0);
  }

  Matrix E_prev = st.E;
  for (st.iter = 1; st.iter <= cfg.max_iter; ++st.iter) {
    const double xi = st.xi;

    // M: (A^T A + xi I)^-1 (A^T Y - A^T E B + xi X S - Omega)
    Matrix MtxM = AtA;
    MtxM.diagonal().array() += xi;
    Matrix rhsM = AtY - (A.transpose() * st.E) * st.B +
                  xi * (st.X * st.S.asDiagonal()) - st.Omega;
    st.M = MtxM.llt().solve(rhsM);

    // B: (E^T E + beta I)^-1 (E^T Y - E^T A M)
    Matrix EtE = st.E.transpose() * st.E;
    EtE.diagonal().array() += cfg.beta;
    if (cfg.beta <= 0.0) {
      Eigen::LLT<Matrix> probe(EtE);
      if (probe.info() != Eigen::Success) {
        throw ContractError(
            "B-update matrix E^T E is rank-deficient; set beta > 0");
      }
    }
    st.B = EtE.llt().solve(st.E.transpose() * Y -
                           (st.E.transpose() * A) * st.M);

    // X column-wise: the right factor xi S S^T + 2 xi I is diagonal.
    for (int k = 0; k < N; ++k) {
      const double sk = st.S[k];
      const double denom = xi * sk * sk + 2.0 * xi;
      st.X.col(k) = (xi * st.G.col(k) + st.Lambda.col(k) + xi * st.H.col(k) +
                     st.V.col(k) + sk * st.Omega.col(k) +
                     xi * sk * st.M.col(k)) /
                    denom;
    }
    // Unit-sum rescale of each column; vanishing sums flag the pixel.
    for (int k = 0; k < N; ++k) {
      const double sum = st.X.col(k).sum();
      if (sum > kDegenerateSum) {
        st.X.col(k) /= sum;
        st.status[static_cast<std::size_t>(k)] = PixelStatus::Ok;
      } else {
        st.X.col(k).setZero();
        st.status[static_cast<std::size_t>(k)] = PixelStatus::Degenerate;
      }
    }

    // S restricted to the diagonal of the quadratic subproblem.
    for (int k = 0; k < N; ++k) {
      const auto xk = st.X.col(k);
      const double denom = xi * xk.squaredNorm() + xi;
      st.S[k] = (xi * xk.dot(st.M.col(k)) + xk.dot(st.Omega.col(k)) +
                 xi * st.T[k] + st.Delta[k]) /
                denom;
    }

    // E: ((Y - A M) B^T + xi Q + Pi) (B B^T + xi I)^-1
    Matrix BBt = st.B * st.B.transpose();
    BBt.diagonal().array() += xi;
    Matrix rhsE = (Y - A * st.M) * st.B.transpose() + xi * st.Q + st.Pi;
    st.E = BBt.llt().solve(rhsE.transpose()).transpose();

    // Q against the previous iteration's Q.
    Matrix QtxQ = gammaAAt + cfg.eta * (st.Q * st.Q.transpose());
    QtxQ.diagonal().array() += xi;
    Matrix rhsQ = cfg.eta * st.Q + xi * st.E - st.Pi;
    st.Q = QtxQ.llt().solve(rhsQ);

    // G, H, T: shrinkage and nonnegative projections.
    for (int k = 0; k < N; ++k) {
      for (int p = 0; p < P; ++p) {
        const double v = st.X(p, k) - st.Lambda(p, k) / xi;
        const double sign = v >= 0.0 ? 1.0 : -1.0;
        st.G(p, k) = std::max(0.0, std::abs(v) - cfg.alpha / xi) * sign;
      }
    }
    st.H = (st.X - st.V / xi).cwiseMax(0.0);
    st.T = (st.S - st.Delta / xi).cwiseMax(0.0);

    st.Lambda += xi * (st.G - st.X);
    st.V += xi * (st.H - st.X);
    st.Omega += xi * (st.M - st.X * st.S.asDiagonal());
    st.Pi += xi * (st.Q - st.E);
    st.Delta += xi * (st.T - st.S);

    st.xi = std::min(cfg.rho * xi, cfg.mu_max);

    st.residuals[0] = (st.G - st.X).norm();
    st.residuals[1] = (st.H - st.X).norm();
    st.residuals[2] = (st.M - st.X * st.S.asDiagonal()).norm();
    st.residuals[3] = (st.Q - st.E).norm();
    st.residuals[4] = (st.T - st.S).norm();
    st.residuals[5] = (st.E - E_prev).norm();
    E_prev = st.E;

    record(st, Y, A, cfg, st.iter, st.residuals);
    if (observer) observer(st);

    bool all_small = true;
    for (double r : st.residuals) all_small = all_small && r < cfg.eps;
    if (all_small) {
      st.converged = true;
      break;
    }
  }
  if (st.iter > cfg.max_iter) st.iter = cfg.max_iter;

  // Output cleanup: X columns may carry eps-scale negatives (the ANC is
  // enforced through H); clamp, restore exact unit sums and report the
  // worst violation. S likewise is clamped at zero.
  Matrix Xout = st.X;
  for (int k = 0; k < N; ++k) {
    const double neg = -Xout.col(k).minCoeff();
    st.max_anc_violation = std::max(st.max_anc_violation, std::max(0.0, neg));
    Xout.col(k) = Xout.col(k).cwiseMax(0.0);
    const double sum = Xout.col(k).sum();
    if (sum > kDegenerateSum) {
      Xout.col(k) /= sum;
    } else {
      Xout.col(k).setZero();
      st.status[static_cast<std::size_t>(k)] = PixelStatus::Degenerate;
    }
  }
  Vector Sout = st.S.cwiseMax(0.0);
  for (int k = 0; k < N; ++k) {
    if (st.status[static_cast<std::size_t>(k)] == PixelStatus::Degenerate) {
      Sout[k] = 0.0;
    }
  }

  SvdlResult out;
  out.dictionary = VariabilityDictionary(st.E);
  out.abundances = AbundanceMatrix(std::move(Xout), true);
  out.scales = ScalingFactors(std::move(Sout));
  out.coefficients = VariabilityCoefficients(st.B);
  out.state = std::move(st);
  return out;
}

SvdlDiagnostics svdl_diagnostics(const SvdlState& state) {
  SvdlDiagnostics d;
  d.objective.reserve(state.history.size());
  for (const auto& row : state.history) {
    d.objective.push_back(row.objective);
    d.coherence.push_back(row.coherence);
    d.gram_deviation.push_back(row.gram_deviation);
    d.residuals.push_back(row.residuals);
    d.xi.push_back(row.xi);
  }
  return d;
}

}  // namespace almm
