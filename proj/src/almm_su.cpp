#include "almm/almm_su.hpp"

#include <cmath>

#include "almm/model.hpp"
#include "almm/nnls.hpp"
#include "almm/parallel.hpp"

namespace almm {

namespace {

constexpr double kDegenerateSum = 1e-12;

// Quantities shared by every pixel of an image: the eigendecomposition
// of A^T A (the x-update matrix is S^2 A^T A + 2 mu I with S and mu
// changing every iteration) and one factorization of E^T E + beta I
// (E is fixed here, so it serves all pixels and iterations).
struct SharedPrecomp {
  Matrix A;                // D x P
  Matrix eigvecs;          // P x P
  Vector eigvals;          // length P
  Matrix AtE;              // P x L
  Eigen::LLT<Matrix> EtE_beta;
  int L = 0;

  SharedPrecomp(const EndmemberDictionary& a, const VariabilityDictionary& e,
                const SolverConfig& cfg)
      : A(a.data), L(e.num_atoms()) {
    if (L > 0 && e.data.rows() != A.rows()) {
      throw ContractError("dimension mismatch: E rows (D) vs A rows");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A.transpose() * A);
    eigvecs = eig.eigenvectors();
    eigvals = eig.eigenvalues();
    if (L > 0) {
      AtE = A.transpose() * e.data;
      Matrix M = e.data.transpose() * e.data;
      M.diagonal().array() += cfg.beta;
      EtE_beta.compute(M);
      if (EtE_beta.info() != Eigen::Success) {
        throw ContractError(
            "b-update matrix E^T E is rank-deficient; set beta > 0");
      }
    }
  }
};

PixelResult solve_pixel(const Vector& y, const Vector& Aty, const Vector& Ety,
                        const Matrix& E, const SharedPrecomp& pre,
                        const SolverConfig& cfg) {
  const int P = static_cast<int>(pre.A.cols());
  const int L = pre.L;

  PixelAdmmState st;
  st.x = Vector::Zero(P);
  st.g = Vector::Zero(P);
  st.h = Vector::Zero(P);
  st.b = Vector::Zero(L);
  st.S = 1.0;
  st.lambda = Vector::Zero(P);
  st.nu = Vector::Zero(P);
  st.mu = cfg.mu0;

  Vector x_prev = Vector::Zero(P);
  for (st.iter = 1; st.iter <= cfg.max_iter; ++st.iter) {
    // x-update: (D^T D + 2 mu I) x = mu g + lambda + mu h + nu + D^T y
    // - D^T E b, with D = S A, via the shared eigendecomposition.
    Vector rhs = st.mu * st.g + st.lambda + st.mu * st.h + st.nu +
                 st.S * Aty;
    if (L > 0) rhs.noalias() -= st.S * (pre.AtE * st.b);
    const double s2 = st.S * st.S;
    st.x = pre.eigvecs *
           ((s2 * pre.eigvals.array() + 2.0 * st.mu).inverse().matrix()
                .asDiagonal() *
            (pre.eigvecs.transpose() * rhs));

    // Unit-sum rescale; a vanishing sum means the pixel carries no
    // endmember signal at all.
    const double sum = st.x.sum();
    if (sum <= kDegenerateSum) {
      st.x.setZero();
      st.g.setZero();
      st.h.setZero();
      st.S = 0.0;
      st.b.setZero();
      st.status = PixelStatus::Degenerate;
      break;
    }
    st.x /= sum;

    // Scale update against the current reconstruction direction.
    const Vector z = pre.A * st.x;
    if (L > 0) {
      st.S = solve_scalar_nnls(z, y - E * st.b);
      st.b = pre.EtE_beta.solve(Ety - st.S * (pre.AtE.transpose() * st.x));
    } else {
      st.S = solve_scalar_nnls(z, y);
    }

    st.g = soft_threshold(st.x - st.lambda / st.mu, cfg.alpha / st.mu);
    st.h = (st.x - st.nu / st.mu).cwiseMax(0.0);

    st.lambda += st.mu * (st.g - st.x);
    st.nu += st.mu * (st.h - st.x);

    st.residual_g = (st.g - st.x).norm();
    st.residual_h = (st.h - st.x).norm();
    st.residual_dx = (st.x - x_prev).norm();
    st.mu = std::min(cfg.rho * st.mu, cfg.mu_max);
    x_prev = st.x;

    if (st.residual_g < cfg.eps && st.residual_h < cfg.eps &&
        st.residual_dx < cfg.eps) {
      st.converged = true;
      break;
    }
  }
  if (!st.converged && st.status == PixelStatus::Ok) {
    st.status = PixelStatus::NotConverged;
  }

  PixelResult out;
  out.b = st.b;
  out.S = st.S;
  if (st.status == PixelStatus::Degenerate) {
    out.x = Vector::Zero(P);
    out.state = st;
    return out;
  }
  // The ANC lives in h during the iteration, so x may carry residual
  // negatives of the order of eps; clamp and restore the exact unit sum.
  st.anc_violation = std::max(0.0, -st.x.minCoeff());
  out.x = st.x.cwiseMax(0.0);
  const double s = out.x.sum();
  if (s > kDegenerateSum) {
    out.x /= s;
  } else {
    out.x.setZero();
    out.S = 0.0;
    st.status = PixelStatus::Degenerate;
  }
  out.state = st;
  return out;
}

}  // namespace

PixelResult unmix_pixel_almm(const Vector& y, const EndmemberDictionary& A,
                             const VariabilityDictionary& E,
                             const SolverConfig& cfg) {
  cfg.validate();
  if (y.size() != A.data.rows()) {
    throw ContractError("dimension mismatch: y length (D) vs A rows");
  }
  detail::require_finite("y", y);
  const SharedPrecomp pre(A, E, cfg);
  const Vector Aty = A.data.transpose() * y;
  const Vector Ety = pre.L > 0 ? Vector(E.data.transpose() * y) : Vector();
  return solve_pixel(y, Aty, Ety, E.data, pre, cfg);
}

AlmmImageResult unmix_image_almm(const HyperspectralImage& Y,
                                 const EndmemberDictionary& A,
                                 const VariabilityDictionary& E,
                                 const SolverConfig& cfg) {
  cfg.validate();
  if (Y.data.rows() != A.data.rows()) {
    throw ContractError("dimension mismatch: Y rows (D) vs A rows");
  }
  const SharedPrecomp pre(A, E, cfg);
  const int N = Y.num_pixels();
  const int P = A.num_endmembers();
  const int L = pre.L;

  const Matrix AtY = A.data.transpose() * Y.data;
  const Matrix EtY = L > 0 ? Matrix(E.data.transpose() * Y.data) : Matrix();

  Matrix X(P, N);
  Vector S(N);
  Matrix B(L, N);
  std::vector<PixelStatus> status(static_cast<std::size_t>(N),
                                  PixelStatus::Ok);
  std::vector<double> violations(static_cast<std::size_t>(N), 0.0);
  std::vector<char> converged(static_cast<std::size_t>(N), 0);

  parallel_for(N, [&](int k) {
    const Vector Ety =
        L > 0 ? Vector(EtY.col(k)) : Vector();
    PixelResult r =
        solve_pixel(Y.data.col(k), AtY.col(k), Ety, E.data, pre, cfg);
    X.col(k) = r.x;
    S[k] = r.S;
    if (L > 0) B.col(k) = r.b;
    status[static_cast<std::size_t>(k)] = r.state.status;
    violations[static_cast<std::size_t>(k)] = r.state.anc_violation;
    converged[static_cast<std::size_t>(k)] = r.state.converged ? 1 : 0;
  });

  AlmmImageResult out;
  out.abundances = AbundanceMatrix(std::move(X), true);
  out.scales = ScalingFactors(std::move(S));
  out.coefficients = VariabilityCoefficients(std::move(B));
  out.status = std::move(status);
  for (int k = 0; k < N; ++k) {
    out.converged_pixels += converged[static_cast<std::size_t>(k)];
    out.max_anc_violation =
        std::max(out.max_anc_violation, violations[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace almm
