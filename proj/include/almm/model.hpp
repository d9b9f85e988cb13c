#ifndef ALMM_MODEL_HPP_
#define ALMM_MODEL_HPP_

#include <vector>

#include "almm/types.hpp"

namespace almm {

/// Mixes endmembers, per-pixel scales and the variability term into a
/// D x N image: column k is S_k * (A x_k) + E b_k. E and B may both be
/// empty (L = 0), in which case the variability term vanishes and the
/// result with unit scales is exactly A * X.
Matrix reconstruct(const EndmemberDictionary& A, const AbundanceMatrix& X,
                   const ScalingFactors& S, const VariabilityDictionary& E,
                   const VariabilityCoefficients& B);

/// Full model objective:
///   1/2 ||Y - A X diag(S) - E B||_F^2 + alpha ||X||_{1,1}
///   + beta/2 ||B||_F^2 + gamma/2 ||A^T E||_F^2 + eta/2 ||E^T E - I||_F^2.
/// Zero-weight terms are skipped; with L = 0 only the residual and the
/// abundance sparsity term can contribute.
double objective_value(const Matrix& Y, const EndmemberDictionary& A,
                       const AbundanceMatrix& X, const ScalingFactors& S,
                       const VariabilityDictionary& E,
                       const VariabilityCoefficients& B,
                       const SolverConfig& cfg);

/// Elementwise shrinkage g_i = max(0, |v_i| - t) * sign(v_i) with
/// sign(0) = +1. soft_threshold(v, 0) is the identity.
Vector soft_threshold(const Vector& v, double t);

/// All pairwise cosines cos(a_i, v_j) between endmember columns and the
/// columns of V (variability samples or dictionary atoms), flattened
/// endmember-major for histogramming. Zero-norm V columns contribute 0
/// by convention; a zero-norm endmember column is an error.
std::vector<double> coherence_stats(const EndmemberDictionary& A,
                                    const Matrix& V);

}  // namespace almm

#endif  // ALMM_MODEL_HPP_
