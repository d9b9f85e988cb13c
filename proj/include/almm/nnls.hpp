#ifndef ALMM_NNLS_HPP_
#define ALMM_NNLS_HPP_

#include "almm/types.hpp"

namespace almm {

/// Active-set (Lawson-Hanson) solve of min_x 1/2 ||y - A x||^2 s.t. x >= 0.
/// Terminates when the KKT conditions hold at scale tol * (1 + ||A^T y||_inf):
/// positive coordinates have |gradient| below it, zero coordinates have
/// gradient above its negation. Throws ConvergenceError (carrying the best
/// iterate) if the iteration cap is hit, DataError on non-finite input.
Vector solve_nnls(const Matrix& A, const Vector& y, double tol = 1e-10);

/// One-dimensional NNLS: argmin_{s >= 0} 1/2 ||r - s z||^2, i.e.
/// max(0, z.r / z.z), with 0 returned for a zero z (degenerate pixel).
double solve_scalar_nnls(const Vector& z, const Vector& r);

/// Fully constrained (ANC + ASC) pixel solve via the classical augmented
/// system [A; delta*1^T] x ~ [y; delta]; the sum-to-one constraint is
/// enforced to roughly 1/delta^2.
Vector solve_fclsu_pixel(const Matrix& A, const Vector& y,
                         double delta = 1e3);

}  // namespace almm

#endif  // ALMM_NNLS_HPP_
