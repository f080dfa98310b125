#pragma once

#include <vector>

#include "lfrac/matrix.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Gamma(z) for real z, z not in {0, -1, -2, ...}; throws PoleError at poles.
double gamma_fn(double z);

/// B(z1, z2) = Gamma(z1) Gamma(z2) / Gamma(z1 + z2), z1 > 0, z2 > 0.
double beta_fn(double z1, double z2);

/// Coefficient table of the Mittag-Leffler-type function for a given order:
/// c[n] = 1 / (Gamma(2-alpha)^n * prod_{j=1..n} Gamma(j+1)/Gamma(j+1-alpha)).
/// c[0] = c[1] = 1 and the consecutive ratio decreases strictly to 0, so the
/// function is entire. The table is filled via the multiplicative recurrence
/// rho_n = rho_{n-1} (n+1-alpha)/(n+1), c[n+1] = c[n] rho_n, never via raw
/// gamma quotients.
struct MLCoefficients {
    double alpha;
    std::vector<double> c;
};

MLCoefficients ml_coeffs(FracOrder order, int n_max);

struct SumResult {
    cplx value;
    int terms_used;
    double last_term_mag;
};

/// ML_alpha(s): sum of c[n] s^n until stall_window consecutive terms fall
/// below rel_tol*(1+|sum|). Entire for alpha in (0,1]; throws NotConverged
/// past max_terms (|s| too large for the budget).
SumResult ml_eval_report(FracOrder order, cplx s, const Tolerance& tol);
cplx ml_eval(FracOrder order, cplx s, const Tolerance& tol);

/// k-th ordinary derivative ML_alpha^{(k)}(s) = sum_{n>=k} n(n-1)...(n-k+1) c[n] s^{n-k}.
SumResult ml_deriv_eval_report(FracOrder order, int k, cplx s, const Tolerance& tol);
cplx ml_deriv_eval(FracOrder order, int k, cplx s, const Tolerance& tol);

/// ML_alpha(M) for a square complex matrix, by direct summation of c[n] M^n
/// with repeated multiplication; stops when stall_window consecutive term
/// matrices have max-norm below rel_tol*(1+||sum||). No eigendecomposition:
/// Jordan-block shortcuts valid for the exponential fail for alpha < 1.
ComplexMatrix ml_matrix_eval(FracOrder order, const ComplexMatrix& M, const Tolerance& tol);

/// Optional cross-check path: diagonalize M, apply ml_eval to the eigenvalues
/// and transform back. Only for diagonalizable matrices; throws
/// std::domain_error when the eigenvector condition number is >= 1e6.
ComplexMatrix ml_matrix_eval_diag(FracOrder order, const ComplexMatrix& M, const Tolerance& tol);

/// Classical Mittag-Leffler function E_{alpha,beta}(s) = sum s^n / Gamma(n alpha + beta),
/// for cross-checks; E_alpha = E_{alpha,1}. Requires alpha > 0, beta > 0.
SumResult classical_ml_eval_report(double alpha, double beta, cplx s, const Tolerance& tol);
cplx classical_ml_eval(double alpha, double beta, cplx s, const Tolerance& tol);

}  // namespace lfrac
