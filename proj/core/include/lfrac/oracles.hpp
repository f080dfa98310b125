#pragma once

#include <string>
#include <vector>

#include "lfrac/linsolve.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Budgets for the independent oracles. Oracles trade speed for two digits of
/// headroom beyond the acceptance tolerances (target 1e-14 relative).
struct OracleConfig {
    int precision_terms = 200;
    int picard_iters = 30;
    long long mc_samples = 1'000'000;
    int picard_grid = 240;  // Chebyshev sample points, >= 200
};

/// Independent high-precision path for the Mittag-Leffler-type function:
/// per-term gamma products evaluated directly in extended precision with
/// compensated summation; shares nothing with the coefficient recurrence.
cplx oracle_ml(double alpha, cplx s, const OracleConfig& cfg = {});

/// Picard fixed-point iteration x_k = x0 + J^alpha(Acal x_{k-1} + theta) on a
/// Chebyshev grid with Gauss-Jacobi quadrature and barycentric interpolation.
/// Returns x_{picard_iters} at each requested time.
std::vector<std::vector<cplx>> oracle_picard(const LinearSystemProblem& problem,
                                             const OracleConfig& cfg,
                                             const std::vector<double>& t_points);

/// Successive Picard iterates' max grid distance, for contraction checks.
std::vector<double> oracle_picard_distances(const LinearSystemProblem& problem,
                                            const OracleConfig& cfg);

using BigUint = unsigned __int128;

struct JeilooValue {
    BigUint lhs;
    BigUint rhs;
};

/// Exact integer evaluation of both sides of
/// (l+1) sum_{k=0}^{n-1-l} (n-k-1)...(n-k-l) = n(n-1)...(n-l), 0 <= l < n <= 30.
JeilooValue oracle_identity_jeiloo(int n, int l);

std::string biguint_to_string(BigUint v);

}  // namespace lfrac
