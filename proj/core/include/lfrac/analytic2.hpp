#pragma once

#include "lfrac/series.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Order-two sequential equation with analytic coefficients:
/// D^{2 o alpha} x + p(t) D^alpha x + q(t) x = c(t), x(0) = x0, D^alpha x(0) = x01.
/// The input series must be truncated to at least the requested solution order.
struct Analytic2Problem {
    FracOrder order;
    PowerSeries p, q, c;
    cplx x0, x01;
    double horizon_T = 1.0;
};

/// Power-series solution by the coefficient recurrence
/// x_{n+2} = (c_n - sum_l p_{n-l} x_{l+1} d_l - sum_l q_{n-l} x_l) / (d_n d_{n+1}),
/// d_n the termwise-derivative factors. Convergence on [0, horizon_T) is
/// guaranteed; evaluation at t >= horizon_T is the caller's risk (eval flags it).
PowerSeries solve_analytic2(const Analytic2Problem& problem, int n_terms);

struct BasisPair {
    PowerSeries y, z;
};

/// Closed-form basis of D^{2 o alpha} x + a t x = 0: y carries only powers
/// t^{3n} (from (1,0) data), z only t^{3n+1} (from (0,1) data).
BasisPair airy_basis(FracOrder order, cplx a, int n_terms);

/// Closed-form basis of D^{2 o alpha} x - 2t D^alpha x + a x = 0: y is the odd
/// family (from (0,1) data), z the even family (from (1,0) data).
BasisPair hermite_basis(FracOrder order, cplx a, int n_terms);

/// Eigenvalue making one Hermite family terminate as a polynomial of degree
/// i - 1: a = 2 Gamma(i) Gamma(2-alpha) / Gamma(i-alpha) for i >= 2, and a = 0
/// for i = 1 (the even family degenerates to a constant).
cplx hermite_eigenvalue(FracOrder order, int i);

/// Max |coefficient| of D^{2 o alpha} x + p D^alpha x + q x - c over the
/// retained orders of the given candidate solution.
double analytic2_residual(const Analytic2Problem& problem, const PowerSeries& x);

}  // namespace lfrac
