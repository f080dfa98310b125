#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lfrac/matrix.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Scalar function on [0, T].
using Func1D = std::function<cplx(double)>;
/// Vector-valued function on [0, T].
using VecFunc1D = std::function<std::vector<cplx>(double)>;

/// Gauss-Jacobi rule on (0,1) for the weight u^b (1-u)^a, exact for
/// polynomial integrands of degree <= 2*n_nodes - 1.
struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing, strictly inside (0,1)
    std::vector<double> weights;  // positive; sum = B(b+1, a+1)
    double exp_a;                 // exponent of (1-u)
    double exp_b;                 // exponent of u
};

/// Generic constructor (Golub-Welsch on the monic Jacobi recurrence), a, b > -1.
QuadratureRule gauss_jacobi01(double a, double b, int n_nodes);

/// Rule matching the L-fractional integral kernel after s = t*u:
/// weight u^{1-alpha} (1-u)^{alpha-1}, total mass B(2-alpha, alpha).
/// alpha = 1 degenerates to Gauss-Legendre on [0,1]. A known power
/// singularity y(s) ~ s^fold_delta of the integrand can be folded into the
/// weight (exponent becomes 1-alpha+fold_delta); lj_apply reads the fold back
/// off the rule's exponents, so power-function integrands become exact.
QuadratureRule jacobi_rule(FracOrder order, int n_nodes, double fold_delta = 0.0);

/// Rule for the derivative-side kernel: weight (1-w)^{-alpha}, mass 1/(1-alpha).
/// Undefined at alpha = 1 (ld_apply short-circuits there).
QuadratureRule ld_rule(FracOrder order, int n_nodes);

/// Quadrature image of the L-fractional integral:
/// (t / (Gamma(alpha) Gamma(2-alpha))) * sum_i w_i y(t u_i); exactly 0 at t = 0.
cplx lj_apply(const Func1D& y, FracOrder order, double t, const QuadratureRule& rule);

/// L-fractional derivative via the expectation form E[x'(t W)], W ~ Beta(1, 1-alpha):
/// (1-alpha) * sum_i w_i x'(t u_i) on the ld_rule; returns x'(0) at t = 0 and
/// x'(t) at alpha = 1. The caller supplies the ordinary derivative x'.
cplx ld_apply(const Func1D& xprime, FracOrder order, double t, const QuadratureRule& rule);

struct PowerTerm {
    double coefficient;
    double power;
};

/// Closed form of the m-fold iterated integral of a power:
/// J^{m o alpha} t^delta = coefficient * t^{m+delta}, for delta > alpha - 2.
PowerTerm lj_iterated_power(FracOrder order, int m, double delta);

/// Operator-norm bound of the m-fold iterated integral on C[0,T]:
/// prod_{i=2..m+1} Gamma(i-alpha) / (Gamma(2-alpha)^m prod Gamma(i)) * T^m.
double lj_norm_bound(FracOrder order, int m, double T);

struct McConfig {
    long long samples = 1'000'000;  // >= 1000 for any reported estimate
    std::uint64_t seed = 0;
    int depth = 1;  // m >= 1
};

struct McEstimate {
    cplx estimate;
    double std_error;
};

/// Monte-Carlo estimate of J^{m o alpha} y(t) via the nested expectation
/// t^m E[U_m^{m-1} ... U_2 y(t U_1...U_m)] with i.i.d. Beta(2-alpha, alpha)
/// draws (two Marsaglia-Tsang gamma variates per draw). Deterministic for a
/// given seed; sampling is chunked into fixed-size streams so the result does
/// not depend on how chunks are scheduled.
McEstimate mc_lj_oracle(const Func1D& y, FracOrder order, double t, const McConfig& cfg);

struct CaputoToL {
    ComplexMatrix Acal;
    VecFunc1D theta;
};

/// Transform the Caputo problem D_C^alpha x = t^{1-alpha} A x + b into the
/// L-fractional problem D_L^alpha x = Acal x + theta with Acal = Gamma(2-alpha) A
/// and theta(t) = Gamma(2-alpha) t^{alpha-1} b(t). Continuity of theta at 0 is
/// the caller's contract (b(t)/t^{1-alpha} must extend continuously).
CaputoToL caputo_to_l(const ComplexMatrix& A, VecFunc1D b, FracOrder order);

}  // namespace lfrac
