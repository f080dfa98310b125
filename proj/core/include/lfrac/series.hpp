#pragma once

#include <vector>

#include "lfrac/types.hpp"

namespace lfrac {

/// Truncated complex power series in t: coeffs()[n] is the coefficient of t^n.
/// Trailing zero coefficients are meaningful: they record that the expansion
/// is known (to be zero) up to the truncation order.
class PowerSeries {
public:
    PowerSeries() : coeffs_(1, cplx(0.0)) {}
    explicit PowerSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty())
            throw std::invalid_argument("PowerSeries: needs at least the constant coefficient");
    }

    static PowerSeries zero(int truncation_order) {
        if (truncation_order < 0)
            throw std::invalid_argument("PowerSeries::zero: negative truncation order");
        return PowerSeries(std::vector<cplx>(static_cast<size_t>(truncation_order) + 1, cplx(0.0)));
    }

    /// Monomial c * t^n padded with zeros up to max(truncation_order, n).
    static PowerSeries monomial(cplx c, int n, int truncation_order = -1) {
        int deg = truncation_order > n ? truncation_order : n;
        std::vector<cplx> v(static_cast<size_t>(deg) + 1, cplx(0.0));
        v[static_cast<size_t>(n)] = c;
        return PowerSeries(std::move(v));
    }

    int truncation_order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient of t^n; zero beyond the truncation order.
    cplx operator[](int n) const noexcept {
        return (n >= 0 && n < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<size_t>(n)]
                                                                : cplx(0.0);
    }

    /// Copy extended (or cut) to the given truncation order.
    PowerSeries truncated(int order) const {
        std::vector<cplx> v(static_cast<size_t>(order) + 1, cplx(0.0));
        for (int n = 0; n <= order && n <= truncation_order(); ++n)
            v[static_cast<size_t>(n)] = coeffs_[static_cast<size_t>(n)];
        return PowerSeries(std::move(v));
    }

private:
    std::vector<cplx> coeffs_;
};

/// Coefficientwise sum up to max(N_a, N_b); missing coefficients count as 0.
PowerSeries add(const PowerSeries& a, const PowerSeries& b);

/// Coefficientwise scalar multiple.
PowerSeries scale(const PowerSeries& a, cplx factor);

/// Convolution c_n = sum_{l<=n} a_l b_{n-l}, truncated at min(N_a, N_b):
/// coefficients beyond the shorter input's order are not trustworthy, so they
/// are not produced. Pad the inputs first when multiplying exact polynomials.
PowerSeries cauchy_product(const PowerSeries& a, const PowerSeries& b);

/// Factor table d_0..d_n with d_n = Gamma(n+2) Gamma(2-alpha) / Gamma(n+2-alpha),
/// the coefficient the L-fractional derivative applies to t^{n+1}. Built by the
/// multiplicative recurrence d_n = d_{n-1} (n+1)/(n+1-alpha), d_0 = 1; plain
/// gamma quotients overflow past n ~ 170 while the ratio stays moderate.
std::vector<double> ld_factor_table(FracOrder order, int n_max);

/// Termwise L-fractional derivative of a truncated series:
/// result_n = x_{n+1} * d_n for n = 0 .. N-1 (degree drops by one; a constant
/// maps to the zero series). Exact for analytic functions.
PowerSeries ld_termwise(const PowerSeries& x, FracOrder order);

/// Termwise L-fractional integral: result_{n+1} = x_n / d_n (degree grows by
/// one, constant term 0). Exact inverse of ld_termwise up to truncation.
PowerSeries lj_termwise(const PowerSeries& x, FracOrder order);

struct EvalResult {
    cplx value;
    double err_est;  // magnitude of the last retained term (heuristic proxy)
};

/// Horner evaluation of the truncated series at t >= 0. At t = 0 returns
/// coeffs[0] exactly. Throws NotConverged when each of the final stall_window
/// terms exceeds rel_tol*(1+|value|), i.e. the truncation order is too small
/// for this t.
EvalResult eval(const PowerSeries& x, double t, const Tolerance& tol);

}  // namespace lfrac
