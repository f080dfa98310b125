#include "lfrac/series.hpp"

#include <algorithm>
#include <cmath>

namespace lfrac {

PowerSeries add(const PowerSeries& a, const PowerSeries& b) {
    const int n = std::max(a.truncation_order(), b.truncation_order());
    std::vector<cplx> v(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) v[static_cast<size_t>(i)] = a[i] + b[i];
    return PowerSeries(std::move(v));
}

PowerSeries scale(const PowerSeries& a, cplx factor) {
    std::vector<cplx> v = a.coeffs();
    for (auto& c : v) c *= factor;
    return PowerSeries(std::move(v));
}

PowerSeries cauchy_product(const PowerSeries& a, const PowerSeries& b) {
    const int n = std::min(a.truncation_order(), b.truncation_order());
    std::vector<cplx> v(static_cast<size_t>(n) + 1, cplx(0.0));
    for (int i = 0; i <= n; ++i) {
        cplx s(0.0);
        for (int l = 0; l <= i; ++l) s += a[l] * b[i - l];
        v[static_cast<size_t>(i)] = s;
    }
    return PowerSeries(std::move(v));
}

std::vector<double> ld_factor_table(FracOrder order, int n_max) {
    // Accumulate in extended precision so the table carries ~1 ulp error even
    // for long tables, instead of the n*eps drift of a double recurrence.
    const long double alpha = order.value();
    std::vector<double> d(static_cast<size_t>(std::max(n_max, 0)) + 1);
    long double acc = 1.0L;
    d[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        acc *= (n + 1.0L) / (n + 1.0L - alpha);
        d[static_cast<size_t>(n)] = static_cast<double>(acc);
    }
    return d;
}

PowerSeries ld_termwise(const PowerSeries& x, FracOrder order) {
    const int n_in = x.truncation_order();
    if (n_in == 0) return PowerSeries::zero(0);
    const std::vector<double> d = ld_factor_table(order, n_in - 1);
    std::vector<cplx> v(static_cast<size_t>(n_in));
    for (int n = 0; n < n_in; ++n)
        v[static_cast<size_t>(n)] = x[n + 1] * d[static_cast<size_t>(n)];
    return PowerSeries(std::move(v));
}

PowerSeries lj_termwise(const PowerSeries& x, FracOrder order) {
    const int n_in = x.truncation_order();
    const std::vector<double> d = ld_factor_table(order, n_in);
    std::vector<cplx> v(static_cast<size_t>(n_in) + 2, cplx(0.0));
    for (int n = 0; n <= n_in; ++n)
        v[static_cast<size_t>(n) + 1] = x[n] / d[static_cast<size_t>(n)];
    return PowerSeries(std::move(v));
}

EvalResult eval(const PowerSeries& x, double t, const Tolerance& tol) {
    tol.validate();
    if (t < 0.0) throw std::invalid_argument("eval: t must be >= 0");
    const int n = x.truncation_order();
    if (t == 0.0) return {x[0], 0.0};

    cplx acc(0.0);
    for (int i = n; i >= 0; --i) acc = acc * t + x[i];

    // Truncation check on the tail of the retained expansion.
    const int window = std::min(tol.stall_window, n + 1);
    const double thresh = std::max(tol.abs_tol, tol.rel_tol * (1.0 + std::abs(acc)));
    double tn = std::pow(t, n - window + 1);
    double last_term = 0.0;
    bool any_small = false;
    for (int i = n - window + 1; i <= n; ++i) {
        last_term = std::abs(x[i]) * tn;
        if (last_term <= thresh) any_small = true;
        tn *= t;
    }
    if (!any_small)
        throw NotConverged("eval: last " + std::to_string(window) +
                           " terms all exceed tolerance at t=" + std::to_string(t) +
                           "; truncation order too small");
    return {acc, last_term};
}

}  // namespace lfrac
