#include "lfrac/analytic2.hpp"

#include <algorithm>
#include <cmath>

namespace lfrac {

PowerSeries solve_analytic2(const Analytic2Problem& problem, int n_terms) {
    if (n_terms < 2) throw std::invalid_argument("solve_analytic2: n_terms must be >= 2");
    const int need = n_terms - 2;
    if (problem.p.truncation_order() < need || problem.q.truncation_order() < need ||
        problem.c.truncation_order() < need)
        throw std::invalid_argument(
            "solve_analytic2: p, q, c must be truncated to at least n_terms - 2");

    const std::vector<double> d = ld_factor_table(problem.order, n_terms);
    std::vector<cplx> x(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    x[0] = problem.x0;
    x[1] = problem.x01;
    for (int n = 0; n + 2 <= n_terms; ++n) {
        cplx s = problem.c[n];
        for (int l = 0; l <= n; ++l) {
            s -= problem.p[n - l] * x[static_cast<size_t>(l) + 1] * d[static_cast<size_t>(l)];
            s -= problem.q[n - l] * x[static_cast<size_t>(l)];
        }
        x[static_cast<size_t>(n) + 2] =
            s / (d[static_cast<size_t>(n)] * d[static_cast<size_t>(n) + 1]);
    }
    return PowerSeries(std::move(x));
}

BasisPair airy_basis(FracOrder order, cplx a, int n_terms) {
    const std::vector<double> d = ld_factor_table(order, n_terms + 3);
    std::vector<cplx> y(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    std::vector<cplx> z(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    cplx cy(1.0), cz(1.0);
    for (int n = 0; 3 * n <= n_terms; ++n) {
        y[static_cast<size_t>(3 * n)] = cy;
        if (3 * n + 1 <= n_terms) z[static_cast<size_t>(3 * n) + 1] = cz;
        cy *= -a / (d[static_cast<size_t>(3 * n) + 1] * d[static_cast<size_t>(3 * n) + 2]);
        cz *= -a / (d[static_cast<size_t>(3 * n) + 2] * d[static_cast<size_t>(3 * n) + 3]);
    }
    return {PowerSeries(std::move(y)), PowerSeries(std::move(z))};
}

BasisPair hermite_basis(FracOrder order, cplx a, int n_terms) {
    const std::vector<double> d = ld_factor_table(order, n_terms + 2);
    std::vector<cplx> y(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    std::vector<cplx> z(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    // Odd family: step factor 2 d_{n-1} - a at n = 2i-1; even family: the t^0
    // coefficient of t * D^alpha x vanishes, so the first step carries -a alone.
    cplx cy(1.0), cz(1.0);
    for (int n = 0; 2 * n + 1 <= n_terms || 2 * n <= n_terms; ++n) {
        if (2 * n <= n_terms) z[static_cast<size_t>(2 * n)] = cz;
        if (2 * n + 1 <= n_terms) y[static_cast<size_t>(2 * n) + 1] = cy;
        const int no = 2 * n + 1;  // odd-chain recurrence index
        const int ne = 2 * n;      // even-chain recurrence index
        cy *= (2.0 * d[static_cast<size_t>(no) - 1] - a) /
              (d[static_cast<size_t>(no)] * d[static_cast<size_t>(no) + 1]);
        const cplx even_factor = (ne == 0) ? -a : (2.0 * d[static_cast<size_t>(ne) - 1] - a);
        cz *= even_factor / (d[static_cast<size_t>(ne)] * d[static_cast<size_t>(ne) + 1]);
    }
    return {PowerSeries(std::move(y)), PowerSeries(std::move(z))};
}

cplx hermite_eigenvalue(FracOrder order, int i) {
    if (i < 1) throw std::invalid_argument("hermite_eigenvalue: i must be >= 1");
    if (i == 1) return cplx(0.0);
    const std::vector<double> d = ld_factor_table(order, i - 2);
    return cplx(2.0 * d[static_cast<size_t>(i) - 2]);
}

double analytic2_residual(const Analytic2Problem& problem, const PowerSeries& x) {
    const int N = x.truncation_order();
    if (N < 2) return 0.0;
    const int n_out = N - 2;
    const PowerSeries dx = ld_termwise(x, problem.order);
    const PowerSeries ddx = ld_termwise(dx, problem.order);
    const PowerSeries p_dx = cauchy_product(problem.p.truncated(n_out), dx.truncated(n_out));
    const PowerSeries q_x = cauchy_product(problem.q.truncated(n_out), x.truncated(n_out));
    double worst = 0.0;
    for (int n = 0; n <= n_out; ++n)
        worst = std::max(worst, std::abs(ddx[n] + p_dx[n] + q_x[n] - problem.c[n]));
    return worst;
}

}  // namespace lfrac
