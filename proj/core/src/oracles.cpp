#include "lfrac/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "lfrac/operators.hpp"
#include "lfrac/special.hpp"

namespace lfrac {

namespace {

struct KahanL {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double v) {
        const long double y = v - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Plain Horner without tail checks; oracle-internal evaluation.
cplx horner(const PowerSeries& s, double t) {
    cplx acc(0.0);
    for (int i = s.truncation_order(); i >= 0; --i) acc = acc * t + s[i];
    return acc;
}

std::vector<cplx> theta_values(const LinearSystemProblem& p, double t) {
    const int d = p.dim();
    std::vector<cplx> v(static_cast<size_t>(d), cplx(0.0));
    switch (p.source.kind()) {
        case SourceTerm::Kind::Zero: break;
        case SourceTerm::Kind::FracPower: {
            const auto& fp = p.source.frac_terms();
            for (int i = 0; i < d; ++i)
                v[static_cast<size_t>(i)] =
                    fp[static_cast<size_t>(i)].ell * std::pow(t, fp[static_cast<size_t>(i)].delta);
            break;
        }
        case SourceTerm::Kind::Series: {
            const auto& comps = p.source.series_components();
            for (int i = 0; i < d; ++i)
                v[static_cast<size_t>(i)] = horner(comps[static_cast<size_t>(i)], t);
            break;
        }
    }
    return v;
}

// Discretized Picard machinery shared by the two oracle entry points.
struct PicardGrid {
    std::vector<double> t;                   // Chebyshev-Gauss-Lobatto on [0, T]
    std::vector<double> bw;                  // barycentric weights
    std::vector<std::vector<double>> P;      // discrete integral operator
    std::vector<std::vector<cplx>> theta_g;  // theta at grid points

    // Barycentric cardinal values of every grid function at x.
    std::vector<double> basis(double x) const {
        const size_t n = t.size();
        std::vector<double> b(n, 0.0);
        for (size_t p = 0; p < n; ++p)
            if (x == t[p]) {
                b[p] = 1.0;
                return b;
            }
        double denom = 0.0;
        for (size_t p = 0; p < n; ++p) {
            b[p] = bw[p] / (x - t[p]);
            denom += b[p];
        }
        for (auto& v : b) v /= denom;
        return b;
    }
};

PicardGrid build_grid(const LinearSystemProblem& problem, const OracleConfig& cfg) {
    const int n = std::max(cfg.picard_grid, 8);
    const double T = problem.horizon_T;
    const double alpha = problem.order.value();

    PicardGrid g;
    g.t.resize(static_cast<size_t>(n));
    g.bw.resize(static_cast<size_t>(n));
    constexpr double pi = 3.14159265358979323846;
    for (int p = 0; p < n; ++p) {
        g.t[static_cast<size_t>(p)] = 0.5 * T * (1.0 - std::cos(pi * p / (n - 1)));
        double w = (p % 2 == 0) ? 1.0 : -1.0;
        if (p == 0 || p == n - 1) w *= 0.5;
        g.bw[static_cast<size_t>(p)] = w;
    }

    const QuadratureRule rule = jacobi_rule(problem.order, 40);
    const double scale = 1.0 / (gamma_fn(alpha) * gamma_fn(2.0 - alpha));
    g.P.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        const double ti = g.t[static_cast<size_t>(i)];
        if (ti == 0.0) continue;  // J maps everything to 0 at t = 0
        for (size_t j = 0; j < rule.nodes.size(); ++j) {
            const std::vector<double> b = g.basis(ti * rule.nodes[j]);
            const double w = ti * scale * rule.weights[j];
            for (int p = 0; p < n; ++p) g.P[static_cast<size_t>(i)][static_cast<size_t>(p)] += w * b[static_cast<size_t>(p)];
        }
    }

    g.theta_g.resize(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p)
        g.theta_g[static_cast<size_t>(p)] = theta_values(problem, g.t[static_cast<size_t>(p)]);
    return g;
}

// One Picard sweep: x <- x0 + P (Acal x + theta), componentwise over the grid.
std::vector<std::vector<cplx>> picard_step(const LinearSystemProblem& problem,
                                           const PicardGrid& g,
                                           const std::vector<std::vector<cplx>>& x) {
    const int n = static_cast<int>(g.t.size());
    const int d = problem.dim();
    std::vector<std::vector<cplx>> y(static_cast<size_t>(n));
    for (int p = 0; p < n; ++p) {
        y[static_cast<size_t>(p)] = problem.Acal.apply(x[static_cast<size_t>(p)]);
        for (int i = 0; i < d; ++i)
            y[static_cast<size_t>(p)][static_cast<size_t>(i)] +=
                g.theta_g[static_cast<size_t>(p)][static_cast<size_t>(i)];
    }
    std::vector<std::vector<cplx>> nx(static_cast<size_t>(n),
                                      std::vector<cplx>(static_cast<size_t>(d)));
    for (int p = 0; p < n; ++p)
        for (int i = 0; i < d; ++i) {
            cplx acc = problem.x0[static_cast<size_t>(i)];
            const auto& row = g.P[static_cast<size_t>(p)];
            for (int q = 0; q < n; ++q)
                acc += row[static_cast<size_t>(q)] * y[static_cast<size_t>(q)][static_cast<size_t>(i)];
            nx[static_cast<size_t>(p)][static_cast<size_t>(i)] = acc;
        }
    return nx;
}

}  // namespace

cplx oracle_ml(double alpha, cplx s, const OracleConfig& cfg) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::domain_error("oracle_ml: alpha must lie in (0, 1]");
    using cplxl = std::complex<long double>;
    const cplxl sl(s.real(), s.imag());
    KahanL re, im;
    for (int n = 0; n < cfg.precision_terms; ++n) {
        // Denominator rebuilt from scratch each term: independent of any
        // recurrence used by the production path.
        long double logden = n * std::lgamma(static_cast<long double>(2.0L - alpha));
        for (int j = 1; j <= n; ++j)
            logden += std::lgamma(static_cast<long double>(j + 1.0L)) -
                      std::lgamma(static_cast<long double>(j + 1.0L - alpha));
        cplxl term = std::pow(sl, n) * std::exp(-logden);
        re.add(term.real());
        im.add(term.imag());
    }
    return cplx(static_cast<double>(re.sum), static_cast<double>(im.sum));
}

std::vector<std::vector<cplx>> oracle_picard(const LinearSystemProblem& problem,
                                             const OracleConfig& cfg,
                                             const std::vector<double>& t_points) {
    problem.validate();
    const PicardGrid g = build_grid(problem, cfg);
    const int n = static_cast<int>(g.t.size());

    std::vector<std::vector<cplx>> x(static_cast<size_t>(n), problem.x0);
    for (int k = 0; k < cfg.picard_iters; ++k) x = picard_step(problem, g, x);

    std::vector<std::vector<cplx>> out;
    out.reserve(t_points.size());
    for (double tp : t_points) {
        if (tp < 0.0 || tp > problem.horizon_T + 1e-12)
            throw std::invalid_argument("oracle_picard: t outside [0, horizon_T]");
        const std::vector<double> b = g.basis(std::min(tp, problem.horizon_T));
        std::vector<cplx> v(static_cast<size_t>(problem.dim()), cplx(0.0));
        for (int p = 0; p < n; ++p)
            for (int i = 0; i < problem.dim(); ++i)
                v[static_cast<size_t>(i)] +=
                    b[static_cast<size_t>(p)] * x[static_cast<size_t>(p)][static_cast<size_t>(i)];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> oracle_picard_distances(const LinearSystemProblem& problem,
                                            const OracleConfig& cfg) {
    problem.validate();
    const PicardGrid g = build_grid(problem, cfg);
    const int n = static_cast<int>(g.t.size());
    std::vector<std::vector<cplx>> x(static_cast<size_t>(n), problem.x0);
    std::vector<double> dist;
    dist.reserve(static_cast<size_t>(cfg.picard_iters));
    for (int k = 0; k < cfg.picard_iters; ++k) {
        auto nx = picard_step(problem, g, x);
        double dmax = 0.0;
        for (int p = 0; p < n; ++p)
            for (int i = 0; i < problem.dim(); ++i)
                dmax = std::max(dmax, std::abs(nx[static_cast<size_t>(p)][static_cast<size_t>(i)] -
                                               x[static_cast<size_t>(p)][static_cast<size_t>(i)]));
        dist.push_back(dmax);
        x = std::move(nx);
    }
    return dist;
}

JeilooValue oracle_identity_jeiloo(int n, int l) {
    if (!(0 <= l && l < n && n <= 30))
        throw std::invalid_argument("oracle_identity_jeiloo: need 0 <= l < n <= 30");
    BigUint lhs = 0;
    for (int k = 0; k <= n - 1 - l; ++k) {
        BigUint prod = 1;
        for (int i = 1; i <= l; ++i) prod *= static_cast<BigUint>(n - k - i);
        lhs += prod;
    }
    lhs *= static_cast<BigUint>(l + 1);
    BigUint rhs = 1;
    for (int i = 0; i <= l; ++i) rhs *= static_cast<BigUint>(n - i);
    return {lhs, rhs};
}

std::string biguint_to_string(BigUint v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace lfrac
