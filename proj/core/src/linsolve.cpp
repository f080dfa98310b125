#include "lfrac/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "lfrac/special.hpp"

namespace lfrac {

namespace {

double sup_norm(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

// Ratio-estimated tail of a term-magnitude sequence at the horizon, measured
// on windowed envelopes so sparse or oscillating coefficient patterns cannot
// fake a small final term. Throws NotConverged when the estimate exceeds
// rel_tol * (1 + partial sum).
void check_tail(const std::vector<double>& mags, double partial_sum, const Tolerance& tol,
                const char* who) {
    const size_t w = std::min<size_t>(static_cast<size_t>(tol.stall_window), mags.size() / 2);
    if (w == 0) return;
    auto env = [&](size_t lo, size_t hi) {  // [lo, hi)
        double m = 0.0;
        for (size_t i = lo; i < hi; ++i) m = std::max(m, mags[i]);
        return m;
    };
    const double last_env = env(mags.size() - w, mags.size());
    const double prev_env = env(mags.size() - 2 * w, mags.size() - w);
    if (last_env == 0.0) return;  // terminated (polynomial) expansion
    double tail_est;
    if (std::isfinite(last_env) && prev_env > 0.0 && last_env < prev_env) {
        const double r = last_env / prev_env;
        tail_est = static_cast<double>(w) * last_env * r / (1.0 - r);
    } else {
        tail_est = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(partial_sum) || tail_est > tol.rel_tol * (1.0 + partial_sum))
        throw NotConverged(std::string(who) +
                           ": truncation tail at horizon_T above rel_tol; raise n_terms");
}

// Homogeneous coefficients x_n = c[n] Acal^n x0 for n = 0..n_terms, via the
// same ratio recurrence as the scalar ML coefficients.
std::vector<std::vector<cplx>> homogeneous_coeffs(const LinearSystemProblem& p, int n_terms) {
    const double alpha = p.order.value();
    std::vector<std::vector<cplx>> xs;
    xs.reserve(static_cast<size_t>(n_terms) + 1);
    xs.push_back(p.x0);
    double rho = 1.0;
    for (int n = 0; n < n_terms; ++n) {
        if (n >= 1) rho *= (n + 1.0 - alpha) / (n + 1.0);
        std::vector<cplx> next = p.Acal.apply(xs.back());
        for (auto& v : next) v *= rho;
        xs.push_back(std::move(next));
    }
    return xs;
}

SeriesSolution pack(const std::vector<std::vector<cplx>>& xs, int dim) {
    SeriesSolution sol;
    sol.components.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        std::vector<cplx> c(xs.size());
        for (size_t n = 0; n < xs.size(); ++n) c[n] = xs[n][static_cast<size_t>(i)];
        sol.components.emplace_back(std::move(c));
    }
    sol.tails.assign(static_cast<size_t>(dim), {});
    return sol;
}

void check_series_tail(const std::vector<std::vector<cplx>>& xs, double T, const Tolerance& tol,
                       const char* who) {
    std::vector<double> mags;
    mags.reserve(xs.size());
    double partial = 0.0;
    double tn = 1.0;
    for (const auto& x : xs) {
        const double m = sup_norm(x) * tn;
        mags.push_back(m);
        partial += m;
        tn *= T;
    }
    check_tail(mags, partial, tol, who);
}

// L-fractional derivative factor of t^beta: D(beta) = Gamma(2-alpha) Gamma(beta+1) / Gamma(beta+1-alpha).
double frac_power_ld_factor(double alpha, double beta) {
    return std::exp(std::lgamma(2.0 - alpha) + std::lgamma(beta + 1.0) -
                    std::lgamma(beta + 1.0 - alpha));
}

}  // namespace

SeriesSolution::Value SeriesSolution::eval(double t, const Tolerance& tol) const {
    Value out;
    out.err_est = 0.0;
    out.x.reserve(components.size());
    for (size_t i = 0; i < components.size(); ++i) {
        EvalResult r = lfrac::eval(components[i], t, tol);
        cplx v = r.value;
        if (i < tails.size())
            for (const auto& tt : tails[i]) v += tt.coeff * std::pow(t, tt.power);
        out.x.push_back(v);
        out.err_est = std::max(out.err_est, r.err_est);
    }
    return out;
}

SeriesSolution solve_homogeneous(const LinearSystemProblem& problem, int n_terms,
                                 const Tolerance& tol) {
    problem.validate();
    tol.validate();
    if (n_terms < 1) throw std::invalid_argument("solve_homogeneous: n_terms must be >= 1");
    if (problem.source.kind() != SourceTerm::Kind::Zero)
        throw std::invalid_argument("solve_homogeneous: source must be Zero");
    auto xs = homogeneous_coeffs(problem, n_terms);
    check_series_tail(xs, problem.horizon_T, tol, "solve_homogeneous");
    return pack(xs, problem.dim());
}

SeriesSolution solve_fracpower(const LinearSystemProblem& problem, int n_terms,
                               const Tolerance& tol) {
    problem.validate();
    tol.validate();
    if (n_terms < 1) throw std::invalid_argument("solve_fracpower: n_terms must be >= 1");
    if (problem.source.kind() != SourceTerm::Kind::FracPower)
        throw std::invalid_argument("solve_fracpower: source must be FracPower");
    const auto& fp = problem.source.frac_terms();
    const int d = problem.dim();
    const double alpha = problem.order.value();
    const double T = problem.horizon_T;
    const double lg2a = std::lgamma(2.0 - alpha);

    auto xs = homogeneous_coeffs(problem, n_terms);
    check_series_tail(xs, T, tol, "solve_fracpower");
    SeriesSolution sol = pack(xs, d);

    // nu_j component k: ell_k w_j(delta_k) t^{j+1+delta_k}, pushed through Acal^j.
    std::vector<double> w(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double delta = fp[static_cast<size_t>(k)].delta;
        w[static_cast<size_t>(k)] =
            std::exp(std::lgamma(2.0 - alpha + delta) - std::lgamma(2.0 + delta) - lg2a);
    }
    ComplexMatrix Apow = ComplexMatrix::identity(d);
    std::vector<double> tail_mags;
    double tail_partial = 0.0;
    for (int j = 0; j < n_terms; ++j) {
        if (j > 0) {
            Apow = Apow * problem.Acal;
            for (int k = 0; k < d; ++k) {
                const double delta = fp[static_cast<size_t>(k)].delta;
                w[static_cast<size_t>(k)] *=
                    std::exp(std::lgamma(j + 2.0 - alpha + delta) - std::lgamma(j + 2.0 + delta) -
                             lg2a);
            }
        }
        double level_mag = 0.0;
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                const cplx coeff =
                    Apow(i, k) * fp[static_cast<size_t>(k)].ell * w[static_cast<size_t>(k)];
                if (coeff == cplx(0.0)) continue;
                const double power = (j + 1.0) + fp[static_cast<size_t>(k)].delta;
                sol.tails[static_cast<size_t>(i)].push_back({coeff, power});
                level_mag = std::max(level_mag, std::abs(coeff) * std::pow(T, power));
            }
        tail_mags.push_back(level_mag);
        tail_partial += level_mag;
    }
    check_tail(tail_mags, tail_partial, tol, "solve_fracpower");
    return sol;
}

SeriesSolution solve_series_source(const LinearSystemProblem& problem, int n_terms,
                                   const Tolerance& tol) {
    problem.validate();
    tol.validate();
    if (n_terms < 1) throw std::invalid_argument("solve_series_source: n_terms must be >= 1");
    if (problem.source.kind() != SourceTerm::Kind::Series)
        throw std::invalid_argument("solve_series_source: source must be Series");
    const auto& theta = problem.source.series_components();
    const int d = problem.dim();
    const double alpha = problem.order.value();
    for (const auto& comp : theta)
        if (comp.truncation_order() < n_terms - 1)
            throw std::invalid_argument(
                "solve_series_source: source series must be truncated at >= n_terms - 1");

    auto xs = homogeneous_coeffs(problem, n_terms);

    // r(m) = Gamma(m+1-alpha) / (Gamma(2-alpha) Gamma(m+1)); only m >= 1 occurs.
    std::vector<double> r(static_cast<size_t>(n_terms) + 1, 0.0);
    if (n_terms >= 1) r[1] = 1.0;
    for (int m = 2; m <= n_terms; ++m)
        r[static_cast<size_t>(m)] = r[static_cast<size_t>(m - 1)] * (m - alpha) / m;

    auto theta_at = [&](int n) {
        std::vector<cplx> v(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = theta[static_cast<size_t>(i)][n];
        return v;
    };

    for (int n = 1; n <= n_terms; ++n) {
        // g(n,k) = prod_{j=n-k..n} Gamma(j-alpha+1) / (Gamma(2-alpha)^{k+1} prod Gamma(j+1)),
        // grown from g(n,0) = r(n) by g(n,k) = g(n,k-1) r(n-k). Horner in Acal:
        // part_n = g(n,0) theta_{n-1} + Acal (g(n,1) theta_{n-2} + Acal (...)).
        std::vector<double> g(static_cast<size_t>(n));
        g[0] = r[static_cast<size_t>(n)];
        for (int k = 1; k < n; ++k) g[static_cast<size_t>(k)] = g[static_cast<size_t>(k - 1)] * r[static_cast<size_t>(n - k)];
        std::vector<cplx> acc(static_cast<size_t>(d), cplx(0.0));
        for (int k = n - 1; k >= 0; --k) {
            acc = problem.Acal.apply(acc);
            const auto th = theta_at(n - 1 - k);
            for (int i = 0; i < d; ++i)
                acc[static_cast<size_t>(i)] += g[static_cast<size_t>(k)] * th[static_cast<size_t>(i)];
        }
        for (int i = 0; i < d; ++i) xs[static_cast<size_t>(n)][static_cast<size_t>(i)] += acc[static_cast<size_t>(i)];
    }
    check_series_tail(xs, problem.horizon_T, tol, "solve_series_source");
    return pack(xs, d);
}

SeriesSolution solve_linear_system(const LinearSystemProblem& problem, const Tolerance& tol) {
    problem.validate();
    tol.validate();
    auto attempt = [&](int n_terms) {
        switch (problem.source.kind()) {
            case SourceTerm::Kind::Zero: return solve_homogeneous(problem, n_terms, tol);
            case SourceTerm::Kind::FracPower: return solve_fracpower(problem, n_terms, tol);
            default: return solve_series_source(problem, n_terms, tol);
        }
    };
    // Doubling truncation: entire-function growth makes each retry cheap.
    int n = 32;
    for (;;) {
        const int n_eff = std::min(n, tol.max_terms);
        LinearSystemProblem padded = problem;
        if (problem.source.kind() == SourceTerm::Kind::Series) {
            std::vector<PowerSeries> comps;
            for (const auto& c : problem.source.series_components())
                comps.push_back(c.truncation_order() >= n_eff - 1 ? c : c.truncated(n_eff - 1));
            padded.source = SourceTerm::series(std::move(comps));
        }
        try {
            return attempt(n_eff);
        } catch (const NotConverged&) {
            if (n_eff >= tol.max_terms) throw;
            n *= 2;
        }
    }
}

double residual(const LinearSystemProblem& problem, const SeriesSolution& sol) {
    problem.validate();
    const int d = problem.dim();
    const double alpha = problem.order.value();
    if (static_cast<int>(sol.components.size()) != d)
        throw std::invalid_argument("residual: solution dimension mismatch");

    // Everything is grouped by the (possibly fractional) power of t it carries.
    auto key_of = [](double power) { return std::llround(power * 1e9); };
    double worst = 0.0;

    const int N = sol.components[0].truncation_order();
    std::vector<PowerSeries> ld_parts;
    for (int i = 0; i < d; ++i)
        ld_parts.push_back(ld_termwise(sol.components[static_cast<size_t>(i)], problem.order));

    for (int i = 0; i < d; ++i) {
        std::map<long long, cplx> acc;
        for (int n = 0; n <= N - 1; ++n) {
            cplx v = ld_parts[static_cast<size_t>(i)][n];
            for (int k = 0; k < d; ++k)
                v -= problem.Acal(i, k) * sol.components[static_cast<size_t>(k)][n];
            if (problem.source.kind() == SourceTerm::Kind::Series)
                v -= problem.source.series_components()[static_cast<size_t>(i)][n];
            acc[key_of(static_cast<double>(n))] += v;
        }
        if (!sol.tails.empty()) {
            for (const auto& tt : sol.tails[static_cast<size_t>(i)])
                acc[key_of(tt.power - 1.0)] += tt.coeff * frac_power_ld_factor(alpha, tt.power);
            for (int k = 0; k < d; ++k) {
                const cplx aik = problem.Acal(i, k);
                if (aik == cplx(0.0)) continue;
                for (const auto& tt : sol.tails[static_cast<size_t>(k)])
                    acc[key_of(tt.power)] -= aik * tt.coeff;
            }
        }
        if (problem.source.kind() == SourceTerm::Kind::FracPower) {
            const auto& fp = problem.source.frac_terms()[static_cast<size_t>(i)];
            acc[key_of(fp.delta)] -= fp.ell;
        }
        for (const auto& [key, v] : acc) worst = std::max(worst, std::abs(v));
    }
    return worst;
}

}  // namespace lfrac
