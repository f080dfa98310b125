#include "lfrac/verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lfrac/operators.hpp"
#include "lfrac/sequential.hpp"
#include "lfrac/series.hpp"
#include "lfrac/special.hpp"
#include "rng.hpp"

namespace lfrac {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

cplx rand_cplx(detail::SplitMix64& rng, double scale) {
    return {scale * (2.0 * rng.u01() - 1.0), scale * (2.0 * rng.u01() - 1.0)};
}

PowerSeries rand_poly(detail::SplitMix64& rng, int degree, double scale) {
    std::vector<cplx> c(static_cast<size_t>(degree) + 1);
    for (auto& v : c) v = rand_cplx(rng, scale);
    return PowerSeries(std::move(c));
}

double coeff_distance(const PowerSeries& a, const PowerSeries& b, int n_max) {
    double d = 0.0;
    for (int n = 0; n <= n_max; ++n) d = std::max(d, std::abs(a[n] - b[n]));
    return d;
}

std::vector<SuiteCheck> suite_fundamental(std::uint64_t seed) {
    std::vector<SuiteCheck> out;
    const double alphas[] = {0.3, 0.5, 0.7, 0.9, 1.0};
    detail::SplitMix64 rng(detail::stream_seed(seed, 101));
    for (double a : alphas) {
        const FracOrder order(a);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const PowerSeries x = rand_poly(rng, 12, 1.0);
            const PowerSeries fwd = ld_termwise(lj_termwise(x, order), order);
            worst = std::max(worst, coeff_distance(fwd, x, x.truncation_order()));
            PowerSeries back = lj_termwise(ld_termwise(x, order), order);
            std::vector<cplx> shifted = x.coeffs();
            shifted[0] = cplx(0.0);
            worst = std::max(worst, coeff_distance(back, PowerSeries(shifted), x.truncation_order()));
        }
        out.push_back({"fundamental-theorem alpha=" + fmt(a), worst <= 1e-12,
                       "max coeff deviation " + fmt(worst)});
    }
    return out;
}

std::vector<SuiteCheck> suite_quadrature(std::uint64_t) {
    std::vector<SuiteCheck> out;
    const double alphas[] = {0.25, 0.5, 0.9};
    const double deltas[] = {0.0, 0.5, 1.0, 2.0, 3.7};
    const double ts[] = {0.1, 1.0, 2.0};
    for (double a : alphas) {
        const FracOrder order(a);
        double worst = 0.0;
        for (double delta : deltas)
            for (double t : ts) {
                const QuadratureRule rule = jacobi_rule(order, 40, delta);
                const Func1D y = [delta](double s) { return cplx(std::pow(s, delta)); };
                const cplx got = lj_apply(y, order, t, rule);
                const PowerTerm ref = lj_iterated_power(order, 1, delta);
                const double want = ref.coefficient * std::pow(t, ref.power);
                worst = std::max(worst, std::abs(got - cplx(want)) / std::abs(want));
            }
        out.push_back({"quadrature-vs-closed-form alpha=" + fmt(a), worst <= 1e-12,
                       "max rel error " + fmt(worst)});
    }
    return out;
}

std::vector<SuiteCheck> suite_mc(std::uint64_t seed) {
    std::vector<SuiteCheck> out;
    const double deltas[] = {0.5, 1.0, 2.0};
    const double alpha = 0.6;
    const FracOrder order(alpha);
    for (int m = 1; m <= 3; ++m) {
        bool ok = true;
        std::string detail;
        for (double delta : deltas) {
            McConfig cfg;
            cfg.samples = 200000;
            cfg.depth = m;
            cfg.seed = detail::stream_seed(seed, static_cast<std::uint64_t>(m * 31) +
                                                     static_cast<std::uint64_t>(delta * 977));
            const Func1D y = [delta](double s) { return cplx(std::pow(s, delta)); };
            const McEstimate est = mc_lj_oracle(y, order, 1.0, cfg);
            const PowerTerm ref = lj_iterated_power(order, m, delta);
            const double err = std::abs(est.estimate - cplx(ref.coefficient));
            if (err > 3.0 * est.std_error) {
                ok = false;
                detail += " delta=" + fmt(delta) + " err=" + fmt(err) +
                          " (3se=" + fmt(3.0 * est.std_error) + ")";
            }
        }
        out.push_back({"mc-oracle m=" + fmt(m), ok, ok ? "all within 3 std errors" : detail});
    }
    return out;
}

std::vector<SuiteCheck> suite_solver_equivalence(std::uint64_t seed) {
    std::vector<SuiteCheck> out;
    detail::SplitMix64 rng(detail::stream_seed(seed, 404));
    double worst = 0.0;
    bool ok = true;
    for (int rep = 0; rep < 8; ++rep) {
        const int m = 1 + static_cast<int>(rng.next() % 3);
        const double alpha = 0.4 + 0.6 * rng.u01();
        SequentialProblem p{FracOrder(alpha), {}, {}, {}};
        for (int i = 0; i < m; ++i) p.coeffs.push_back(rand_cplx(rng, 1.5));
        for (int i = 0; i < m; ++i) p.init.push_back(rand_cplx(rng, 1.0));
        const int n_terms = 192;
        const PowerSeries a = solve_sequential(p).to_series(n_terms);
        const PowerSeries b = solve_first_order_chain(p, n_terms);
        const double d = coeff_distance(a, b, n_terms);
        worst = std::max(worst, d);
        if (d > 1e-9) ok = false;
    }
    out.push_back({"solver-equivalence random problems", ok, "max coeff distance " + fmt(worst)});
    return out;
}

std::vector<SuiteCheck> suite_examples(std::uint64_t) {
    std::vector<SuiteCheck> out;
    const FracOrder order(0.5);

    auto find_term = [](const SymbolicSolution& s, cplx lambda, int k) {
        for (const auto& t : s.terms)
            if (t.k == k && std::abs(t.lambda - lambda) < 1e-6) return t.coeff;
        return cplx(1e9);  // sentinel: atom missing entirely
    };

    {
        SequentialProblem p{order, {cplx(1.0), cplx(-2.0)}, {cplx(3.0), cplx(-1.0)},
                            {{cplx(3.0), cplx(2.0), 0}}};
        const SymbolicSolution s = solve_sequential(p);
        const double err = std::max({std::abs(find_term(s, cplx(2.0), 0) - cplx(3.0)),
                                     std::abs(find_term(s, cplx(1.0), 0) - cplx(0.0)),
                                     std::abs(find_term(s, cplx(1.0), 1) - cplx(-7.0))});
        out.push_back({"worked-example-1", err <= 1e-10, "max coeff error " + fmt(err)});
    }
    {
        SequentialProblem p{order, {cplx(1.0), cplx(-2.0)}, {cplx(3.0), cplx(-1.0)},
                            {{cplx(3.0), cplx(1.0), 0}}};
        const SymbolicSolution s = solve_sequential(p);
        const double err = std::max({std::abs(find_term(s, cplx(1.0), 2) - cplx(1.5)),
                                     std::abs(find_term(s, cplx(1.0), 0) - cplx(3.0)),
                                     std::abs(find_term(s, cplx(1.0), 1) - cplx(-4.0))});
        out.push_back({"worked-example-2", err <= 1e-10, "max coeff error " + fmt(err)});
    }
    {
        const cplx i(0.0, 1.0);
        SequentialProblem p{order, {cplx(-1.0), -2.0 * i}, {cplx(3.0), cplx(-1.0)},
                            {{cplx(3.0), cplx(1.0), 0}}};
        const SymbolicSolution s = solve_sequential(p);
        const double err =
            std::max({std::abs(find_term(s, cplx(1.0), 0) - 1.5 * i),
                      std::abs(find_term(s, i, 0) - (cplx(3.0) - 1.5 * i)),
                      std::abs(find_term(s, i, 1) - (cplx(-2.5) - 4.5 * i))});
        out.push_back({"worked-example-3", err <= 1e-10, "max coeff error " + fmt(err)});
    }
    return out;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    return {"fundamental-theorem", "quadrature-vs-closed-form", "mc-oracle",
            "solver-equivalence", "paper-examples"};
}

std::vector<SuiteCheck> run_verify_suite(const std::string& suite, std::uint64_t seed) {
    if (suite == "fundamental-theorem") return suite_fundamental(seed);
    if (suite == "quadrature-vs-closed-form") return suite_quadrature(seed);
    if (suite == "mc-oracle") return suite_mc(seed);
    if (suite == "solver-equivalence") return suite_solver_equivalence(seed);
    if (suite == "paper-examples") return suite_examples(seed);
    throw std::invalid_argument("run_verify_suite: unknown suite '" + suite + "'");
}

}  // namespace lfrac
