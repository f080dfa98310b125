#include "lfrac/sequential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

#include "lfrac/linsolve.hpp"
#include "lfrac/special.hpp"

namespace lfrac {

namespace {

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
    // Monic: z^m + a_{m-1} z^{m-1} + ... + a_0.
    cplx v(1.0);
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        v = v * z + coeffs[static_cast<size_t>(i)];
    return v;
}

// j-th derivative of the monic polynomial at z.
cplx poly_deriv_eval(const std::vector<cplx>& coeffs, int j, cplx z) {
    const int m = static_cast<int>(coeffs.size());
    auto coeff_at = [&](int k) { return k == m ? cplx(1.0) : coeffs[static_cast<size_t>(k)]; };
    cplx v(0.0);
    cplx zp(1.0);
    for (int k = j; k <= m; ++k) {
        double fall = 1.0;
        for (int i = 0; i < j; ++i) fall *= static_cast<double>(k - i);
        v += fall * coeff_at(k) * zp;
        zp *= z;
    }
    return v;
}

// A root of multiplicity mu is a simple root of p^{(mu-1)}: Newton there has
// no cancellation floor, unlike iterating on p itself.
cplx polish_multiple_root(const std::vector<cplx>& coeffs, cplx z0, int mu, double trust) {
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        const cplx g = poly_deriv_eval(coeffs, mu - 1, z);
        const cplx gp = poly_deriv_eval(coeffs, mu, z);
        if (gp == cplx(0.0)) break;
        const cplx step = g / gp;
        z -= step;
        if (std::abs(z - z0) > trust) return z0;  // wandered off; keep the mean
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

// Operator sum L[atom] = D^{m o alpha}(atom) + sum_q a_q D^{q o alpha}(atom)
// as a truncated series.
PowerSeries apply_operator(FracOrder order, const std::vector<cplx>& coeffs,
                           const BasisAtom& atom, int n_terms) {
    const int m = static_cast<int>(coeffs.size());
    PowerSeries cur = atom_series(order, atom, n_terms + m);
    PowerSeries acc = scale(cur, coeffs[0]);
    for (int q = 1; q <= m; ++q) {
        cur = ld_termwise(cur, order);
        acc = add(acc, q < m ? scale(cur, coeffs[static_cast<size_t>(q)]) : cur);
    }
    return acc.truncated(n_terms);
}

}  // namespace

cplx SymbolicSolution::eval(double t, const Tolerance& tol) const {
    const FracOrder order(alpha);
    cplx v(0.0);
    for (const auto& term : terms)
        v += term.coeff * std::pow(cplx(t), term.k) *
             ml_deriv_eval(order, term.k, term.lambda * t, tol);
    return v;
}

PowerSeries SymbolicSolution::to_series(int n_terms) const {
    const FracOrder order(alpha);
    PowerSeries acc = PowerSeries::zero(n_terms);
    for (const auto& term : terms)
        acc = add(acc, scale(atom_series(order, {term.lambda, term.k}, n_terms), term.coeff));
    return acc;
}

RootSet char_roots(const std::vector<cplx>& coeffs, double tol_cluster) {
    const int m = static_cast<int>(coeffs.size());
    if (m < 1) throw std::invalid_argument("char_roots: need m >= 1");
    if (!(tol_cluster >= 0.0)) throw std::invalid_argument("char_roots: bad tol_cluster");

    // Durand-Kerner from a non-real ray scaled to the Cauchy root bound.
    double bound = 0.0;
    for (const auto& a : coeffs) bound = std::max(bound, std::abs(a));
    bound = std::max(1.0, 1.0 + bound);
    std::vector<cplx> z(static_cast<size_t>(m));
    const cplx ray(0.4, 0.9);
    cplx p = ray;
    for (int i = 0; i < m; ++i) {
        z[static_cast<size_t>(i)] = bound * p;
        p *= ray;
    }
    std::vector<double> last_step(static_cast<size_t>(m), bound);
    bool converged = false;
    for (int sweep = 0; sweep < 1000 && !converged; ++sweep) {
        double max_step = 0.0;
        for (int i = 0; i < m; ++i) {
            cplx denom(1.0);
            for (int j = 0; j < m; ++j)
                if (j != i) denom *= z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
            if (denom == cplx(0.0)) {
                // Collided iterates: nudge and keep sweeping.
                z[static_cast<size_t>(i)] += cplx(1e-8, 1e-8) * bound;
                last_step[static_cast<size_t>(i)] = bound;
                max_step = 1.0;
                continue;
            }
            const cplx step = poly_eval(coeffs, z[static_cast<size_t>(i)]) / denom;
            z[static_cast<size_t>(i)] -= step;
            last_step[static_cast<size_t>(i)] = std::abs(step);
            max_step = std::max(max_step, std::abs(step));
        }
        converged = max_step < 1e-14 * std::max(1.0, bound);
    }
    if (!converged) {
        // Repeated roots stagnate at step ~ sqrt(eps): accept them when the
        // polynomial residual at the iterates is already negligible.
        for (int i = 0; i < m; ++i)
            if (std::abs(poly_eval(coeffs, z[static_cast<size_t>(i)])) >
                1e-8 * std::pow(bound, m))
                throw NotConverged("char_roots: Durand-Kerner failed in 1000 sweeps");
    }

    // Cluster within tol relative to the largest root magnitude (floor 1e-10).
    // Iterates around a root of multiplicity mu stagnate at radius
    // ~(eps*scale)^{1/mu}, so the merge radius grows with the cluster size;
    // the clustered center is then polished on p^{(mu-1)}, where the root is
    // simple again.
    double zmax = 0.0;
    for (const auto& r : z) zmax = std::max(zmax, std::abs(r));
    const double thr = std::max(tol_cluster * zmax, 1e-10);
    const double big = std::max(1.0, zmax);
    double poly_scale = std::pow(big, m);
    for (int k = 0; k < m; ++k) poly_scale += std::abs(coeffs[static_cast<size_t>(k)]) * std::pow(big, k);
    const double eps_scale = 64.0 * 1.1e-16 * poly_scale;
    auto merge_radius = [&](int count) {
        return std::max(thr, std::pow(eps_scale, 1.0 / (count + 1.0)));
    };

    std::vector<int> idx(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return lex_less(z[static_cast<size_t>(a)], z[static_cast<size_t>(b)]); });
    RootSet out;
    std::vector<bool> used(static_cast<size_t>(m), false);
    for (int a = 0; a < m; ++a) {
        const int i = idx[static_cast<size_t>(a)];
        if (used[static_cast<size_t>(i)]) continue;
        cplx sum = z[static_cast<size_t>(i)];
        int count = 1;
        used[static_cast<size_t>(i)] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int b = a + 1; b < m; ++b) {
                const int j = idx[static_cast<size_t>(b)];
                if (used[static_cast<size_t>(j)]) continue;
                if (std::abs(z[static_cast<size_t>(j)] - sum / static_cast<double>(count)) <=
                    merge_radius(count)) {
                    sum += z[static_cast<size_t>(j)];
                    ++count;
                    used[static_cast<size_t>(j)] = true;
                    grew = true;
                }
            }
        }
        cplx center = sum / static_cast<double>(count);
        if (count > 1)
            center = polish_multiple_root(coeffs, center, count, 4.0 * merge_radius(count - 1));
        out.roots.push_back({center, count});
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const RootSet::Root& a, const RootSet::Root& b) { return lex_less(a.lambda, b.lambda); });
    return out;
}

std::vector<BasisAtom> basis_atoms(const RootSet& roots) {
    std::vector<BasisAtom> atoms;
    for (const auto& r : roots.roots)
        for (int k = 0; k < r.multiplicity; ++k) atoms.push_back({r.lambda, k});
    return atoms;
}

PowerSeries atom_series(FracOrder order, const BasisAtom& atom, int n_terms) {
    if (atom.k < 0) throw std::invalid_argument("atom_series: k must be >= 0");
    const int k = atom.k;
    std::vector<cplx> v(static_cast<size_t>(n_terms) + 1, cplx(0.0));
    if (k <= n_terms) {
        // term_n = fall(n,k) c_n lambda^{n-k}; the falling factorial stays an
        // exact integer in double and c_n comes from the cached table, so the
        // only drift left is the incremental lambda power.
        const MLCoefficients mlc = ml_coeffs(order, n_terms);
        double fall = 1.0;
        for (int i = 2; i <= k; ++i) fall *= i;
        cplx lpow(1.0);
        for (int n = k; n <= n_terms; ++n) {
            v[static_cast<size_t>(n)] = fall * mlc.c[static_cast<size_t>(n)] * lpow;
            lpow *= atom.lambda;
            fall = fall * (n + 1.0) / (n + 1.0 - k);  // exact: integer-valued throughout
        }
    }
    return PowerSeries(std::move(v));
}

PowerSeries atom_ld(FracOrder order, const BasisAtom& atom, int q, int n_terms) {
    if (q < 0) throw std::invalid_argument("atom_ld: q must be >= 0");
    PowerSeries s = atom_series(order, atom, n_terms + q);
    for (int i = 0; i < q; ++i) s = ld_termwise(s, order);
    return s.truncated(n_terms);
}

ComplexMatrix lwronskian0(FracOrder order, const std::vector<BasisAtom>& atoms) {
    const int m = static_cast<int>(atoms.size());
    if (m < 1) throw std::invalid_argument("lwronskian0: need at least one atom");
    ComplexMatrix W(m);
    for (int i = 0; i < m; ++i)
        for (int q = 0; q < m; ++q)
            W(q, i) = atom_ld(order, atoms[static_cast<size_t>(i)], q, 0)[0];
    const double norm = std::max(W.max_norm(), 1e-300);
    if (std::abs(determinant(W)) < 1e-12 * std::pow(norm, m))
        throw SingularWronskian("lwronskian0: atoms are numerically dependent");
    return W;
}

PowerSeries forcing_series(FracOrder order, const std::vector<ForcingAtom>& forcing, int n_terms) {
    PowerSeries acc = PowerSeries::zero(n_terms);
    for (const auto& f : forcing)
        acc = add(acc, scale(atom_series(order, {f.mu, f.j}, n_terms), f.beta));
    return acc;
}

SymbolicSolution solve_sequential(const SequentialProblem& problem) {
    problem.validate();
    const int m = problem.order_m();
    const RootSet roots = char_roots(problem.coeffs);
    const std::vector<BasisAtom> homog = basis_atoms(roots);

    double zmax = 0.0;
    for (const auto& r : roots.roots) zmax = std::max(zmax, std::abs(r.lambda));
    const double root_thr = std::max(1e-8 * zmax, 1e-10);

    SymbolicSolution sol;
    sol.alpha = problem.order.value();

    // Particular part: one undetermined-coefficient block per distinct mu.
    std::vector<SymbolicSolution::Term> particular;
    std::map<std::pair<double, double>, std::vector<ForcingAtom>> by_mu;
    for (const auto& f : problem.forcing)
        by_mu[{f.mu.real(), f.mu.imag()}].push_back(f);

    for (const auto& [mu_key, group] : by_mu) {
        const cplx mu(mu_key.first, mu_key.second);
        int J = 0;
        for (const auto& f : group) J = std::max(J, f.j);

        int k_lo = 0, k_hi = J;
        cplx mu_eff = mu;
        for (const auto& r : roots.roots)
            if (std::abs(mu - r.lambda) <= root_thr) {
                // Resonant forcing: shift the ansatz past the kernel atoms
                // (k < multiplicity contributes nothing through the operator).
                mu_eff = r.lambda;
                k_lo = r.multiplicity;
                k_hi = J + r.multiplicity;
                break;
            }
        std::vector<ForcingAtom> snapped = group;
        for (auto& f : snapped) f.mu = mu_eff;

        const int n_match = J + m + 8;
        const int n_unknown = k_hi - k_lo + 1;
        Eigen::MatrixXcd A(n_match + 1, n_unknown);
        for (int k = k_lo; k <= k_hi; ++k) {
            const PowerSeries col = apply_operator(problem.order, problem.coeffs,
                                                   {mu_eff, k}, n_match);
            for (int n = 0; n <= n_match; ++n) A(n, k - k_lo) = col[n];
        }
        Eigen::VectorXcd b(n_match + 1);
        const PowerSeries target = forcing_series(problem.order, snapped, n_match);
        for (int n = 0; n <= n_match; ++n) b(n) = target[n];

        const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
        const double resid = (A * c - b).cwiseAbs().maxCoeff();
        const double scale_b = std::max(1.0, b.cwiseAbs().maxCoeff());
        if (resid > 1e-8 * scale_b)
            throw AnsatzMismatch("solve_sequential: series matching left residual " +
                                 std::to_string(resid) + "; forcing outside the atom family");
        for (int k = k_lo; k <= k_hi; ++k)
            particular.push_back({c(k - k_lo), mu_eff, k});
    }

    // Homogeneous coefficients against the initial data.
    const ComplexMatrix W = lwronskian0(problem.order, homog);
    std::vector<cplx> rhs = problem.init;
    for (int q = 0; q < m; ++q)
        for (const auto& pt : particular)
            rhs[static_cast<size_t>(q)] -=
                pt.coeff * atom_ld(problem.order, {pt.lambda, pt.k}, q, 0)[0];
    const std::vector<cplx> hc = solve_linear(W, rhs);

    for (int i = 0; i < m; ++i)
        sol.terms.push_back({hc[static_cast<size_t>(i)], homog[static_cast<size_t>(i)].lambda,
                             homog[static_cast<size_t>(i)].k});
    for (const auto& pt : particular) sol.terms.push_back(pt);
    return sol;
}

SymbolicSolution order2_closed_form(FracOrder order, cplx a1, cplx a0, cplx x0, cplx x01) {
    const RootSet roots = char_roots({a0, a1});
    SymbolicSolution sol;
    sol.alpha = order.value();
    if (roots.roots.size() == 2) {
        const cplx l1 = roots.roots[0].lambda;
        const cplx l2 = roots.roots[1].lambda;
        sol.terms.push_back({(x01 - l2 * x0) / (l1 - l2), l1, 0});
        sol.terms.push_back({(l1 * x0 - x01) / (l1 - l2), l2, 0});
    } else {
        const cplx l = roots.roots[0].lambda;
        sol.terms.push_back({x0, l, 0});
        sol.terms.push_back({x01 - l * x0, l, 1});
    }
    return sol;
}

PowerSeries solve_first_order_chain(const SequentialProblem& problem, int n_terms) {
    problem.validate();
    const int m = problem.order_m();
    const RootSet roots = char_roots(problem.coeffs);

    // Expanded factor list (D^alpha - lam_1)^{n_1} ... applied left to right.
    std::vector<cplx> factors;
    for (const auto& r : roots.roots)
        for (int i = 0; i < r.multiplicity; ++i) factors.push_back(r.lambda);

    Tolerance chain_tol;
    chain_tol.max_terms = std::max(chain_tol.max_terms, n_terms + 1);

    // Basis member p: zero forcing, unit integration constant at factor p.
    // Particular: the forcing pushed through every factor with zero constants.
    // (D^alpha - lam) u = g with u(0) = u0 is the scalar series-source solve.
    auto first_order = [&](cplx lam, const PowerSeries& g, cplx u0) {
        ComplexMatrix A(1);
        A(0, 0) = lam;
        LinearSystemProblem p{problem.order, A, SourceTerm::series({g.truncated(n_terms)}),
                              {u0}, 1.0};
        return solve_series_source(p, n_terms, chain_tol).components[0];
    };

    std::vector<PowerSeries> solutions;  // m basis chains + 1 particular chain
    for (int p = 0; p <= m; ++p) {
        const bool is_particular = (p == m);
        PowerSeries g = is_particular ? forcing_series(problem.order, problem.forcing, n_terms)
                                      : PowerSeries::zero(n_terms);
        if (is_particular && problem.forcing.empty()) {
            solutions.push_back(PowerSeries::zero(n_terms));
            continue;
        }
        // Factor i consumes g and produces the next right-hand side; the
        // operator is the composition o_1 o ... o o_m, so solving runs o_1 first.
        for (int i = 0; i < m; ++i) {
            const cplx u0 = (!is_particular && i == p) ? cplx(1.0) : cplx(0.0);
            g = first_order(factors[static_cast<size_t>(i)], g, u0);
        }
        solutions.push_back(g);
    }

    // Match the initial data: D^{q o alpha} s_p (0) is coefficient 0 of the
    // q-fold termwise derivative.
    ComplexMatrix W(m);
    std::vector<cplx> rhs = problem.init;
    for (int p = 0; p <= m; ++p) {
        PowerSeries cur = solutions[static_cast<size_t>(p)];
        for (int q = 0; q < m; ++q) {
            if (p < m)
                W(q, p) = cur[0];
            else
                rhs[static_cast<size_t>(q)] -= cur[0];
            cur = ld_termwise(cur, problem.order);
        }
    }
    const std::vector<cplx> c = solve_linear(W, rhs);
    PowerSeries acc = solutions[static_cast<size_t>(m)];
    for (int p = 0; p < m; ++p)
        acc = add(acc, scale(solutions[static_cast<size_t>(p)], c[static_cast<size_t>(p)]));
    return acc.truncated(n_terms);
}

double sequential_residual(const SequentialProblem& problem, const SymbolicSolution& sol,
                           int n_orders) {
    problem.validate();
    const int m = problem.order_m();
    const int n_terms = n_orders + m;
    PowerSeries cur = sol.to_series(n_terms);
    PowerSeries acc = scale(cur, problem.coeffs[0]);
    for (int q = 1; q <= m; ++q) {
        cur = ld_termwise(cur, problem.order);
        acc = add(acc, q < m ? scale(cur, problem.coeffs[static_cast<size_t>(q)]) : cur);
    }
    const PowerSeries f = forcing_series(problem.order, problem.forcing, n_orders);
    double worst = 0.0;
    for (int n = 0; n <= n_orders; ++n) worst = std::max(worst, std::abs(acc[n] - f[n]));
    return worst;
}

}  // namespace lfrac
