#pragma once

#include <vector>

#include "lfrac/matrix.hpp"
#include "lfrac/series.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// Solution-space atom t^k ML_alpha^{(k)}(lambda t); k runs below the root's
/// multiplicity in the characteristic polynomial.
struct BasisAtom {
    cplx lambda;
    int k = 0;
};

/// Forcing term beta * t^j ML_alpha^{(j)}(mu t).
struct ForcingAtom {
    cplx beta;
    cplx mu;
    int j = 0;
};

struct RootSet {
    struct Root {
        cplx lambda;
        int multiplicity = 1;
    };
    std::vector<Root> roots;  // sorted by (re, im); multiplicities sum to m
};

/// Constant-coefficient sequential problem
/// D^{m o alpha} x + a_{m-1} D^{(m-1) o alpha} x + ... + a_0 x = forcing,
/// with init[q] = D^{q o alpha} x(0) for q = 0..m-1.
struct SequentialProblem {
    FracOrder order;
    std::vector<cplx> coeffs;  // a_0 .. a_{m-1}
    std::vector<cplx> init;    // x_0, x_{0,1}, ..., x_{0,m-1}
    std::vector<ForcingAtom> forcing;

    int order_m() const { return static_cast<int>(coeffs.size()); }
    void validate() const {
        if (coeffs.empty()) throw std::invalid_argument("SequentialProblem: m must be >= 1");
        if (init.size() != coeffs.size())
            throw std::invalid_argument("SequentialProblem: need exactly m initial values");
        for (const auto& f : forcing)
            if (f.j < 0) throw std::invalid_argument("SequentialProblem: forcing j must be >= 0");
    }
};

/// Solution as a linear combination of atoms coeff * t^k ML_alpha^{(k)}(lambda t).
struct SymbolicSolution {
    struct Term {
        cplx coeff;
        cplx lambda;
        int k = 0;
    };
    double alpha = 1.0;
    std::vector<Term> terms;

    cplx eval(double t, const Tolerance& tol) const;
    PowerSeries to_series(int n_terms) const;
};

/// All m roots of lambda^m + a_{m-1} lambda^{m-1} + ... + a_0 by Durand-Kerner
/// simultaneous iteration. Roots within tol_cluster (relative to the largest
/// root magnitude, floor 1e-10) are merged at their mean with summed
/// multiplicity. Throws NotConverged after 1000 sweeps.
RootSet char_roots(const std::vector<cplx>& coeffs, double tol_cluster = 1e-8);

/// Atoms {(lambda_l, k) : 0 <= k < n_l} for every root; m atoms in total.
std::vector<BasisAtom> basis_atoms(const RootSet& roots);

/// Truncated series of t^k ML_alpha^{(k)}(lambda t) itself.
PowerSeries atom_series(FracOrder order, const BasisAtom& atom, int n_terms);

/// Truncated series of D^{q o alpha}(t^k ML_alpha^{(k)}(lambda t)), i.e. the
/// atom's series pushed through the termwise derivative q times.
PowerSeries atom_ld(FracOrder order, const BasisAtom& atom, int q, int n_terms);

/// m x m matrix W[q][i] = D^{q o alpha}(atom_i)(0); row 0 is plain evaluation.
/// Throws SingularWronskian when |det W| < 1e-12 * ||W||^m (duplicated atoms).
ComplexMatrix lwronskian0(FracOrder order, const std::vector<BasisAtom>& atoms);

/// Characteristic roots, undetermined-coefficient particular part, then
/// homogeneous coefficients from lwronskian0 against the initial data.
SymbolicSolution solve_sequential(const SequentialProblem& problem);

/// Closed form for m = 2: distinct roots combine ML_alpha(lambda_{1,2} t);
/// a repeated root uses {ML_alpha(lambda t), t ML_alpha'(lambda t)}.
SymbolicSolution order2_closed_form(FracOrder order, cplx a1, cplx a0, cplx x0, cplx x01);

/// Alternative solver for cross-validation: factor the operator into
/// first-order factors (D^alpha - lambda_l) and solve the resulting chain of
/// scalar problems through the series-source linear solver. Returns the
/// solution as a plain truncated series.
PowerSeries solve_first_order_chain(const SequentialProblem& problem, int n_terms);

/// Truncated series of the forcing sum.
PowerSeries forcing_series(FracOrder order, const std::vector<ForcingAtom>& forcing, int n_terms);

/// Max absolute coefficient of L[x] - forcing over the first n_orders orders,
/// where L is the problem's operator applied termwise to the solution series.
double sequential_residual(const SequentialProblem& problem, const SymbolicSolution& sol,
                           int n_orders);

}  // namespace lfrac
