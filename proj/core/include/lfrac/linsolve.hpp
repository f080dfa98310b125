#pragma once

#include <optional>
#include <vector>

#include "lfrac/matrix.hpp"
#include "lfrac/series.hpp"
#include "lfrac/types.hpp"

namespace lfrac {

/// One fractional-power source component: ell * t^delta with delta > 0.
struct FracPowerTerm {
    cplx ell;
    double delta;
};

/// Source term of the complete linear system: zero, one fractional power per
/// component, or a vector-valued power series.
class SourceTerm {
public:
    enum class Kind { Zero, FracPower, Series };

    static SourceTerm zero() { return SourceTerm(Kind::Zero); }

    static SourceTerm frac_power(std::vector<FracPowerTerm> terms) {
        for (const auto& tm : terms)
            if (!(tm.delta > 0.0))
                throw std::invalid_argument("SourceTerm: fractional powers require delta > 0");
        SourceTerm s(Kind::FracPower);
        s.frac_ = std::move(terms);
        return s;
    }

    static SourceTerm series(std::vector<PowerSeries> components) {
        SourceTerm s(Kind::Series);
        s.series_ = std::move(components);
        return s;
    }

    Kind kind() const noexcept { return kind_; }
    const std::vector<FracPowerTerm>& frac_terms() const { return frac_; }
    const std::vector<PowerSeries>& series_components() const { return series_; }

    /// Component count carried by the source itself; 0 means "any dimension".
    int dim_hint() const {
        switch (kind_) {
            case Kind::FracPower: return static_cast<int>(frac_.size());
            case Kind::Series: return static_cast<int>(series_.size());
            default: return 0;
        }
    }

private:
    explicit SourceTerm(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<FracPowerTerm> frac_;
    std::vector<PowerSeries> series_;
};

/// The complete linear L-fractional system D^alpha x = Acal x + theta(t), x(0) = x0.
struct LinearSystemProblem {
    FracOrder order;
    ComplexMatrix Acal;
    SourceTerm source;
    std::vector<cplx> x0;
    double horizon_T = 1.0;

    int dim() const { return Acal.dim(); }
    void validate() const {
        if (static_cast<int>(x0.size()) != Acal.dim())
            throw std::invalid_argument("LinearSystemProblem: |x0| must equal dim(Acal)");
        const int sd = source.dim_hint();
        if (sd != 0 && sd != Acal.dim())
            throw std::invalid_argument("LinearSystemProblem: source component count mismatch");
        if (!(horizon_T > 0.0))
            throw std::invalid_argument("LinearSystemProblem: horizon_T must be > 0");
    }
};

/// A fractional-power tail term coeff * t^power attached to a solution component.
struct TailTerm {
    cplx coeff;
    double power;
};

/// Solution as integer-power series per component plus (for fractional-power
/// sources) separate frac-power tails; the two parts are never merged so the
/// closed form stays exact for non-integer delta.
struct SeriesSolution {
    std::vector<PowerSeries> components;
    std::vector<std::vector<TailTerm>> tails;  // empty or one list per component

    struct Value {
        std::vector<cplx> x;
        double err_est;
    };
    Value eval(double t, const Tolerance& tol) const;
};

/// x(t) = ML_alpha(Acal t) x0 as truncated series with x_n = c[n] Acal^n x0.
SeriesSolution solve_homogeneous(const LinearSystemProblem& problem, int n_terms,
                                 const Tolerance& tol = {});

/// Closed form for the fractional-power source: homogeneous part plus
/// sum_j Acal^j nu_j(t), nu_j built from iterated-integral gamma products.
SeriesSolution solve_fracpower(const LinearSystemProblem& problem, int n_terms,
                               const Tolerance& tol = {});

/// Closed form for a power-series source: coefficient of t^n is
/// sum_{k<n} Acal^k g(n,k) theta_{n-k-1} plus the homogeneous part.
SeriesSolution solve_series_source(const LinearSystemProblem& problem, int n_terms,
                                   const Tolerance& tol = {});

/// Dispatch on the source kind with adaptive truncation (doubling from 32 up
/// to tol.max_terms until the coefficient tail at horizon_T is below rel_tol).
SeriesSolution solve_linear_system(const LinearSystemProblem& problem, const Tolerance& tol = {});

/// Max absolute coefficient of D^alpha(sol) - Acal sol - theta over retained
/// orders; frac-power tails are checked against the closed-form derivative of
/// t^beta and grouped by power.
double residual(const LinearSystemProblem& problem, const SeriesSolution& sol);

}  // namespace lfrac
