#include "lfrac/operators.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "lfrac/special.hpp"
#include "rng.hpp"

namespace lfrac {

QuadratureRule gauss_jacobi01(double a, double b, int n_nodes) {
    if (n_nodes < 1) throw std::domain_error("gauss_jacobi01: n_nodes must be >= 1");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::domain_error("gauss_jacobi01: exponents must be > -1");

    // Monic Jacobi recurrence coefficients on [-1, 1] (Gautschi's r_jacobi).
    const double apb = a + b;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
    J(0, 0) = (b - a) / (apb + 2.0);
    for (int k = 1; k < n_nodes; ++k) {
        const double kk = k;
        J(k, k) = (b * b - a * a) / ((2.0 * kk + apb) * (2.0 * kk + apb + 2.0));
        double bk;
        if (k == 1)
            bk = 4.0 * (a + 1.0) * (b + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
        else
            bk = 4.0 * kk * (kk + a) * (kk + b) * (kk + apb) /
                 ((2.0 * kk + apb) * (2.0 * kk + apb) * (2.0 * kk + apb + 1.0) *
                  (2.0 * kk + apb - 1.0));
        const double off = std::sqrt(bk);
        J(k, k - 1) = off;
        J(k - 1, k) = off;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_jacobi01: tridiagonal eigensolve failed");

    // Total mass on [0,1]: int u^b (1-u)^a du = B(b+1, a+1).
    const double mu0 = beta_fn(b + 1.0, a + 1.0);
    QuadratureRule rule;
    rule.exp_a = a;
    rule.exp_b = b;
    rule.nodes.resize(static_cast<size_t>(n_nodes));
    rule.weights.resize(static_cast<size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) {
        rule.nodes[static_cast<size_t>(i)] = 0.5 * (es.eigenvalues()(i) + 1.0);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[static_cast<size_t>(i)] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule jacobi_rule(FracOrder order, int n_nodes, double fold_delta) {
    const double alpha = order.value();
    if (!(1.0 - alpha + fold_delta > -1.0))
        throw std::domain_error("jacobi_rule: fold_delta must keep the weight integrable");
    return gauss_jacobi01(alpha - 1.0, 1.0 - alpha + fold_delta, n_nodes);
}

QuadratureRule ld_rule(FracOrder order, int n_nodes) {
    const double alpha = order.value();
    if (alpha >= 1.0)
        throw std::domain_error("ld_rule: kernel (1-w)^{-alpha} is not integrable at alpha = 1");
    return gauss_jacobi01(-alpha, 0.0, n_nodes);
}

cplx lj_apply(const Func1D& y, FracOrder order, double t, const QuadratureRule& rule) {
    if (t < 0.0) throw std::invalid_argument("lj_apply: t must be >= 0");
    if (t == 0.0) return cplx(0.0);
    const double alpha = order.value();
    const double fold = rule.exp_b - (1.0 - alpha);  // singularity absorbed by the weight
    cplx acc(0.0);
    if (fold == 0.0) {
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * y(t * rule.nodes[i]);
    } else {
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * y(t * rule.nodes[i]) * std::pow(rule.nodes[i], -fold);
    }
    return acc * (t / (gamma_fn(alpha) * gamma_fn(2.0 - alpha)));
}

cplx ld_apply(const Func1D& xprime, FracOrder order, double t, const QuadratureRule& rule) {
    if (t < 0.0) throw std::invalid_argument("ld_apply: t must be >= 0");
    const double alpha = order.value();
    if (t == 0.0) return xprime(0.0);
    if (alpha >= 1.0) return xprime(t);
    cplx acc(0.0);
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * xprime(t * rule.nodes[i]);
    return acc * (1.0 - alpha);
}

PowerTerm lj_iterated_power(FracOrder order, int m, double delta) {
    const double alpha = order.value();
    if (m < 1) throw std::domain_error("lj_iterated_power: m must be >= 1");
    if (!(delta > alpha - 2.0))
        throw std::domain_error("lj_iterated_power: requires delta > alpha - 2");
    const double lg2a = std::lgamma(2.0 - alpha);
    double coeff = 1.0;
    for (int i = 2; i <= m + 1; ++i)
        coeff *= std::exp(std::lgamma(i - alpha + delta) - std::lgamma(i + delta) - lg2a);
    return {coeff, m + delta};
}

double lj_norm_bound(FracOrder order, int m, double T) {
    if (m < 1) throw std::domain_error("lj_norm_bound: m must be >= 1");
    if (!(T > 0.0)) throw std::domain_error("lj_norm_bound: T must be > 0");
    return lj_iterated_power(order, m, 0.0).coefficient * std::pow(T, m);
}

McEstimate mc_lj_oracle(const Func1D& y, FracOrder order, double t, const McConfig& cfg) {
    if (cfg.depth < 1) throw std::invalid_argument("mc_lj_oracle: depth must be >= 1");
    if (cfg.samples < 1000)
        throw std::invalid_argument("mc_lj_oracle: need >= 1000 samples for a reported estimate");
    if (t < 0.0) throw std::invalid_argument("mc_lj_oracle: t must be >= 0");

    const double alpha = order.value();
    const int m = cfg.depth;
    constexpr long long kChunk = 1 << 16;

    long double sum_re = 0.0L, sum_im = 0.0L, sum_sq = 0.0L;
    long long done = 0;
    for (std::uint64_t chunk = 0; done < cfg.samples; ++chunk) {
        detail::SplitMix64 rng(detail::stream_seed(cfg.seed, chunk));
        const long long todo = std::min(kChunk, cfg.samples - done);
        long double c_re = 0.0L, c_im = 0.0L, c_sq = 0.0L;
        for (long long s = 0; s < todo; ++s) {
            double prod = 1.0;
            double weight = 1.0;
            for (int i = 1; i <= m; ++i) {
                const double u = rng.beta(2.0 - alpha, alpha);
                prod *= u;
                if (i >= 2) weight *= std::pow(u, i - 1);
            }
            const cplx g = weight * y(t * prod);
            c_re += g.real();
            c_im += g.imag();
            c_sq += std::norm(g);
        }
        sum_re += c_re;
        sum_im += c_im;
        sum_sq += c_sq;
        done += todo;
    }

    const long double n = static_cast<long double>(cfg.samples);
    const long double mean_re = sum_re / n;
    const long double mean_im = sum_im / n;
    // Var(Re) + Var(Im) of the sampled values.
    long double var = sum_sq / n - (mean_re * mean_re + mean_im * mean_im);
    if (var < 0.0L) var = 0.0L;
    const double tm = std::pow(t, m);
    return {cplx(static_cast<double>(mean_re), static_cast<double>(mean_im)) * tm,
            tm * static_cast<double>(std::sqrt(var / n))};
}

CaputoToL caputo_to_l(const ComplexMatrix& A, VecFunc1D b, FracOrder order) {
    const double g = gamma_fn(2.0 - order.value());
    const double am1 = order.value() - 1.0;
    ComplexMatrix Acal = A;
    Acal *= cplx(g);
    VecFunc1D theta = [g, am1, fn = std::move(b)](double t) {
        std::vector<cplx> v = fn(t);
        const double factor = g * std::pow(t, am1);
        for (auto& x : v) x *= factor;
        return v;
    };
    return {Acal, std::move(theta)};
}

}  // namespace lfrac
