#include "lfrac/special.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace lfrac {

double gamma_fn(double z) {
    if (z <= 0.0 && z == std::floor(z))
        throw PoleError("gamma_fn: pole at z = " + std::to_string(z));
    return std::tgamma(z);
}

double beta_fn(double z1, double z2) {
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw std::domain_error("beta_fn: arguments must be positive");
    // lgamma keeps intermediate magnitudes bounded for large arguments.
    return std::exp(std::lgamma(z1) + std::lgamma(z2) - std::lgamma(z1 + z2));
}

namespace {

// Coefficient tables are cached per alpha and extended on demand; evaluators
// grab an immutable snapshot so concurrent readers never block each other.
class MlCoeffCache {
public:
    std::shared_ptr<const std::vector<double>> get(double alpha, int n_max) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = table_[alpha];
        if (!slot || static_cast<int>(slot->size()) <= n_max) {
            auto grown = std::make_shared<std::vector<double>>(slot ? *slot
                                                                    : std::vector<double>{1.0});
            extend(*grown, alpha, n_max);
            slot = std::move(grown);
        }
        return slot;
    }

private:
    static void extend(std::vector<double>& c, double alpha, int n_max) {
        // rho_n = c[n+1]/c[n] = Gamma(n+2-alpha) / (Gamma(2-alpha) Gamma(n+2)),
        // advanced by rho_n = rho_{n-1} (n+1-alpha)/(n+1), rho_0 = 1. Extended
        // precision keeps the stored table at ~1 ulp; rebuild the frontier
        // state, then roll rho and c forward together.
        const long double a = alpha;
        int n = static_cast<int>(c.size()) - 1;
        long double rho = 1.0L;
        for (int k = 1; k <= n; ++k) rho *= (k + 1.0L - a) / (k + 1.0L);
        long double cl = c.back();
        while (static_cast<int>(c.size()) <= n_max) {
            cl *= rho;
            c.push_back(static_cast<double>(cl));
            n = static_cast<int>(c.size()) - 1;
            rho *= (n + 1.0L - a) / (n + 1.0L);
        }
    }

    std::mutex mu_;
    std::map<double, std::shared_ptr<const std::vector<double>>> table_;
};

MlCoeffCache& cache() {
    static MlCoeffCache c;
    return c;
}

double coeff_ratio(double alpha, int n) {
    // rho_n computed directly; used when summation outruns a fetched table.
    double rho = 1.0;
    for (int k = 1; k <= n; ++k) rho *= (k + 1.0 - alpha) / (k + 1.0);
    return rho;
}

}  // namespace

MLCoefficients ml_coeffs(FracOrder order, int n_max) {
    if (n_max < 0) throw std::invalid_argument("ml_coeffs: n_max must be >= 0");
    auto snap = cache().get(order.value(), n_max);
    return MLCoefficients{order.value(),
                          std::vector<double>(snap->begin(), snap->begin() + n_max + 1)};
}

SumResult ml_eval_report(FracOrder order, cplx s, const Tolerance& tol) {
    tol.validate();
    const double alpha = order.value();
    if (s == cplx(0.0)) return {cplx(1.0), 1, 0.0};  // s^0 = 1, all later terms vanish
    cplx term(1.0);
    cplx sum(0.0);
    double rho = 1.0;
    int stall = 0;
    for (int n = 0; n < tol.max_terms; ++n) {
        sum += term;
        const double mag = std::abs(term);
        const double thresh = std::max(tol.abs_tol, tol.rel_tol * (1.0 + std::abs(sum)));
        stall = (mag <= thresh) ? stall + 1 : 0;
        if (stall >= tol.stall_window) return {sum, n + 1, mag};
        if (n >= 1) rho *= (n + 1.0 - alpha) / (n + 1.0);
        term *= s * rho;
    }
    throw NotConverged("ml_eval: budget of " + std::to_string(tol.max_terms) +
                       " terms exhausted at |s| = " + std::to_string(std::abs(s)));
}

cplx ml_eval(FracOrder order, cplx s, const Tolerance& tol) {
    return ml_eval_report(order, s, tol).value;
}

SumResult ml_deriv_eval_report(FracOrder order, int k, cplx s, const Tolerance& tol) {
    tol.validate();
    if (k < 0) throw std::invalid_argument("ml_deriv_eval: k must be >= 0");
    const double alpha = order.value();
    auto snap = cache().get(alpha, k);
    // First term: n = k, falling factorial k! times c[k].
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    if (s == cplx(0.0)) return {cplx(kfact * (*snap)[static_cast<size_t>(k)]), 1, 0.0};
    cplx term = kfact * (*snap)[static_cast<size_t>(k)];
    cplx sum(0.0);
    double rho = coeff_ratio(alpha, k >= 1 ? k - 1 : 0);  // rho_{n-1} entering the loop at n = k
    int stall = 0;
    for (int n = k; n < k + tol.max_terms; ++n) {
        sum += term;
        const double mag = std::abs(term);
        const double thresh = std::max(tol.abs_tol, tol.rel_tol * (1.0 + std::abs(sum)));
        stall = (mag <= thresh) ? stall + 1 : 0;
        if (stall >= tol.stall_window) return {sum, n - k + 1, mag};
        if (n >= 1) rho *= (n + 1.0 - alpha) / (n + 1.0);
        // fall(n+1,k)/fall(n,k) = (n+1)/(n+1-k)
        term *= s * rho * ((n + 1.0) / (n + 1.0 - k));
    }
    throw NotConverged("ml_deriv_eval: budget exhausted");
}

cplx ml_deriv_eval(FracOrder order, int k, cplx s, const Tolerance& tol) {
    return ml_deriv_eval_report(order, k, s, tol).value;
}

ComplexMatrix ml_matrix_eval(FracOrder order, const ComplexMatrix& M, const Tolerance& tol) {
    tol.validate();
    const double alpha = order.value();
    const int d = M.dim();
    ComplexMatrix term = ComplexMatrix::identity(d);
    ComplexMatrix sum(d);
    double rho = 1.0;
    int stall = 0;
    for (int n = 0; n < tol.max_terms; ++n) {
        sum += term;
        const double mag = term.max_norm();
        const double thresh = std::max(tol.abs_tol, tol.rel_tol * (1.0 + sum.max_norm()));
        stall = (mag <= thresh) ? stall + 1 : 0;
        if (stall >= tol.stall_window) return sum;
        if (n >= 1) rho *= (n + 1.0 - alpha) / (n + 1.0);
        term = term * M;
        term *= rho;
    }
    throw NotConverged("ml_matrix_eval: budget exhausted");
}

ComplexMatrix ml_matrix_eval_diag(FracOrder order, const ComplexMatrix& M, const Tolerance& tol) {
    const int d = M.dim();
    Eigen::MatrixXcd A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = M(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw std::domain_error("ml_matrix_eval_diag: eigendecomposition failed");
    const Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
    const double smin = svd.singularValues()(d - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin >= 1e6)
        throw std::domain_error("ml_matrix_eval_diag: eigenvector condition number >= 1e6; "
                                "matrix too close to defective");
    Eigen::VectorXcd f(d);
    for (int i = 0; i < d; ++i) f(i) = ml_eval(order, es.eigenvalues()(i), tol);
    const Eigen::MatrixXcd R = V * f.asDiagonal() * V.inverse();
    ComplexMatrix out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = R(i, j);
    return out;
}

SumResult classical_ml_eval_report(double alpha, double beta, cplx s, const Tolerance& tol) {
    tol.validate();
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::domain_error("classical_ml_eval: alpha and beta must be positive");
    cplx sum(0.0);
    cplx spow(1.0);
    int stall = 0;
    for (int n = 0; n < tol.max_terms; ++n) {
        const cplx term = spow * std::exp(-std::lgamma(n * alpha + beta));
        sum += term;
        const double mag = std::abs(term);
        const double thresh = std::max(tol.abs_tol, tol.rel_tol * (1.0 + std::abs(sum)));
        stall = (mag <= thresh) ? stall + 1 : 0;
        if (stall >= tol.stall_window) return {sum, n + 1, mag};
        spow *= s;
    }
    throw NotConverged("classical_ml_eval: budget exhausted");
}

cplx classical_ml_eval(double alpha, double beta, cplx s, const Tolerance& tol) {
    return classical_ml_eval_report(alpha, beta, s, tol).value;
}

}  // namespace lfrac
