#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lfrac {

using cplx = std::complex<double>;

/// A series/iteration did not reach the requested tolerance within budget.
struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gamma evaluated at a pole (non-positive integer).
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The initial-data matrix of candidate solutions is numerically singular
/// (duplicated atoms or clustered roots that should have been merged).
struct SingularWronskian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Undetermined-coefficient series matching left a residual, i.e. the forcing
/// term is not representable in the requested atom family.
struct AnsatzMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fractional index alpha, restricted to (0, 1]. alpha = 1 recovers the
/// classical integer-order operators.
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha <= 1.0))
            throw std::domain_error("FracOrder: alpha must lie in (0, 1], got " +
                                    std::to_string(alpha));
    }
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Convergence budget shared by every truncated-series evaluation.
struct Tolerance {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_terms = 4096;
    int stall_window = 5;

    void validate() const {
        if (!(rel_tol > 0.0) || !std::isfinite(rel_tol) ||
            !(abs_tol > 0.0) || !std::isfinite(abs_tol))
            throw std::invalid_argument("Tolerance: rel_tol/abs_tol must be finite and positive");
        if (stall_window < 1)
            throw std::invalid_argument("Tolerance: stall_window must be >= 1");
        if (max_terms < stall_window)
            throw std::invalid_argument("Tolerance: max_terms must be >= stall_window");
    }
};

}  // namespace lfrac
