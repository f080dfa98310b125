#pragma once

#include <vector>

#include "lfrac/types.hpp"

namespace lfrac {

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    explicit ComplexMatrix(int dim)
        : dim_(dim), a_(static_cast<size_t>(dim) * static_cast<size_t>(dim), cplx(0.0)) {
        if (dim < 1) throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = cplx(1.0);
        return m;
    }

    int dim() const noexcept { return dim_; }

    cplx& operator()(int i, int j) {
        return a_[static_cast<size_t>(i) * static_cast<size_t>(dim_) + static_cast<size_t>(j)];
    }
    cplx operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * static_cast<size_t>(dim_) + static_cast<size_t>(j)];
    }

    const std::vector<cplx>& data() const noexcept { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    std::vector<cplx> apply(const std::vector<cplx>& v) const;

    double max_norm() const;        // max |entry|
    double frobenius_norm() const;  // upper bound for the induced 2-norm

private:
    int dim_;
    std::vector<cplx> a_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

/// Solve the m x m linear system W c = rhs (partial-pivot LU).
std::vector<cplx> solve_linear(const ComplexMatrix& W, const std::vector<cplx>& rhs);

/// Determinant (LU based).
cplx determinant(const ComplexMatrix& W);

}  // namespace lfrac
