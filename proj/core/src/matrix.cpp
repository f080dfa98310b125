#include "lfrac/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace lfrac {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    const int d = m.dim();
    Eigen::MatrixXcd e(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e(i, j) = m(i, j);
    return e;
}

}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw std::invalid_argument("ComplexMatrix::apply: dimension mismatch");
    std::vector<cplx> out(static_cast<size_t>(dim_), cplx(0.0));
    for (int i = 0; i < dim_; ++i) {
        cplx s(0.0);
        for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = s;
    }
    return out;
}

double ComplexMatrix::max_norm() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r = a;
    r += b;
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < d; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix r = a;
    r *= s;
    return r;
}

std::vector<cplx> solve_linear(const ComplexMatrix& W, const std::vector<cplx>& rhs) {
    if (static_cast<int>(rhs.size()) != W.dim())
        throw std::invalid_argument("solve_linear: dimension mismatch");
    Eigen::VectorXcd b(W.dim());
    for (int i = 0; i < W.dim(); ++i) b(i) = rhs[static_cast<size_t>(i)];
    Eigen::VectorXcd x = to_eigen(W).partialPivLu().solve(b);
    std::vector<cplx> out(static_cast<size_t>(W.dim()));
    for (int i = 0; i < W.dim(); ++i) out[static_cast<size_t>(i)] = x(i);
    return out;
}

cplx determinant(const ComplexMatrix& W) { return to_eigen(W).determinant(); }

}  // namespace lfrac
