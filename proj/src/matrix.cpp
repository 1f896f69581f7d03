#include "rmtlab/matrix.hpp"

#include <cmath>
#include <string>

#include "rmtlab/error.hpp"

namespace rmtlab {

namespace {

bool all_real(const CMatrix& a) { return (a.imag().array() == 0.0).all(); }

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix a) : a_(std::move(a)), real_(all_real(a_)) {}

HermitianMatrix HermitianMatrix::from_upper(CMatrix upper) {
    if (upper.rows() != upper.cols() || upper.rows() == 0)
        throw ShapeError("Hermitian matrix must be square and non-empty");
    const Eigen::Index n = upper.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        upper(j, j) = Complex(upper(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < n; ++i) upper(i, j) = std::conj(upper(j, i));
    }
    return HermitianMatrix(std::move(upper));
}

HermitianMatrix HermitianMatrix::from_dense(const CMatrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw ShapeError("Hermitian matrix must be square and non-empty");
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw ContractError("matrix is not Hermitian (max |A - A*| = " + std::to_string(dev) + ")");
    return from_upper(a);
}

HermitianMatrix HermitianMatrix::from_real(const RMatrix& a, double tol) {
    return from_dense(a.cast<Complex>(), tol);
}

HermitianMatrix HermitianMatrix::scaled(double factor) const {
    return HermitianMatrix(a_ * factor);
}

HermitianMatrix HermitianMatrix::minor(Eigen::Index k) const {
    if (k < 0 || k >= n()) throw ShapeError("minor index out of range");
    if (n() == 1) throw ShapeError("1x1 matrix has no proper minor");
    return HermitianMatrix(drop_row_col(a_, k, k));
}

RectMatrix::RectMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0) throw ShapeError("factor matrix must be non-empty");
    if (m_.rows() > m_.cols()) throw ShapeError("factor matrix requires p <= n");
    real_ = all_real(m_);
}

CMatrix drop_row_col(const CMatrix& a, Eigen::Index r, Eigen::Index c) {
    const Eigen::Index rows = a.rows() - (r >= 0 ? 1 : 0);
    const Eigen::Index cols = a.cols() - (c >= 0 ? 1 : 0);
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0, jj = 0; j < a.cols(); ++j) {
        if (j == c) continue;
        for (Eigen::Index i = 0, ii = 0; i < a.rows(); ++i) {
            if (i == r) continue;
            out(ii++, jj) = a(i, j);
        }
        ++jj;
    }
    return out;
}

double frobenius_norm(const CMatrix& a) { return a.norm(); }

double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

CMatrix entrywise_abs(const CMatrix& a) { return a.cwiseAbs().cast<Complex>(); }

}  // namespace rmtlab
