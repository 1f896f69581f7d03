#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rmtlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Random vector X = (xi_1, ..., xi_n). Real distributions leave the
/// imaginary parts at zero.
struct RandomVector {
    CVector entries;

    Eigen::Index size() const noexcept { return entries.size(); }
};

/// Dense Hermitian matrix. Symmetry is exact: the lower triangle is always
/// the conjugate mirror of the upper triangle and the diagonal is real.
class HermitianMatrix {
public:
    /// Build from the upper triangle (including the diagonal) of `upper`;
    /// the strictly lower part of the argument is ignored.
    static HermitianMatrix from_upper(CMatrix upper);

    /// Build from a full matrix that must already be Hermitian to within
    /// `tol` (max-entry deviation); the result is mirrored exactly.
    static HermitianMatrix from_dense(const CMatrix& a, double tol = 1e-12);

    static HermitianMatrix from_real(const RMatrix& a, double tol = 1e-12);

    const CMatrix& dense() const noexcept { return a_; }
    Eigen::Index n() const noexcept { return a_.rows(); }

    /// True when every entry has zero imaginary part.
    bool is_real() const noexcept { return real_; }

    /// Real part as a real symmetric matrix (meaningful when is_real()).
    RMatrix real_part() const { return a_.real(); }

    HermitianMatrix scaled(double factor) const;

    /// Principal submatrix with row and column k removed.
    HermitianMatrix minor(Eigen::Index k) const;

private:
    explicit HermitianMatrix(CMatrix a);
    CMatrix a_;
    bool real_ = true;
};

/// Dense p x n factor matrix with p <= n.
class RectMatrix {
public:
    explicit RectMatrix(CMatrix m);

    const CMatrix& dense() const noexcept { return m_; }
    Eigen::Index p() const noexcept { return m_.rows(); }
    Eigen::Index n() const noexcept { return m_.cols(); }
    bool is_real() const noexcept { return real_; }

private:
    CMatrix m_;
    bool real_ = true;
};

/// Remove row `r` and column `c` (either may be -1 to keep all).
CMatrix drop_row_col(const CMatrix& a, Eigen::Index r, Eigen::Index c);

double frobenius_norm(const CMatrix& a);

/// Largest singular value.
double spectral_norm(const CMatrix& a);

/// Entrywise modulus (the matrix B = (|a_ij|) of the Hanson-Wright bound).
CMatrix entrywise_abs(const CMatrix& a);

}  // namespace rmtlab
