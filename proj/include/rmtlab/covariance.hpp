#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmtlab/delocalization.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

/// Thin SVD of a p x n factor: M right_i = sigma_i left_i and
/// M* left_i = sigma_i right_i, sigma ascending.
struct SingularTriplets {
    RVector sigma;  ///< p values
    CMatrix left;   ///< p x p, columns in C^p
    CMatrix right;  ///< n x p, columns in C^n
};

SingularTriplets singular_triplets(const RectMatrix& m);

/// Schur pieces of W* = M M*/n at row k (0-based):
///   ((W* - z)^{-1})_kk = 1 / (xi_kk - z - Yk),
///   xi_kk = |X_k|^2/n, a_k = M_k X_k / n, W_k = M_k M_k*/n,
/// with X_k* row k of M and M_k the other p - 1 rows.
struct CovSchurTerms {
    Eigen::Index k = 0;
    double xi_kk = 0.0;
    Complex Yk = 0.0;
    Complex s_minor = 0.0;     ///< Stieltjes transform of W_k (0 when p = 1)
    Complex expected_Yk = 0.0; ///< ((p-1)/n)(1 + z s_minor)
};

CovSchurTerms covariance_schur_terms(const RectMatrix& m, Complex z, Eigen::Index k);

/// |(1/p) sum_k 1/(xi_kk - z - Y_k) - s(z)| with s the transform of the p
/// eigenvalues of M M*/n.
double covariance_schur_residual(const RectMatrix& m, Complex z);

/// Y_k - E(Y_k | W_k) = (1/n) sum_j lambda_j(W_k) R_j / (lambda_j(W_k) - z),
/// R_j = |X_k* u_j(M_k)|^2 - 1 over the right singular vectors of M_k.
struct CovRDecomposition {
    std::vector<double> lambda;
    std::vector<double> R;
    Eigen::Index n = 0;

    Complex recombine(Complex z) const;
};

CovRDecomposition covariance_r_decomposition(const RectMatrix& m, Eigen::Index k);

/// |s + 1/(y + z - 1 + y z s)| with s the transform of `eigs` (the p
/// eigenvalues of M M*/n). Throws SingularityError if the denominator vanishes.
double mp_self_consistency_residual(std::span<const double> eigs, Complex z, double y);

/// Nonzero spectrum of W = M*M/n, i.e. the p eigenvalues of M M*/n, ascending.
std::vector<double> covariance_eigenvalues(const RectMatrix& m);

/// Identity for the deleted coordinate of singular vector i.
///  right: delete the last column X; x is the last entry of right_i and the
///         sum runs over the left singular vectors of the p x (n-1) minor.
///  left:  delete the last row Y*; y is the last entry of left_i and the sum
///         runs over the right singular vectors of the (p-1) x n minor.
/// collision_gap is min_j |sigma_j(minor)^2 - sigma_i^2| / n (eigenvalue units).
IdentityCheck singular_entry_identity(const RectMatrix& m, Eigen::Index i, Side side);

/// sum_j sigma_j^2 |w_j* X|^2 / (sigma_j^2 - sigma_i^2) = |X|^2 - sigma_i^2
/// (X the deleted column for `right`, Y the deleted row for `left`).
IdentityCheck singular_interlacing_identity(const RectMatrix& m, Eigen::Index i, Side side);

/// p.v. of y * integral_a^b x rho_MP(x) / (x - lambda) dx by symmetric excision
/// of half-width h = excision, h/4, h/16, ..., Richardson-extrapolated in
/// sqrt(h). Outside [a, b] the integral is ordinary.
double pv_mp(double lambda, double y, double excision = 1e-2);

/// Region of lambda = sigma^2/n against the MP edges a, b:
/// bulk on [a + eps, b - eps]; edge on [a - eps, a + eps] u [b - eps, b + eps],
/// or only [4 - eps, 4] when a = 0; outside otherwise.
Region classify_mp_region(double lambda, double y, double eps);

/// Records for every left and right singular vector (left first, then right,
/// each in ascending sigma order). lambda = sigma^2/n.
std::vector<DelocRecord> singular_vec_inf_norms(const RectMatrix& m, double eps = 0.1,
                                                std::uint64_t seed = 0);

}  // namespace rmtlab
