#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

/// Schur-complement pieces of the diagonal resolvent entry k (0-based) of
/// W = M / sqrt(n):
///   ((W - z)^{-1})_kk = 1 / (diag - z - Yk),  Yk = a_k* (W_k - z)^{-1} a_k,
/// where W_k is W without row/column k and a_k is column k of W without entry k.
struct SchurTerms {
    Eigen::Index k = 0;
    double diag = 0.0;        ///< W_kk = zeta_kk / sqrt(n)
    Complex Yk = 0.0;
    Complex s_minor = 0.0;    ///< Stieltjes transform of W_k (0 when n = 1)
    Complex expected_Yk = 0.0;///< (1 - 1/n) s_minor = E(Yk | W_k)
};

enum class SchurRoute {
    solve,     ///< Yk from one linear solve against W_k - z
    spectral,  ///< Yk from the eigendecomposition of W_k (cross-check route)
};

/// `m` is the unnormalized matrix M. Throws DomainError for Im z <= 0 and
/// ParameterError for k out of range.
SchurTerms schur_terms(const HermitianMatrix& m, Complex z, Eigen::Index k,
                       SchurRoute route = SchurRoute::solve);

/// |(1/n) sum_k 1/(W_kk - z - Y_k) - s_n(z)|, s_n from the eigenvalues of W.
double schur_identity_residual(const HermitianMatrix& m, Complex z);

/// Yk - E(Yk | W_k).
Complex yk_deviation(const HermitianMatrix& m, Complex z, Eigen::Index k);

/// Eigenvalues lambda_j of W_k with R_j = |u_j* X_k|^2 - 1, X_k = sqrt(n) a_k.
/// (1/n) sum_j R_j / (lambda_j - z) recombines to yk_deviation.
struct RDecomposition {
    std::vector<double> lambda;
    std::vector<double> R;
    Eigen::Index n = 0;

    Complex recombine(Complex z) const;
};

RDecomposition yk_r_decomposition(const HermitianMatrix& m, Eigen::Index k);

/// |s + 1/(z + s)| with s the empirical transform of `eigs`.
/// Throws SingularityError when z + s vanishes.
double self_consistency_residual(std::span<const double> eigs, Complex z);

/// Default spectral resolution eta = 10 log n / n.
double default_eta(std::int64_t n);

struct WindowRow {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double expected = 0.0;  ///< n * mass(I)
    double rel_dev = 0.0;   ///< |N_I - n mass(I)| / (n mass(I))
    double abs_dev = 0.0;   ///< |N_I - n mass(I)| / (n |I|)
};

struct LawDeviation {
    double max_rel_dev = 0.0;
    double max_abs_dev = 0.0;
    std::vector<WindowRow> windows;
};

/// Sliding windows of length `scale` and stride stride_frac * scale across
/// `bulk` (sorted eigenvalues, n = eigs.size()). When the windows do not tile
/// the bulk exactly, a final window is aligned to bulk.hi. A scale at least
/// as long as the bulk gives the single window `bulk`.
LawDeviation law_deviation(std::span<const double> eigs, const Density& density, double scale,
                           const Interval& bulk, double stride_frac = 0.25);

/// max over sliding windows spanning [min eig, max eig] of N_I / (n |I|).
double crude_count_check(std::span<const double> eigs, std::int64_t n, double scale,
                         double stride_frac = 0.25);

struct ScanRow {
    double scale = 0.0;
    std::size_t trial = 0;
    WindowRow window;
};

/// Local-law deviation as a function of window length.
/// Scales are multiples of unit = log n / n.
struct ThresholdEstimate {
    std::vector<double> multiples;
    double unit = 0.0;
    std::vector<double> max_rel_dev;  ///< per scale, max over trials and windows
    double delta = 0.0;
    std::optional<double> threshold_scale;     ///< absolute length
    std::optional<double> threshold_multiple;  ///< same, in units of log n / n
    std::vector<ScanRow> rows;
};

/// Wigner matrices W = M/sqrt(n) with entries from `dist`, trial seed
/// derive_seed(base_seed, trial). threshold_scale is the smallest scanned
/// scale whose max_rel_dev is <= delta; none if no scale qualifies.
ThresholdEstimate threshold_scan(const DistSpec& dist, std::int64_t n, std::span<const double> multiples,
                                 double delta, std::size_t trials, const Interval& bulk,
                                 std::uint64_t base_seed, int workers = 1, bool keep_rows = true);

/// Largest increase max_rel_dev[j] - max_rel_dev[i] over i < j (0 when the
/// curve is non-increasing).
double max_monotonicity_violation(std::span<const double> curve);

}  // namespace rmtlab
