#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rmtlab/matrix.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

enum class DistKind {
    rademacher,        ///< +-1 with probability 1/2
    gaussian,          ///< standard real normal
    bounded_uniform,   ///< uniform on [-sqrt3, sqrt3]; K is the declared bound
    subexp,            ///< sign * E^alpha, E ~ Exp(1), standardized
    complex_gaussian,  ///< (g1 + i g2)/sqrt2
};

/// Declarative entry distribution. Every kind has mean 0 and variance 1.
///
/// `K` is only meaningful for bounded_uniform, where it must be at least
/// sqrt(3) so that the law really is K-bounded. `alpha`, `a`, `b` describe the
/// subexp tail P(|xi| >= t^alpha) <= a exp(-b t); only alpha shapes samples.
struct DistSpec {
    DistKind kind = DistKind::rademacher;
    double K = 1.7320508075688772;
    double alpha = 1.0;
    double a = 2.0;
    double b = 1.0;

    static DistSpec rademacher() { return {DistKind::rademacher}; }
    static DistSpec gaussian() { return {DistKind::gaussian}; }
    static DistSpec complex_gaussian() { return {DistKind::complex_gaussian}; }
    static DistSpec bounded_uniform(double K);
    static DistSpec subexp(double alpha, double a = 2.0, double b = 1.0);

    /// Throws ParameterError on invalid parameters.
    void validate() const;

    /// Almost-sure bound on |xi| when the law is bounded, otherwise infinity.
    double bound() const;

    /// Scale factor s with xi = s * sign * E^alpha (subexp only).
    double subexp_scale() const;

    bool operator==(const DistSpec&) const = default;
};

/// E|xi|^4.
double fourth_moment(const DistSpec& dist);

std::string_view to_string(DistKind kind);
DistKind dist_kind_from_string(std::string_view name);

/// One draw from `dist` using `rng`.
Complex draw(const DistSpec& dist, Rng& rng);

/// n i.i.d. entries; a pure function of (dist, n, seed).
RandomVector sample_vector(const DistSpec& dist, Eigen::Index n, std::uint64_t seed);

/// Wigner matrix: diagonal and upper entries i.i.d. from `dist`, lower triangle
/// mirrored by conjugation. With `normalize`, all entries are divided by sqrt(n).
HermitianMatrix sample_wigner(const DistSpec& dist, Eigen::Index n, std::uint64_t seed,
                              bool normalize);

/// p x n matrix of i.i.d. entries, filled column by column.
RectMatrix sample_rect(const DistSpec& dist, Eigen::Index p, Eigen::Index n, std::uint64_t seed);

/// W = M* M / n (n x n, rank <= p).
HermitianMatrix form_covariance(const RectMatrix& m);

/// W* = M M* / n (p x p); shares the nonzero spectrum of form_covariance(m).
HermitianMatrix form_dual_covariance(const RectMatrix& m);

/// Truncation statistics of xi' = xi 1{|xi| <= K}.
struct TruncationReport {
    double K = 0.0;
    double eps1 = 0.0;    ///< P(|xi| > K)
    double eps2 = 0.0;    ///< |E xi'|
    double eps3 = 0.0;    ///< |Var xi' - 1|
    double mu = 0.0;      ///< E xi'
    double sigma2 = 0.0;  ///< Var xi'
};

/// Closed form for rademacher, gaussian and complex_gaussian; Gauss-Legendre
/// quadrature with `quad_points` nodes otherwise.
TruncationReport truncation_stats(const DistSpec& dist, double K, int quad_points = 2001);

/// Entries with |xi| > K are zeroed, then (xi' - mu) / sigma.
RandomVector standardize_truncated(const RandomVector& x, const TruncationReport& report);

}  // namespace rmtlab
