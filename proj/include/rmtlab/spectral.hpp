#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rmtlab/matrix.hpp"

namespace rmtlab {

/// Ascending eigenvalues and the matching unit eigenvectors (columns).
struct SpectralDecomposition {
    RVector eigenvalues;
    CMatrix eigenvectors;
};

/// Half-open real interval [lo, hi).
struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_);
    double length() const noexcept { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Full eigendecomposition. Real symmetric input takes the real solver path.
SpectralDecomposition eig_decompose(const HermitianMatrix& w);

/// Eigenvalues only (ascending); considerably cheaper for large n.
std::vector<double> eigvalsh(const HermitianMatrix& w);

/// N_I = #{i : lo <= lambda_i < hi}. Throws ContractError on unsorted input.
std::size_t count_interval(std::span<const double> eigs, const Interval& interval);

/// Semicircle density (1/2pi) sqrt(4 - x^2) on [-2, 2].
double rho_sc(double x);

/// Exact semicircle mass of an interval (endpoints clipped to [-2, 2]).
double sc_interval_mass(const Interval& interval);

/// Semicircle cumulative distribution function.
double sc_cdf(double x);

/// (1/n) sum 1/(lambda_i - z); requires Im z > 0.
Complex stieltjes_empirical(std::span<const double> eigs, Complex z);

/// Semicircle transform (-z + sqrt(z^2 - 4))/2 with sqrt(z^2-4) realised as
/// sqrt(z-2) sqrt(z+2), which is cut on [-2, 2] and behaves like z at infinity.
Complex stieltjes_sc(Complex z);

/// Marchenko-Pastur density for ratio y in (0, 1].
double rho_mp(double x, double y);

/// Support edges a = (1 - sqrt y)^2, b = (1 + sqrt y)^2.
std::pair<double, double> mp_edges(double y);

/// MP transform, branch via sqrt(z-a) sqrt(z-b).
Complex stieltjes_mp(Complex z, double y);

/// MP mass of an interval by adaptive quadrature (tolerance 1e-10).
double mp_interval_mass(const Interval& interval, double y);

double mp_cdf(double x, double y);

/// p.v. of the semicircle integral of rho_sc(x)/(x - lambda).
/// Inside the bulk this is -lambda/2; outside, the root is chosen so the value
/// decays as |lambda| -> infinity.
double pv_semicircle(double lambda);

/// Largest gap between consecutive eigenvalues lying in [lo, hi).
double max_gap(std::span<const double> eigs, const Interval& region);

/// Limiting spectral law used by the counting and KS machinery.
class Density {
public:
    static Density semicircle() { return Density(Kind::semicircle, 0.0); }
    static Density marchenko_pastur(double y);

    double mass(const Interval& interval) const;
    double cdf(double x) const;
    double pdf(double x) const;
    /// Closed support [lo, hi] (stored as an Interval).
    Interval support() const;
    bool is_semicircle() const noexcept { return kind_ == Kind::semicircle; }
    double ratio() const noexcept { return y_; }

private:
    enum class Kind { semicircle, marchenko_pastur };
    Density(Kind k, double y) : kind_(k), y_(y) {}
    Kind kind_;
    double y_;
};

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// sorted `eigs` and `density`.
double ks_distance(std::span<const double> eigs, const Density& density);

}  // namespace rmtlab
