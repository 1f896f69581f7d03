#include "rmtlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rmtlab/error.hpp"
#include "rmtlab/quadrature.hpp"

namespace rmtlab {

namespace {

void require_upper_half(Complex z, const char* who) {
    if (!(z.imag() > 0.0)) throw DomainError(std::string(who) + ": requires Im z > 0");
}

void require_sorted(std::span<const double> eigs, const char* who) {
    if (!std::is_sorted(eigs.begin(), eigs.end()))
        throw ContractError(std::string(who) + ": eigenvalues must be sorted ascending");
}

void require_ratio(double y) {
    if (!(y > 0.0 && y <= 1.0)) throw ParameterError("MP ratio y must lie in (0, 1]");
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw ParameterError("interval requires lo < hi");
}

SpectralDecomposition eig_decompose(const HermitianMatrix& w) {
    SpectralDecomposition out;
    if (w.is_real()) {
        Eigen::SelfAdjointEigenSolver<RMatrix> solver(w.real_part());
        if (solver.info() != Eigen::Success)
            throw DecompositionError("symmetric eigensolver did not converge");
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(w.dense());
        if (solver.info() != Eigen::Success)
            throw DecompositionError("Hermitian eigensolver did not converge");
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors();
    }
    return out;
}

std::vector<double> eigvalsh(const HermitianMatrix& w) {
    RVector values;
    if (w.is_real()) {
        Eigen::SelfAdjointEigenSolver<RMatrix> solver(w.real_part(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw DecompositionError("symmetric eigensolver did not converge");
        values = solver.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(w.dense(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw DecompositionError("Hermitian eigensolver did not converge");
        values = solver.eigenvalues();
    }
    return {values.data(), values.data() + values.size()};
}

std::size_t count_interval(std::span<const double> eigs, const Interval& interval) {
    require_sorted(eigs, "count_interval");
    const auto first = std::lower_bound(eigs.begin(), eigs.end(), interval.lo);
    const auto last = std::lower_bound(first, eigs.end(), interval.hi);
    return static_cast<std::size_t>(last - first);
}

double rho_sc(double x) {
    if (std::abs(x) > 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

namespace {

double sc_antiderivative(double x) {
    x = std::clamp(x, -2.0, 2.0);
    return x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

}  // namespace

double sc_interval_mass(const Interval& interval) {
    return sc_antiderivative(interval.hi) - sc_antiderivative(interval.lo);
}

double sc_cdf(double x) { return sc_antiderivative(x) + 0.5; }

Complex stieltjes_empirical(std::span<const double> eigs, Complex z) {
    require_upper_half(z, "stieltjes_empirical");
    if (eigs.empty()) throw InsufficientDataError("stieltjes_empirical: empty spectrum");
    Complex sum = 0.0;
    for (double lambda : eigs) sum += 1.0 / (lambda - z);
    return sum / static_cast<double>(eigs.size());
}

Complex stieltjes_sc(Complex z) {
    require_upper_half(z, "stieltjes_sc");
    const Complex root = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
    // (-z + root)/2 written through the conjugate root to avoid cancellation
    // at large |z|: the two roots of s^2 + z s + 1 multiply to 1.
    return -2.0 / (z + root);
}

double rho_mp(double x, double y) {
    require_ratio(y);
    const auto [a, b] = mp_edges(y);
    if (x < a || x > b || x <= 0.0) return 0.0;
    return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * x * y);
}

std::pair<double, double> mp_edges(double y) {
    require_ratio(y);
    const double r = std::sqrt(y);
    return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

Complex stieltjes_mp(Complex z, double y) {
    require_upper_half(z, "stieltjes_mp");
    const auto [a, b] = mp_edges(y);
    const Complex root = std::sqrt(z - a) * std::sqrt(z - b);
    // Root of y z s^2 + (y + z - 1) s + 1 = 0 that decays like -1/z.
    return -2.0 / ((y + z - 1.0) + root);
}

double mp_interval_mass(const Interval& interval, double y) {
    const auto [a, b] = mp_edges(y);
    const double lo = std::max(interval.lo, a);
    const double hi = std::min(interval.hi, b);
    if (!(hi > lo)) return 0.0;
    return integrate_adaptive([y](double x) { return rho_mp(x, y); }, lo, hi, 1e-10);
}

double mp_cdf(double x, double y) {
    const auto [a, b] = mp_edges(y);
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    return mp_interval_mass(Interval(a, x), y);
}

double pv_semicircle(double lambda) {
    if (std::abs(lambda) <= 2.0) return -lambda / 2.0;
    const double root = std::sqrt(lambda * lambda - 4.0);
    return -lambda / 2.0 + std::copysign(root, lambda) / 2.0;
}

double max_gap(std::span<const double> eigs, const Interval& region) {
    require_sorted(eigs, "max_gap");
    const auto first = std::lower_bound(eigs.begin(), eigs.end(), region.lo);
    const auto last = std::lower_bound(first, eigs.end(), region.hi);
    if (last - first < 2)
        throw InsufficientDataError("max_gap: fewer than two eigenvalues in region");
    double gap = 0.0;
    for (auto it = first + 1; it != last; ++it) gap = std::max(gap, *it - *(it - 1));
    return gap;
}

Density Density::marchenko_pastur(double y) {
    require_ratio(y);
    return Density(Kind::marchenko_pastur, y);
}

double Density::mass(const Interval& interval) const {
    return kind_ == Kind::semicircle ? sc_interval_mass(interval) : mp_interval_mass(interval, y_);
}

double Density::cdf(double x) const {
    return kind_ == Kind::semicircle ? sc_cdf(x) : mp_cdf(x, y_);
}

double Density::pdf(double x) const {
    return kind_ == Kind::semicircle ? rho_sc(x) : rho_mp(x, y_);
}

Interval Density::support() const {
    if (kind_ == Kind::semicircle) return Interval(-2.0, 2.0);
    const auto [a, b] = mp_edges(y_);
    return Interval(a, b);
}

double ks_distance(std::span<const double> eigs, const Density& density) {
    require_sorted(eigs, "ks_distance");
    if (eigs.empty()) throw InsufficientDataError("ks_distance: empty spectrum");
    const double n = static_cast<double>(eigs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const double f = density.cdf(eigs[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

}  // namespace rmtlab
