#include "rmtlab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rmtlab/error.hpp"
#include "rmtlab/quadrature.hpp"

namespace rmtlab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

}  // namespace

DistSpec DistSpec::bounded_uniform(double K) {
    DistSpec d{DistKind::bounded_uniform};
    d.K = K;
    return d;
}

DistSpec DistSpec::subexp(double alpha, double a, double b) {
    DistSpec d{DistKind::subexp};
    d.alpha = alpha;
    d.a = a;
    d.b = b;
    return d;
}

void DistSpec::validate() const {
    switch (kind) {
        case DistKind::bounded_uniform:
            if (!(K >= kSqrt3))
                throw ParameterError("bounded_uniform: K must be >= sqrt(3) (the support half-width)");
            break;
        case DistKind::subexp:
            if (!(alpha > 0.0) || !(a > 0.0) || !(b > 0.0))
                throw ParameterError("subexp: alpha, a and b must be positive");
            if (!std::isfinite(std::tgamma(2.0 * alpha + 1.0)))
                throw ParameterError("subexp: alpha too large to standardize");
            break;
        default:
            break;
    }
}

double DistSpec::bound() const {
    switch (kind) {
        case DistKind::rademacher: return 1.0;
        case DistKind::bounded_uniform: return kSqrt3;
        default: return std::numeric_limits<double>::infinity();
    }
}

double DistSpec::subexp_scale() const { return 1.0 / std::sqrt(std::tgamma(2.0 * alpha + 1.0)); }

double fourth_moment(const DistSpec& dist) {
    switch (dist.kind) {
        case DistKind::rademacher: return 1.0;
        case DistKind::gaussian: return 3.0;
        case DistKind::bounded_uniform: return 9.0 / 5.0;
        case DistKind::complex_gaussian: return 2.0;
        case DistKind::subexp: {
            const double s = dist.subexp_scale();
            return s * s * s * s * std::tgamma(4.0 * dist.alpha + 1.0);
        }
    }
    return 0.0;
}

std::string_view to_string(DistKind kind) {
    switch (kind) {
        case DistKind::rademacher: return "rademacher";
        case DistKind::gaussian: return "gaussian";
        case DistKind::bounded_uniform: return "bounded_uniform";
        case DistKind::subexp: return "subexp";
        case DistKind::complex_gaussian: return "complex_gaussian";
    }
    return "unknown";
}

DistKind dist_kind_from_string(std::string_view name) {
    for (auto k : {DistKind::rademacher, DistKind::gaussian, DistKind::bounded_uniform,
                   DistKind::subexp, DistKind::complex_gaussian})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown distribution kind '" + std::string(name) + "'");
}

Complex draw(const DistSpec& dist, Rng& rng) {
    switch (dist.kind) {
        case DistKind::rademacher: return rng.sign();
        case DistKind::gaussian: return rng.normal();
        case DistKind::bounded_uniform: return kSqrt3 * (2.0 * rng.uniform() - 1.0);
        case DistKind::subexp: {
            const double s = rng.sign();
            return s * dist.subexp_scale() * std::pow(rng.exponential(), dist.alpha);
        }
        case DistKind::complex_gaussian: {
            const double re = rng.normal();
            const double im = rng.normal();
            return Complex(re, im) * std::numbers::sqrt2 * 0.5;
        }
    }
    return 0.0;
}

RandomVector sample_vector(const DistSpec& dist, Eigen::Index n, std::uint64_t seed) {
    dist.validate();
    if (n < 1) throw ParameterError("sample_vector: n must be >= 1");
    Rng rng(seed);
    RandomVector x{CVector(n)};
    for (Eigen::Index i = 0; i < n; ++i) x.entries(i) = draw(dist, rng);
    return x;
}

HermitianMatrix sample_wigner(const DistSpec& dist, Eigen::Index n, std::uint64_t seed,
                              bool normalize) {
    dist.validate();
    if (n < 1) throw ParameterError("sample_wigner: n must be >= 1");
    Rng rng(seed);
    CMatrix upper = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) upper(i, j) = draw(dist, rng);
        // Diagonal entries of a Hermitian matrix are real; complex laws
        // contribute their real part rescaled to unit variance.
        const Complex d = draw(dist, rng);
        upper(j, j) = dist.kind == DistKind::complex_gaussian ? d.real() * std::numbers::sqrt2 : d.real();
    }
    if (normalize) upper /= std::sqrt(static_cast<double>(n));
    return HermitianMatrix::from_upper(std::move(upper));
}

RectMatrix sample_rect(const DistSpec& dist, Eigen::Index p, Eigen::Index n, std::uint64_t seed) {
    dist.validate();
    if (p < 1 || n < 1) throw ParameterError("sample_rect: p and n must be >= 1");
    if (p > n) throw ShapeError("sample_rect: requires p <= n");
    Rng rng(seed);
    CMatrix m(p, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < p; ++i) m(i, j) = draw(dist, rng);
    return RectMatrix(std::move(m));
}

HermitianMatrix form_covariance(const RectMatrix& m) {
    const CMatrix& a = m.dense();
    CMatrix w = (a.adjoint() * a) / static_cast<double>(m.n());
    return HermitianMatrix::from_upper(std::move(w));
}

HermitianMatrix form_dual_covariance(const RectMatrix& m) {
    const CMatrix& a = m.dense();
    CMatrix w = (a * a.adjoint()) / static_cast<double>(m.n());
    return HermitianMatrix::from_upper(std::move(w));
}

namespace {

struct TruncatedMoments {
    double mass;     // P(|xi| <= K)
    double second;   // E[|xi|^2 ; |xi| <= K]
};

TruncatedMoments bounded_uniform_moments(double K, int quad_points) {
    const double c = std::min(K, kSqrt3);
    const auto rule = gauss_legendre(quad_points);
    const double density = 1.0 / (2.0 * kSqrt3);
    const double mass = integrate_gauss_legendre([&](double) { return density; }, -c, c, rule);
    const double second =
        integrate_gauss_legendre([&](double x) { return x * x * density; }, -c, c, rule);
    return {mass, second};
}

// |xi| = s E^alpha with E ~ Exp(1). Integrate over E after the substitution
// E = u^2, which removes the kink of E^{2 alpha} at zero for small alpha.
TruncatedMoments subexp_moments(const DistSpec& dist, double K, int quad_points) {
    const double s = dist.subexp_scale();
    const double e_max = std::min(std::pow(K / s, 1.0 / dist.alpha), 745.0);
    const double u_max = std::sqrt(e_max);
    const int panels = std::max(1, static_cast<int>(std::ceil(u_max)));
    const auto rule = gauss_legendre(std::max(8, quad_points / panels));
    const double width = u_max / panels;
    TruncatedMoments m{0.0, 0.0};
    for (int k = 0; k < panels; ++k) {
        const double lo = k * width;
        const double hi = (k + 1) * width;
        m.mass += integrate_gauss_legendre(
            [](double u) { return 2.0 * u * std::exp(-u * u); }, lo, hi, rule);
        m.second += integrate_gauss_legendre(
            [&](double u) {
                const double e = u * u;
                return 2.0 * u * std::exp(-e) * s * s * std::pow(e, 2.0 * dist.alpha);
            },
            lo, hi, rule);
    }
    return m;
}

}  // namespace

TruncationReport truncation_stats(const DistSpec& dist, double K, int quad_points) {
    dist.validate();
    if (!(K > 1.0)) throw ParameterError("truncation_stats: K must be > 1");
    if (quad_points < 2) throw ParameterError("truncation_stats: quad_points must be >= 2");

    TruncationReport r;
    r.K = K;
    // All supported laws are symmetric, so the truncated mean vanishes.
    r.mu = 0.0;
    switch (dist.kind) {
        case DistKind::rademacher:
            r.eps1 = 0.0;
            r.sigma2 = 1.0;
            break;
        case DistKind::gaussian: {
            // E[xi^2; |xi| > K] = 2 K phi(K) + P(|xi| > K)
            const double phi = std::exp(-0.5 * K * K) / std::sqrt(2.0 * std::numbers::pi);
            r.eps1 = std::erfc(K / std::numbers::sqrt2);
            const double lost = r.eps1 + 2.0 * K * phi;
            r.sigma2 = 1.0 - lost;
            r.eps3 = lost;
            break;
        }
        case DistKind::complex_gaussian: {
            // |xi|^2 ~ Exp(1)
            const double tail = std::exp(-K * K);
            r.eps1 = tail;
            const double lost = (1.0 + K * K) * tail;
            r.sigma2 = 1.0 - lost;
            r.eps3 = lost;
            break;
        }
        case DistKind::bounded_uniform:
        case DistKind::subexp: {
            const auto m = dist.kind == DistKind::subexp ? subexp_moments(dist, K, quad_points)
                                                         : bounded_uniform_moments(K, quad_points);
            r.eps1 = std::max(0.0, 1.0 - m.mass);
            r.sigma2 = m.second;
            break;
        }
    }
    r.eps2 = std::abs(r.mu);
    if (dist.kind != DistKind::gaussian && dist.kind != DistKind::complex_gaussian)
        r.eps3 = std::abs(r.sigma2 - 1.0);
    return r;
}

RandomVector standardize_truncated(const RandomVector& x, const TruncationReport& report) {
    if (!(report.sigma2 > 0.0))
        throw DegenerateError("standardize_truncated: truncated variance is not positive");
    const double inv_sigma = 1.0 / std::sqrt(report.sigma2);
    RandomVector out{CVector(x.size())};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Complex xi = x.entries(i);
        const Complex kept = std::abs(xi) > report.K ? Complex(0.0) : xi;
        out.entries(i) = (kept - report.mu) * inv_sigma;
    }
    return out;
}

}  // namespace rmtlab
