#pragma once
// Reference computations used to freeze expected values. None of these call
// the library's solvers or quadrature, so agreement is a real cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<double>>;
constexpr double pi = std::numbers::pi;

/// Composite Simpson rule with `m` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
    if (m % 2) ++m;
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Complex-valued Simpson.
inline cd simpson_c(const std::function<cd(double)>& f, double a, double b, int m = 20000) {
    if (m % 2) ++m;
    const double h = (b - a) / m;
    cd s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double rho_sc(double x) { return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * pi) : 0.0; }

/// Semicircle mass of [lo, hi] by Simpson in theta with x = 2 sin(theta).
inline double sc_mass(double lo, double hi) {
    lo = std::clamp(lo, -2.0, 2.0);
    hi = std::clamp(hi, -2.0, 2.0);
    if (hi <= lo) return 0.0;
    const double t0 = std::asin(lo / 2.0), t1 = std::asin(hi / 2.0);
    return simpson([](double t) { return 4.0 * std::cos(t) * std::cos(t) / (2.0 * pi); }, t0, t1);
}

inline std::pair<double, double> mp_edges(double y) {
    return {(1.0 - std::sqrt(y)) * (1.0 - std::sqrt(y)), (1.0 + std::sqrt(y)) * (1.0 + std::sqrt(y))};
}

/// MP mass of [lo, hi] with x = c - r cos(theta), which removes both square-root edges.
inline double mp_mass(double lo, double hi, double y) {
    const auto [a, b] = mp_edges(y);
    lo = std::clamp(lo, a, b);
    hi = std::clamp(hi, a, b);
    if (hi <= lo) return 0.0;
    const double c = (a + b) / 2.0, r = (b - a) / 2.0;
    const double t0 = std::acos(std::clamp((c - lo) / r, -1.0, 1.0));
    const double t1 = std::acos(std::clamp((c - hi) / r, -1.0, 1.0));
    auto f = [&](double t) {
        const double x = c - r * std::cos(t);
        // (b - x)(x - a) = (r sin t)^2; at a = 0 the 1/x cancels
        if (a == 0.0) return (b - x) / (2.0 * pi * y);
        const double s = r * std::sin(t);
        return s * s / (2.0 * pi * y * x);
    };
    return simpson(f, t0, t1, 200000);
}

/// int rho_MP(x) / (x - z) dx by the same substitution (z off the real axis).
inline cd mp_stieltjes(cd z, double y) {
    const auto [a, b] = mp_edges(y);
    const double c = (a + b) / 2.0, r = (b - a) / 2.0;
    auto f = [&](double t) -> cd {
        const double x = c - r * std::cos(t);
        const double s = r * std::sin(t);
        return x > 0.0 ? cd(s * s / (2.0 * pi * y * x)) / (x - z) : cd(0.0);
    };
    return simpson_c(f, 0.0, pi, 200000);
}

/// p.v. int rho_sc(t) / (t - s) dt. Inside the support the pole is removed by
/// subtracting rho_sc(s); the log term restores it.
inline double pv_sc(double s) {
    auto smooth = [&](double th) {
        const double t = 2.0 * std::sin(th);
        const double dt = 2.0 * std::cos(th);
        if (std::abs(s) >= 2.0) return rho_sc(t) * dt / (t - s);
        const double d = t - s;
        if (std::abs(d) < 1e-7) return -s / (2.0 * pi * std::sqrt(4.0 - s * s)) * dt;
        return (rho_sc(t) - rho_sc(s)) / d * dt;
    };
    double v = simpson(smooth, -pi / 2.0, pi / 2.0, 400000);
    if (std::abs(s) < 2.0) v += rho_sc(s) * std::log((2.0 - s) / (2.0 + s));
    return v;
}

/// Gaussian tail P(|g| > K).
inline double gaussian_tail(double K) { return std::erfc(K / std::sqrt(2.0)); }

/// Cyclic Jacobi for a real symmetric matrix. Returns ascending eigenvalues
/// and the matching eigenvectors as columns.
inline std::pair<std::vector<double>, Mat> jacobi(Mat a) {
    const std::size_t n = a.size();
    Mat v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a[x][x] < a[y][y]; });
    std::vector<double> w(n);
    Mat vs(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = a[idx[j]][idx[j]];
        for (std::size_t i = 0; i < n; ++i) vs[i][j] = v[i][idx[j]];
    }
    return {w, vs};
}

inline Mat transpose(const Mat& m) {
    Mat t(m[0].size(), std::vector<double>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
    return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

/// Singular values squared of a real p x n matrix via Jacobi on M M^T, ascending.
inline std::vector<double> singular_squares(const Mat& m) { return jacobi(matmul(m, transpose(m))).first; }

/// (1/n) tr (W - z)^{-1} from Gauss-Jordan inversion of a real symmetric W - z.
inline cd resolvent_trace(const Mat& w, cd z) {
    const std::size_t n = w.size();
    std::vector<std::vector<cd>> a(n, std::vector<cd>(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = w[i][j];
        a[i][i] -= z;
        a[i][n + i] = 1.0;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        const cd d = a[c][c];
        for (auto& x : a[c]) x /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const cd f = a[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    cd tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += a[i][n + i];
    return tr / static_cast<double>(n);
}

/// Kolmogorov distance between the ESD of sorted `eigs` and a CDF, by direct
/// evaluation of both one-sided gaps at every atom.
inline double ks(const std::vector<double>& eigs, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(eigs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const double f = cdf(eigs[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

/// Var(X^T A X) for standard Gaussian X and real A: |A + A^T|_F^2 / 2.
inline double gaussian_quadratic_variance(const Mat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double v = a[i][j] + a[j][i];
            s += v * v;
        }
    return s / 2.0;
}

/// Hand-rolled generator for property tests; independent of the library RNG.
struct Gen {
    std::mt19937_64 eng;
    explicit Gen(std::uint64_t seed) : eng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
    std::uint64_t u64() { return eng(); }
    bool coin() { return eng() & 1u; }
};

}  // namespace oracle
