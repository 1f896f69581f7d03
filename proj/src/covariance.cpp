#include "rmtlab/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/quadrature.hpp"

namespace rmtlab {

namespace {

void check_z(Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("resolvent requires Im z > 0");
}

struct Svd {
    RVector sigma;  // ascending
    CMatrix left;
    CMatrix right;
};

/// Thin SVD of an arbitrary (possibly wide or tall) matrix, ascending order.
Svd thin_svd(const CMatrix& a) {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw DecompositionError("SVD did not converge");
    const Eigen::Index r = svd.singularValues().size();
    Svd out{RVector(r), CMatrix(a.rows(), r), CMatrix(a.cols(), r)};
    for (Eigen::Index j = 0; j < r; ++j) {
        out.sigma(j) = svd.singularValues()(r - 1 - j);
        out.left.col(j) = svd.matrixU().col(r - 1 - j);
        out.right.col(j) = svd.matrixV().col(r - 1 - j);
    }
    return out;
}

}  // namespace

SingularTriplets singular_triplets(const RectMatrix& m) {
    Svd s = thin_svd(m.dense());
    return {std::move(s.sigma), std::move(s.left), std::move(s.right)};
}

std::vector<double> covariance_eigenvalues(const RectMatrix& m) {
    return eigvalsh(form_dual_covariance(m));
}

CovSchurTerms covariance_schur_terms(const RectMatrix& m, Complex z, Eigen::Index k) {
    check_z(z);
    const Eigen::Index p = m.p();
    const double n = static_cast<double>(m.n());
    if (k < 0 || k >= p) throw ParameterError("covariance_schur_terms: index out of range");

    const CVector xk = m.dense().row(k).adjoint();
    CovSchurTerms t;
    t.k = k;
    t.xi_kk = xk.squaredNorm() / n;
    if (p == 1) return t;

    const CMatrix mk = drop_row_col(m.dense(), k, -1);
    const CVector a = mk * xk / n;
    CMatrix wk = mk * mk.adjoint() / n;
    const auto wk_h = HermitianMatrix::from_upper(wk);
    t.s_minor = stieltjes_empirical(eigvalsh(wk_h), z);
    t.expected_Yk = (static_cast<double>(p - 1) / n) * (1.0 + z * t.s_minor);

    CMatrix shifted = wk_h.dense();
    shifted.diagonal().array() -= z;
    t.Yk = a.dot(shifted.partialPivLu().solve(a));
    return t;
}

double covariance_schur_residual(const RectMatrix& m, Complex z) {
    check_z(z);
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < m.p(); ++k) {
        const auto t = covariance_schur_terms(m, z, k);
        sum += 1.0 / (t.xi_kk - z - t.Yk);
    }
    sum /= static_cast<double>(m.p());
    return std::abs(sum - stieltjes_empirical(covariance_eigenvalues(m), z));
}

Complex CovRDecomposition::recombine(Complex z) const {
    check_z(z);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) sum += lambda[j] * R[j] / (lambda[j] - z);
    return sum / static_cast<double>(n);
}

CovRDecomposition covariance_r_decomposition(const RectMatrix& m, Eigen::Index k) {
    const Eigen::Index p = m.p();
    if (k < 0 || k >= p) throw ParameterError("covariance_r_decomposition: index out of range");
    CovRDecomposition out;
    out.n = m.n();
    if (p == 1) return out;
    const CVector xk = m.dense().row(k).adjoint();
    const Svd s = thin_svd(drop_row_col(m.dense(), k, -1));
    const CVector proj = s.right.adjoint() * xk;
    const double n = static_cast<double>(m.n());
    for (Eigen::Index j = 0; j < s.sigma.size(); ++j) {
        out.lambda.push_back(s.sigma(j) * s.sigma(j) / n);
        out.R.push_back(std::norm(proj(j)) - 1.0);
    }
    return out;
}

double mp_self_consistency_residual(std::span<const double> eigs, Complex z, double y) {
    if (!(y > 0.0 && y <= 1.0)) throw ParameterError("MP ratio y must lie in (0, 1]");
    const Complex s = stieltjes_empirical(eigs, z);
    const Complex d = y + z - 1.0 + y * z * s;
    if (d == Complex(0.0)) throw SingularityError("mp_self_consistency_residual: denominator vanishes");
    return std::abs(s + 1.0 / d);
}

namespace {

struct SingularSplit {
    double sigma_i2 = 0.0;
    Complex coord;        ///< deleted coordinate of the selected singular vector
    RVector minor_sigma2;
    RVector weights;      ///< |w_j* X|^2
    double x_norm2 = 0.0;
    double gap = 0.0;     ///< eigenvalue units
};

SingularSplit singular_split(const RectMatrix& m, Eigen::Index i, Side side) {
    const Eigen::Index p = m.p();
    const Eigen::Index n = m.n();
    if (i < 0 || i >= p) throw ParameterError("singular identity: index out of range");
    if (side == Side::right && n < 2) throw ShapeError("column deletion needs n >= 2");

    const Svd full = thin_svd(m.dense());
    SingularSplit s;
    s.sigma_i2 = full.sigma(i) * full.sigma(i);
    CVector x;
    RVector sig;
    CMatrix basis;
    if (side == Side::right) {
        x = m.dense().col(n - 1);
        s.coord = full.right(n - 1, i);
        if (n - 1 >= 1) {
            const Svd minor = thin_svd(m.dense().leftCols(n - 1));
            sig = minor.sigma;
            basis = minor.left;
        }
    } else {
        x = m.dense().row(p - 1).adjoint();
        s.coord = full.left(p - 1, i);
        if (p >= 2) {
            const Svd minor = thin_svd(m.dense().topRows(p - 1));
            sig = minor.sigma;
            basis = minor.right;
        }
    }
    s.x_norm2 = x.squaredNorm();
    s.minor_sigma2 = sig.array().square();
    s.weights = sig.size() > 0 ? RVector((basis.adjoint() * x).cwiseAbs2()) : RVector();
    s.gap = sig.size() > 0 ? (s.minor_sigma2.array() - s.sigma_i2).abs().minCoeff() / static_cast<double>(n)
                           : HUGE_VAL;
    if (!(s.gap > kCollisionThreshold))
        throw NearCollisionError("singular value of the minor collides with sigma_i", s.gap);
    return s;
}

}  // namespace

IdentityCheck singular_entry_identity(const RectMatrix& m, Eigen::Index i, Side side) {
    const SingularSplit s = singular_split(m, i, side);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < s.minor_sigma2.size(); ++j) {
        const double d = s.minor_sigma2(j) - s.sigma_i2;
        sum += s.minor_sigma2(j) * s.weights(j) / (d * d);
    }
    IdentityCheck c;
    c.lhs = std::norm(s.coord);
    c.rhs = 1.0 / (1.0 + sum);
    c.collision_gap = s.gap;
    c.scale = std::max(c.lhs, c.rhs);
    return c;
}

IdentityCheck singular_interlacing_identity(const RectMatrix& m, Eigen::Index i, Side side) {
    const SingularSplit s = singular_split(m, i, side);
    double sum = 0.0, mag = 0.0;
    for (Eigen::Index j = 0; j < s.minor_sigma2.size(); ++j) {
        const double term = s.minor_sigma2(j) * s.weights(j) / (s.minor_sigma2(j) - s.sigma_i2);
        sum += term;
        mag += std::abs(term);
    }
    IdentityCheck c;
    c.lhs = sum;
    c.rhs = s.x_norm2 - s.sigma_i2;
    c.collision_gap = s.gap;
    c.scale = std::max({std::abs(c.lhs), std::abs(c.rhs), mag, s.x_norm2, s.sigma_i2});
    return c;
}

double pv_mp(double lambda, double y, double excision) {
    if (!(excision > 0.0)) throw ParameterError("pv_mp: excision must be positive");
    const auto [a, b] = mp_edges(y);
    // y x rho_MP(x) = sqrt((b - x)(x - a)) / (2 pi)
    auto g = [a = a, b = b](double x) {
        const double v = (b - x) * (x - a);
        return v > 0.0 ? std::sqrt(v) / (2.0 * std::numbers::pi) : 0.0;
    };
    auto integrand = [&](double x) { return g(x) / (x - lambda); };

    if (lambda < a || lambda > b) return integrate_adaptive(integrand, a, b, 1e-13);

    auto excised = [&](double h) {
        double total = 0.0;
        if (lambda - h > a) total += integrate_adaptive(integrand, a, lambda - h, 1e-13);
        if (lambda + h < b) total += integrate_adaptive(integrand, lambda + h, b, 1e-13);
        return total;
    };

    // Neville-style Richardson table in t = sqrt(h): h -> h/4 halves t, and
    // the error expansion runs over powers of t (half-integer powers of h
    // appear when the excision touches an edge).
    constexpr int levels = 7;
    double table[levels][levels];
    double h = excision;
    for (int r = 0; r < levels; ++r, h /= 4.0) {
        table[r][0] = excised(h);
        double factor = 1.0;
        for (int c = 1; c <= r; ++c) {
            factor *= 2.0;
            table[r][c] = table[r][c - 1] + (table[r][c - 1] - table[r - 1][c - 1]) / (factor - 1.0);
        }
    }
    return table[levels - 1][levels - 1];
}

Region classify_mp_region(double lambda, double y, double eps) {
    if (!(eps > 0.0)) throw ParameterError("classify_mp_region: eps must be positive");
    const auto [a, b] = mp_edges(y);
    if (lambda >= a + eps && lambda <= b - eps) return Region::bulk;
    if (a == 0.0) {
        if (lambda >= 4.0 - eps && lambda <= 4.0) return Region::edge;
        return Region::outside;
    }
    if (std::abs(lambda - a) <= eps || std::abs(lambda - b) <= eps) return Region::edge;
    return Region::outside;
}

std::vector<DelocRecord> singular_vec_inf_norms(const RectMatrix& m, double eps, std::uint64_t seed) {
    const SingularTriplets t = singular_triplets(m);
    const Eigen::Index p = m.p();
    const double n = static_cast<double>(m.n());
    const double y = static_cast<double>(p) / n;
    const double logn = std::log(n);
    std::vector<DelocRecord> out;
    out.reserve(2 * p);
    for (Side side : {Side::left, Side::right}) {
        const CMatrix& vecs = side == Side::left ? t.left : t.right;
        const double dim = static_cast<double>(vecs.rows());
        for (Eigen::Index i = 0; i < p; ++i) {
            DelocRecord r;
            r.n = m.n();
            r.seed = seed;
            r.index = i;
            r.lambda = t.sigma(i) * t.sigma(i) / n;
            r.region = classify_mp_region(r.lambda, y, eps);
            r.inf_norm = vecs.col(i).cwiseAbs().maxCoeff();
            r.scaled_bulk = std::sqrt(n) * r.inf_norm / std::sqrt(logn);
            r.scaled_edge = std::sqrt(n) * r.inf_norm / logn;
            r.scaled_bulk_dim = std::sqrt(dim) * r.inf_norm / std::sqrt(logn);
            const bool low = i > 0 && t.sigma(i) - t.sigma(i - 1) < 1e-10;
            const bool high = i + 1 < p && t.sigma(i + 1) - t.sigma(i) < 1e-10;
            r.multiple = low || high;
            r.side = side;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace rmtlab
