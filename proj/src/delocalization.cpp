#include "rmtlab/delocalization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rmtlab/error.hpp"

namespace rmtlab {

std::string_view to_string(Region region) {
    switch (region) {
        case Region::bulk: return "bulk";
        case Region::edge: return "edge";
        case Region::outside: return "outside";
    }
    return "unknown";
}

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

Region classify_region(double lambda, double eps) {
    if (!(eps > 0.0 && eps < 2.0)) throw ParameterError("classify_region: eps must lie in (0, 2)");
    const double a = std::abs(lambda);
    if (a <= 2.0 - eps) return Region::bulk;
    if (a <= 2.0 + eps) return Region::edge;
    return Region::outside;
}

std::vector<DelocRecord> eigvec_inf_norms(const SpectralDecomposition& decomp, std::int64_t n,
                                          std::uint64_t seed, double eps) {
    const Eigen::Index m = decomp.eigenvalues.size();
    if (decomp.eigenvectors.cols() != m) throw ShapeError("eigvec_inf_norms: malformed decomposition");
    const double rn = std::sqrt(static_cast<double>(n));
    const double logn = std::log(static_cast<double>(n));
    std::vector<DelocRecord> out;
    out.reserve(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        DelocRecord r;
        r.n = n;
        r.seed = seed;
        r.index = i;
        r.lambda = decomp.eigenvalues(i);
        r.region = classify_region(r.lambda, eps);
        r.inf_norm = decomp.eigenvectors.col(i).cwiseAbs().maxCoeff();
        r.scaled_bulk = rn * r.inf_norm / std::sqrt(logn);
        r.scaled_edge = rn * r.inf_norm / logn;
        r.scaled_bulk_dim = std::sqrt(static_cast<double>(decomp.eigenvectors.rows())) * r.inf_norm / std::sqrt(logn);
        const bool low = i > 0 && r.lambda - decomp.eigenvalues(i - 1) < 1e-10;
        const bool high = i + 1 < m && decomp.eigenvalues(i + 1) - r.lambda < 1e-10;
        r.multiple = low || high;
        out.push_back(r);
    }
    return out;
}

double IdentityCheck::rel_error() const {
    const double s = std::max(scale, 1e-300);
    return std::abs(lhs - rhs) / s;
}

namespace {

struct Split {
    double lambda_i = 0.0;
    Complex x;             ///< coordinate `coord` of u_i(W)
    RVector minor_eigs;
    RVector weights;       ///< |u_j(W')* Y|^2
    double diag = 0.0;     ///< W_cc
    double gap = 0.0;
};

Split split(const HermitianMatrix& w, Eigen::Index i, Eigen::Index coord) {
    const Eigen::Index n = w.n();
    if (n < 2) throw ShapeError("eigenvector identities need n >= 2");
    if (i < 0 || i >= n || coord < 0 || coord >= n) throw ParameterError("index out of range");

    const auto full = eig_decompose(w);
    const auto minor = eig_decompose(w.minor(coord));
    CVector y(n - 1);
    for (Eigen::Index r = 0, t = 0; r < n; ++r)
        if (r != coord) y(t++) = w.dense()(r, coord);

    Split s;
    s.lambda_i = full.eigenvalues(i);
    s.x = full.eigenvectors(coord, i);
    s.minor_eigs = minor.eigenvalues;
    s.weights = (minor.eigenvectors.adjoint() * y).cwiseAbs2();
    s.diag = w.dense()(coord, coord).real();
    s.gap = (s.minor_eigs.array() - s.lambda_i).abs().minCoeff();
    if (!(s.gap > kCollisionThreshold))
        throw NearCollisionError("eigenvalue of the minor collides with lambda_i", s.gap);
    return s;
}

}  // namespace

IdentityCheck entry_identity(const HermitianMatrix& w, Eigen::Index i, Eigen::Index coord) {
    const Split s = split(w, i, coord);
    const RVector d = s.minor_eigs.array() - s.lambda_i;
    const double sum = (s.weights.array() / d.array().square()).sum();
    IdentityCheck c;
    c.lhs = std::norm(s.x);
    c.rhs = 1.0 / (1.0 + sum);
    c.collision_gap = s.gap;
    c.scale = std::max(c.lhs, c.rhs);
    return c;
}

IdentityCheck interlacing_identity(const HermitianMatrix& w, Eigen::Index i, std::optional<Eigen::Index> coord) {
    const Split s = split(w, i, coord.value_or(w.n() - 1));
    const RVector terms = s.weights.array() / (s.minor_eigs.array() - s.lambda_i);
    IdentityCheck c;
    c.lhs = terms.sum();
    c.rhs = s.diag - s.lambda_i;
    c.collision_gap = s.gap;
    // The sum may cancel; measure against the size of its terms as well.
    c.scale = std::max({std::abs(c.lhs), std::abs(c.rhs), terms.cwiseAbs().sum(), std::abs(s.diag),
                        std::abs(s.lambda_i)});
    return c;
}

DelocFit deloc_scaling_fit(std::span<const DelocRecord> records) {
    std::map<std::int64_t, DelocFitRow> by_n;
    for (const auto& r : records) {
        auto& row = by_n[r.n];
        row.n = r.n;
        if (r.region == Region::bulk) {
            row.max_scaled_bulk = std::max(row.max_scaled_bulk, r.scaled_bulk);
            ++row.bulk_records;
        } else if (r.region == Region::edge) {
            row.max_scaled_edge = std::max(row.max_scaled_edge.value_or(0.0), r.scaled_edge);
            ++row.edge_records;
        }
    }
    DelocFit fit;
    std::vector<double> xs, ys;
    for (const auto& [n, row] : by_n) {
        fit.rows.push_back(row);
        if (row.bulk_records == 0) continue;
        const double logn = std::log(static_cast<double>(n));
        if (!(logn > 0.0)) continue;
        xs.push_back(std::log(logn));
        // sqrt(n) |u|_inf = scaled_bulk * sqrt(log n)
        ys.push_back(std::log(row.max_scaled_bulk * std::sqrt(logn)));
    }
    if (xs.size() < 3) throw InsufficientDataError("deloc_scaling_fit: need bulk records at >= 3 distinct n");
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
    }
    fit.slope = sxy / sxx;
    return fit;
}

}  // namespace rmtlab
