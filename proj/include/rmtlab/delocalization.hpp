#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rmtlab/spectral.hpp"

namespace rmtlab {

enum class Region { bulk, edge, outside };

std::string_view to_string(Region region);

/// bulk if |lambda| <= 2 - eps, edge if 2 - eps < |lambda| <= 2 + eps,
/// outside otherwise. Requires 0 < eps < 2.
Region classify_region(double lambda, double eps);

/// Which singular vector a covariance record describes.
enum class Side { left, right };

std::string_view to_string(Side side);

struct DelocRecord {
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    Eigen::Index index = 0;
    double lambda = 0.0;
    Region region = Region::bulk;
    double inf_norm = 0.0;
    double scaled_bulk = 0.0;  ///< sqrt(n) inf_norm / sqrt(log n)
    double scaled_edge = 0.0;  ///< sqrt(n) inf_norm / log n
    bool multiple = false;     ///< eigenvalue within 1e-10 of a neighbour
    /// Singular-vector records only.
    std::optional<Side> side;
    /// sqrt(dim) inf_norm / sqrt(log n) with dim the vector length (p for
    /// left vectors, n otherwise).
    double scaled_bulk_dim = 0.0;
};

/// One record per eigenpair of `decomp` (W = M/sqrt(n) spectrum).
std::vector<DelocRecord> eigvec_inf_norms(const SpectralDecomposition& decomp, std::int64_t n,
                                          std::uint64_t seed, double eps = 0.1);

/// Both sides of an eigenvector identity and the distance from lambda_i(W)
/// to the nearest eigenvalue of the minor.
struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double collision_gap = 0.0;
    /// Magnitude the error is measured against (see rel_error).
    double scale = 0.0;

    /// |lhs - rhs| / scale.
    double rel_error() const;
};

/// Collision gaps at or below this raise NearCollisionError.
inline constexpr double kCollisionThreshold = 1e-8;

/// |x|^2 = 1 / (1 + sum_j |u_j(W')* Y|^2 / (lambda_j(W') - lambda_i(W))^2)
/// where x is coordinate `coord` of u_i(W), W' deletes row/column `coord` and
/// Y is column `coord` without its diagonal entry. The lemma's block form is
/// coord = 0; other coordinates are reached by a permutation.
IdentityCheck entry_identity(const HermitianMatrix& w, Eigen::Index i, Eigen::Index coord = 0);

/// sum_j |u_j(W')* Y|^2 / (lambda_j(W') - lambda_i(W)) = W_cc - lambda_i(W),
/// with W' and Y as above; coord defaults to the last coordinate.
IdentityCheck interlacing_identity(const HermitianMatrix& w, Eigen::Index i,
                                   std::optional<Eigen::Index> coord = std::nullopt);

struct DelocFitRow {
    std::int64_t n = 0;
    double max_scaled_bulk = 0.0;
    std::optional<double> max_scaled_edge;
    std::size_t bulk_records = 0;
    std::size_t edge_records = 0;
};

struct DelocFit {
    std::vector<DelocFitRow> rows;
    /// Least-squares slope of log(max bulk sqrt(n) |u|_inf) against log log n.
    double slope = 0.0;
};

/// Requires bulk records at three or more distinct n.
DelocFit deloc_scaling_fit(std::span<const DelocRecord> records);

}  // namespace rmtlab
