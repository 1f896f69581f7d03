#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/matrix.hpp"

namespace rmtlab {

/// Orthonormal vectors u_1..u_d (columns of `basis`) with weights c_j in [0, 1].
class WeightedFrame {
public:
    /// Throws ContractError if the columns are not orthonormal to 1e-8, and
    /// ParameterError for a weight outside [0, 1] or a size mismatch.
    WeightedFrame(CMatrix basis, std::vector<double> weights);

    /// First `d` standard basis vectors of C^n, all weights 1.
    static WeightedFrame coordinate(Eigen::Index n, Eigen::Index d);

    const CMatrix& basis() const noexcept { return basis_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    Eigen::Index n() const noexcept { return basis_.rows(); }
    Eigen::Index d() const noexcept { return basis_.cols(); }
    double weight_sum() const;

private:
    CMatrix basis_;
    std::vector<double> weights_;
};

/// f(X) = sqrt(sum_j c_j |u_j* X|^2).
double weighted_projection(const RandomVector& x, const WeightedFrame& frame);

/// f(X) - sqrt(sum_j c_j), signed.
double projection_deviation(const RandomVector& x, const WeightedFrame& frame);

/// X* A X - tr A.
Complex quadratic_deviation(const RandomVector& x, const CMatrix& a);

/// sum_j c_j |u_j* X|^2 - sum_j c_j over the eigenpairs (c_j, u_j) of A.
/// Equals quadratic_deviation for Hermitian A.
double spectral_quadratic_deviation(const RandomVector& x, const HermitianMatrix& a);

/// (A + A*, i(A - A*)); both Hermitian. Throws ShapeError for non-square A.
std::pair<HermitianMatrix, HermitianMatrix> hermitize_split(const CMatrix& a);

/// A = A1 - A2 with A1, A2 positive semidefinite (positive and negative
/// spectral parts).
std::pair<HermitianMatrix, HermitianMatrix> psd_split(const HermitianMatrix& a);
/// Same, for a dense matrix that must be Hermitian (ContractError otherwise).
std::pair<HermitianMatrix, HermitianMatrix> psd_split(const CMatrix& a);

/// Blocks J_0..J_{k0+1} of indices, k0 = floor(10 log n).
/// J_k = {j : 4^{-(k+1)} <= c_j <= 4^{-k}} with a weight on a band boundary
/// going to the smaller k; J_{k0+1} holds everything below 4^{-(k0+1)}.
struct DyadicPartition {
    int k0 = 0;
    std::vector<std::vector<std::size_t>> blocks;
};

DyadicPartition dyadic_weight_partition(std::span<const double> c, std::int64_t n);

enum class EnvelopeKind {
    projection,     ///< C exp(-C' t^2 / K^2)
    projection_tv,  ///< same with C = 10, C' = 1/20 (the explicit projection lemma)
    vw1,            ///< C log n exp(-C' K^-2 min{t^2/(|A|_F^2 log n), t/|A|_2})
    vw2,            ///< vw1 + n eps1
    subexp,         ///< C exp(-C' min{(t/(|A|_F sqrt log n))^{1/(a+1/2)}, (t/|A|_2)^{1/(2a+1)}})
    hw,             ///< C exp(-C' min{t^2/|A|_F^2, t/|B|_2}), B = (|a_ij|)
    hkz,            ///< C exp(-C' min{t^2/|A|_F^2, t/|A|_2})
    esy1,           ///< C exp(-C' t/|A|_F)
    esy2,           ///< C exp(-C' (t/|A|_F)^{1/(2+2a)})
};

std::string_view to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(std::string_view name);

struct MatrixNorms {
    std::optional<double> frobenius;
    std::optional<double> spectral;
    std::optional<double> spectral_abs;

    /// All three norms of `a`.
    static MatrixNorms of(const CMatrix& a);
};

struct TailEnvelope {
    EnvelopeKind kind = EnvelopeKind::projection;
    double C = 1.0;
    double Cprime = 1.0;
    MatrixNorms norms;
    std::int64_t n = 2;
    double K = 1.0;
    double alpha = 1.0;
    double n_eps1 = 0.0;  ///< additive n * eps1 term (vw2)

    /// Envelope with the kind's default constants (1, 1 except projection_tv).
    static TailEnvelope make(EnvelopeKind kind);

    /// Throws ParameterError when a norm the kind needs is missing, a value is
    /// out of range, or spectral > frobenius.
    void validate() const;
};

/// Closed-form bound value at t >= 0. Not clipped to [0, 1].
double tail_envelope_eval(const TailEnvelope& env, double t);

/// K = min{(t/(F sqrt L))^{2/(2+1/alpha)}, (t/S)^{1/(2+1/alpha)}} with L = log n.
double optimal_K_subexp(double t, double frob, double spec, double alpha, std::int64_t n);
/// Same with L supplied directly.
double optimal_K_subexp_logn(double t, double frob, double spec, double alpha, double log_n);

/// Smallest K allowed by the projection lemma: 10 (E|xi|^4 + 1).
double projection_lemma_K(const DistSpec& dist);

/// n^2 K^2 (eps2 + eps3): the finite-n value of the truncation hypothesis.
double truncation_hypothesis(const TruncationReport& report, std::int64_t n);

struct ProjectionStatistic {
    WeightedFrame frame;
};
struct QuadraticStatistic {
    CMatrix a;
};
using Statistic = std::variant<ProjectionStatistic, QuadraticStatistic>;

Eigen::Index statistic_dimension(const Statistic& stat);

/// Statistic values for trials 0..trials-1, trial seed derive_seed(base_seed, i).
/// Projection values are real (zero imaginary part).
std::vector<Complex> sample_statistic(const Statistic& stat, const DistSpec& dist,
                                      std::size_t trials, std::uint64_t base_seed, int workers = 1);

struct EmpiricalTail {
    std::vector<double> t_grid;
    std::vector<double> survival;
    std::vector<double> std_error;
    std::size_t trials = 0;
};

/// survival[i] = fraction of |values| >= t_grid[i].
EmpiricalTail survival_from_samples(std::span<const Complex> values, std::span<const double> t_grid);

/// Monte Carlo survival of |statistic|. Requires trials >= 100 and a
/// non-empty ascending grid.
EmpiricalTail empirical_tail(const Statistic& stat, const DistSpec& dist,
                             std::span<const double> t_grid, std::size_t trials,
                             std::uint64_t base_seed, int workers = 1);

}  // namespace rmtlab
