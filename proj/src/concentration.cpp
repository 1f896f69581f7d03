#include "rmtlab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmtlab/error.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

WeightedFrame::WeightedFrame(CMatrix basis, std::vector<double> weights)
    : basis_(std::move(basis)), weights_(std::move(weights)) {
    if (static_cast<Eigen::Index>(weights_.size()) != basis_.cols())
        throw ParameterError("WeightedFrame: one weight per basis column required");
    for (double c : weights_)
        if (!(c >= 0.0 && c <= 1.0)) throw ParameterError("WeightedFrame: weights must lie in [0, 1]");
    const CMatrix gram = basis_.adjoint() * basis_;
    const CMatrix eye = CMatrix::Identity(basis_.cols(), basis_.cols());
    if (basis_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > 1e-8)
        throw ContractError("WeightedFrame: basis columns are not orthonormal");
}

WeightedFrame WeightedFrame::coordinate(Eigen::Index n, Eigen::Index d) {
    if (d < 0 || d > n) throw ParameterError("WeightedFrame::coordinate: need 0 <= d <= n");
    return WeightedFrame(CMatrix::Identity(n, d), std::vector<double>(d, 1.0));
}

double WeightedFrame::weight_sum() const {
    double s = 0.0;
    for (double c : weights_) s += c;
    return s;
}

double weighted_projection(const RandomVector& x, const WeightedFrame& frame) {
    if (x.size() != frame.n()) throw ShapeError("weighted_projection: dimension mismatch");
    const CVector coeffs = frame.basis().adjoint() * x.entries;
    double s = 0.0;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) s += frame.weights()[j] * std::norm(coeffs(j));
    return std::sqrt(s);
}

double projection_deviation(const RandomVector& x, const WeightedFrame& frame) {
    return weighted_projection(x, frame) - std::sqrt(frame.weight_sum());
}

Complex quadratic_deviation(const RandomVector& x, const CMatrix& a) {
    if (a.rows() != a.cols() || a.rows() != x.size())
        throw ShapeError("quadratic_deviation: dimension mismatch");
    return x.entries.dot(a * x.entries) - a.trace();
}

double spectral_quadratic_deviation(const RandomVector& x, const HermitianMatrix& a) {
    if (a.n() != x.size()) throw ShapeError("spectral_quadratic_deviation: dimension mismatch");
    const auto dec = eig_decompose(a);
    const RVector w = (dec.eigenvectors.adjoint() * x.entries).cwiseAbs2();
    return dec.eigenvalues.dot(w) - dec.eigenvalues.sum();
}

std::pair<HermitianMatrix, HermitianMatrix> hermitize_split(const CMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("hermitize_split: matrix must be square");
    const Complex i(0.0, 1.0);
    CMatrix plus = a + a.adjoint();
    CMatrix minus = i * (a - a.adjoint());
    return {HermitianMatrix::from_upper(std::move(plus)), HermitianMatrix::from_upper(std::move(minus))};
}

std::pair<HermitianMatrix, HermitianMatrix> psd_split(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.dense());
    if (solver.info() != Eigen::Success) throw DecompositionError("psd_split: eigensolver failed");
    const RVector& lam = solver.eigenvalues();
    const CMatrix& u = solver.eigenvectors();
    const RVector pos = lam.cwiseMax(0.0);
    const RVector neg = (-lam).cwiseMax(0.0);
    CMatrix a1 = u * pos.cast<Complex>().asDiagonal() * u.adjoint();
    CMatrix a2 = u * neg.cast<Complex>().asDiagonal() * u.adjoint();
    return {HermitianMatrix::from_upper(std::move(a1)), HermitianMatrix::from_upper(std::move(a2))};
}

std::pair<HermitianMatrix, HermitianMatrix> psd_split(const CMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("psd_split: matrix must be square");
    return psd_split(HermitianMatrix::from_dense(a, 1e-10));
}

DyadicPartition dyadic_weight_partition(std::span<const double> c, std::int64_t n) {
    if (n < 1) throw ParameterError("dyadic_weight_partition: n must be >= 1");
    DyadicPartition part;
    part.k0 = static_cast<int>(std::floor(10.0 * std::log(static_cast<double>(n))));
    part.blocks.assign(part.k0 + 2, {});
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (!(c[j] >= 0.0 && c[j] <= 1.0))
            throw ParameterError("dyadic_weight_partition: weights must lie in [0, 1]");
        int block = part.k0 + 1;
        for (int k = 0; k <= part.k0; ++k) {
            if (c[j] >= std::ldexp(1.0, -2 * (k + 1))) {
                block = k;
                break;
            }
        }
        part.blocks[block].push_back(j);
    }
    return part;
}

namespace {

constexpr std::pair<EnvelopeKind, std::string_view> kEnvelopeNames[] = {
    {EnvelopeKind::projection, "projection"}, {EnvelopeKind::projection_tv, "projection_tv"},
    {EnvelopeKind::vw1, "vw1"},               {EnvelopeKind::vw2, "vw2"},
    {EnvelopeKind::subexp, "subexp"},         {EnvelopeKind::hw, "hw"},
    {EnvelopeKind::hkz, "hkz"},               {EnvelopeKind::esy1, "esy1"},
    {EnvelopeKind::esy2, "esy2"},
};

double need(const std::optional<double>& v, const char* name, EnvelopeKind kind) {
    if (!v)
        throw ParameterError(std::string("envelope ") + std::string(to_string(kind)) + " requires the " +
                             name + " norm");
    return *v;
}

}  // namespace

std::string_view to_string(EnvelopeKind kind) {
    for (const auto& [k, name] : kEnvelopeNames)
        if (k == kind) return name;
    return "unknown";
}

EnvelopeKind envelope_kind_from_string(std::string_view name) {
    for (const auto& [k, s] : kEnvelopeNames)
        if (s == name) return k;
    throw ParameterError("unknown envelope kind '" + std::string(name) + "'");
}

MatrixNorms MatrixNorms::of(const CMatrix& a) {
    return {frobenius_norm(a), spectral_norm(a), spectral_norm(entrywise_abs(a))};
}

TailEnvelope TailEnvelope::make(EnvelopeKind kind) {
    TailEnvelope env;
    env.kind = kind;
    if (kind == EnvelopeKind::projection_tv) {
        env.C = 10.0;
        env.Cprime = 1.0 / 20.0;
    }
    return env;
}

void TailEnvelope::validate() const {
    if (!(C > 0.0) || !(Cprime > 0.0)) throw ParameterError("envelope: C and C' must be positive");
    if (!(K > 0.0)) throw ParameterError("envelope: K must be positive");
    for (const auto& v : {norms.frobenius, norms.spectral, norms.spectral_abs})
        if (v && !(*v >= 0.0)) throw ParameterError("envelope: norms must be nonnegative");
    if (norms.frobenius && norms.spectral && *norms.spectral > *norms.frobenius * (1.0 + 1e-12))
        throw ParameterError("envelope: spectral norm exceeds Frobenius norm");
    switch (kind) {
        case EnvelopeKind::projection:
        case EnvelopeKind::projection_tv:
            break;
        case EnvelopeKind::vw1:
        case EnvelopeKind::vw2:
        case EnvelopeKind::subexp:
        case EnvelopeKind::hkz:
            need(norms.frobenius, "frobenius", kind);
            need(norms.spectral, "spectral", kind);
            break;
        case EnvelopeKind::hw:
            need(norms.frobenius, "frobenius", kind);
            need(norms.spectral_abs, "spectral_abs", kind);
            break;
        case EnvelopeKind::esy1:
        case EnvelopeKind::esy2:
            need(norms.frobenius, "frobenius", kind);
            break;
    }
    if ((kind == EnvelopeKind::vw1 || kind == EnvelopeKind::vw2 || kind == EnvelopeKind::subexp) && n < 2)
        throw ParameterError("envelope: n must be >= 2 so that log n > 0");
    if ((kind == EnvelopeKind::subexp || kind == EnvelopeKind::esy2) && !(alpha > 0.0))
        throw ParameterError("envelope: alpha must be positive");
    if (!(n_eps1 >= 0.0)) throw ParameterError("envelope: n_eps1 must be nonnegative");
}

double tail_envelope_eval(const TailEnvelope& env, double t) {
    env.validate();
    if (!(t >= 0.0)) throw DomainError("tail_envelope_eval: t must be >= 0");
    const double logn = std::log(static_cast<double>(env.n));
    // t / 0 = inf for a zero norm, which makes that branch irrelevant to the min
    // (the statistic is then degenerate along it).
    auto ratio = [](double num, double den) {
        return den > 0.0 ? num / den : (num > 0.0 ? HUGE_VAL : 0.0);
    };
    switch (env.kind) {
        case EnvelopeKind::projection:
        case EnvelopeKind::projection_tv:
            return env.C * std::exp(-env.Cprime * t * t / (env.K * env.K));
        case EnvelopeKind::vw1:
        case EnvelopeKind::vw2: {
            const double f = *env.norms.frobenius, s = *env.norms.spectral;
            const double m = std::min(ratio(t * t, f * f * logn), ratio(t, s));
            const double base = env.C * logn * std::exp(-env.Cprime * m / (env.K * env.K));
            return env.kind == EnvelopeKind::vw2 ? base + env.n_eps1 : base;
        }
        case EnvelopeKind::subexp: {
            const double f = *env.norms.frobenius, s = *env.norms.spectral;
            const double m = std::min(std::pow(ratio(t, f * std::sqrt(logn)), 1.0 / (env.alpha + 0.5)),
                                      std::pow(ratio(t, s), 1.0 / (2.0 * env.alpha + 1.0)));
            return env.C * std::exp(-env.Cprime * m);
        }
        case EnvelopeKind::hw: {
            const double f = *env.norms.frobenius, b = *env.norms.spectral_abs;
            return env.C * std::exp(-env.Cprime * std::min(ratio(t * t, f * f), ratio(t, b)));
        }
        case EnvelopeKind::hkz: {
            const double f = *env.norms.frobenius, s = *env.norms.spectral;
            return env.C * std::exp(-env.Cprime * std::min(ratio(t * t, f * f), ratio(t, s)));
        }
        case EnvelopeKind::esy1:
            return env.C * std::exp(-env.Cprime * ratio(t, *env.norms.frobenius));
        case EnvelopeKind::esy2:
            return env.C *
                   std::exp(-env.Cprime * std::pow(ratio(t, *env.norms.frobenius), 1.0 / (2.0 + 2.0 * env.alpha)));
    }
    return 0.0;
}

double optimal_K_subexp_logn(double t, double frob, double spec, double alpha, double log_n) {
    if (!(t > 0.0 && frob > 0.0 && spec > 0.0 && alpha > 0.0 && log_n > 0.0))
        throw ParameterError("optimal_K_subexp: all inputs must be positive");
    const double beta = 2.0 + 1.0 / alpha;
    return std::min(std::pow(t / (frob * std::sqrt(log_n)), 2.0 / beta), std::pow(t / spec, 1.0 / beta));
}

double optimal_K_subexp(double t, double frob, double spec, double alpha, std::int64_t n) {
    if (n < 2) throw ParameterError("optimal_K_subexp: n must be >= 2");
    return optimal_K_subexp_logn(t, frob, spec, alpha, std::log(static_cast<double>(n)));
}

double projection_lemma_K(const DistSpec& dist) { return 10.0 * (fourth_moment(dist) + 1.0); }

double truncation_hypothesis(const TruncationReport& report, std::int64_t n) {
    const double nn = static_cast<double>(n);
    return nn * nn * report.K * report.K * (report.eps2 + report.eps3);
}

Eigen::Index statistic_dimension(const Statistic& stat) {
    return std::visit(
        [](const auto& s) -> Eigen::Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ProjectionStatistic>)
                return s.frame.n();
            else
                return s.a.rows();
        },
        stat);
}

std::vector<Complex> sample_statistic(const Statistic& stat, const DistSpec& dist,
                                      std::size_t trials, std::uint64_t base_seed, int workers) {
    dist.validate();
    const Eigen::Index n = statistic_dimension(stat);
    if (n < 1) throw ParameterError("sample_statistic: dimension must be >= 1");
    if (const auto* q = std::get_if<QuadraticStatistic>(&stat); q && q->a.rows() != q->a.cols())
        throw ShapeError("sample_statistic: quadratic form matrix must be square");
    return parallel_map(trials, workers, [&](std::size_t i) -> Complex {
        const RandomVector x = sample_vector(dist, n, derive_seed(base_seed, i));
        if (const auto* p = std::get_if<ProjectionStatistic>(&stat)) return projection_deviation(x, p->frame);
        return quadratic_deviation(x, std::get<QuadraticStatistic>(stat).a);
    });
}

EmpiricalTail survival_from_samples(std::span<const Complex> values, std::span<const double> t_grid) {
    if (t_grid.empty()) throw ParameterError("empirical tail: empty t grid");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw ContractError("empirical tail: t grid must be ascending");
    if (values.empty()) throw InsufficientDataError("empirical tail: no samples");
    std::vector<double> mags;
    mags.reserve(values.size());
    for (const Complex& v : values) mags.push_back(std::abs(v));
    std::sort(mags.begin(), mags.end());

    EmpiricalTail out;
    out.trials = values.size();
    out.t_grid.assign(t_grid.begin(), t_grid.end());
    const double m = static_cast<double>(values.size());
    for (double t : t_grid) {
        const auto at_least = mags.end() - std::lower_bound(mags.begin(), mags.end(), t);
        const double p = static_cast<double>(at_least) / m;
        out.survival.push_back(p);
        out.std_error.push_back(std::sqrt(p * (1.0 - p) / m));
    }
    return out;
}

EmpiricalTail empirical_tail(const Statistic& stat, const DistSpec& dist,
                             std::span<const double> t_grid, std::size_t trials,
                             std::uint64_t base_seed, int workers) {
    if (t_grid.empty()) throw ParameterError("empirical_tail: empty t grid");
    if (trials < 100) throw ParameterError("empirical_tail: trials must be >= 100");
    const auto values = sample_statistic(stat, dist, trials, base_seed, workers);
    return survival_from_samples(values, t_grid);
}

}  // namespace rmtlab
