#include "rmtlab/locallaw.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/error.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab {

namespace {

void check_z(Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("resolvent requires Im z > 0");
}

void check_index(Eigen::Index k, Eigen::Index n) {
    if (k < 0 || k >= n) throw ParameterError("index out of range");
}

CVector column_without(const CMatrix& w, Eigen::Index k) {
    const Eigen::Index n = w.rows();
    CVector b(n - 1);
    for (Eigen::Index i = 0, r = 0; i < n; ++i)
        if (i != k) b(r++) = w(i, k);
    return b;
}

}  // namespace

SchurTerms schur_terms(const HermitianMatrix& m, Complex z, Eigen::Index k, SchurRoute route) {
    check_z(z);
    const Eigen::Index n = m.n();
    check_index(k, n);
    const HermitianMatrix w = m.scaled(1.0 / std::sqrt(static_cast<double>(n)));

    SchurTerms t;
    t.k = k;
    t.diag = w.dense()(k, k).real();
    if (n == 1) return t;

    const HermitianMatrix wk = w.minor(k);
    const CVector a = column_without(w.dense(), k);
    const auto minor_eigs = eigvalsh(wk);
    t.s_minor = stieltjes_empirical(minor_eigs, z);
    t.expected_Yk = (1.0 - 1.0 / static_cast<double>(n)) * t.s_minor;

    if (route == SchurRoute::solve) {
        CMatrix shifted = wk.dense();
        shifted.diagonal().array() -= z;
        const CVector x = shifted.partialPivLu().solve(a);
        t.Yk = a.dot(x);
    } else {
        const auto dec = eig_decompose(wk);
        const CVector proj = dec.eigenvectors.adjoint() * a;
        Complex sum = 0.0;
        for (Eigen::Index j = 0; j < proj.size(); ++j) sum += std::norm(proj(j)) / (dec.eigenvalues(j) - z);
        t.Yk = sum;
    }
    return t;
}

double schur_identity_residual(const HermitianMatrix& m, Complex z) {
    check_z(z);
    const Eigen::Index n = m.n();
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const SchurTerms t = schur_terms(m, z, k);
        sum += 1.0 / (t.diag - z - t.Yk);
    }
    sum /= static_cast<double>(n);
    const auto eigs = eigvalsh(m.scaled(1.0 / std::sqrt(static_cast<double>(n))));
    return std::abs(sum - stieltjes_empirical(eigs, z));
}

Complex yk_deviation(const HermitianMatrix& m, Complex z, Eigen::Index k) {
    const SchurTerms t = schur_terms(m, z, k);
    return t.Yk - t.expected_Yk;
}

Complex RDecomposition::recombine(Complex z) const {
    check_z(z);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) sum += R[j] / (lambda[j] - z);
    return sum / static_cast<double>(n);
}

RDecomposition yk_r_decomposition(const HermitianMatrix& m, Eigen::Index k) {
    const Eigen::Index n = m.n();
    check_index(k, n);
    RDecomposition out;
    out.n = n;
    if (n == 1) return out;
    const double rn = std::sqrt(static_cast<double>(n));
    const HermitianMatrix w = m.scaled(1.0 / rn);
    const auto dec = eig_decompose(w.minor(k));
    const CVector xk = rn * column_without(w.dense(), k);
    const CVector proj = dec.eigenvectors.adjoint() * xk;
    for (Eigen::Index j = 0; j < proj.size(); ++j) {
        out.lambda.push_back(dec.eigenvalues(j));
        out.R.push_back(std::norm(proj(j)) - 1.0);
    }
    return out;
}

double self_consistency_residual(std::span<const double> eigs, Complex z) {
    const Complex s = stieltjes_empirical(eigs, z);
    const Complex d = z + s;
    if (d == Complex(0.0)) throw SingularityError("self_consistency_residual: z + s_n(z) = 0");
    return std::abs(s + 1.0 / d);
}

double default_eta(std::int64_t n) {
    if (n < 2) throw ParameterError("default_eta: n must be >= 2");
    const double nn = static_cast<double>(n);
    return 10.0 * std::log(nn) / nn;
}

namespace {

WindowRow make_row(std::span<const double> eigs, const Density& density, double lo, double hi) {
    const double n = static_cast<double>(eigs.size());
    const Interval iv(lo, hi);
    WindowRow row;
    row.lo = lo;
    row.hi = hi;
    row.count = count_interval(eigs, iv);
    row.expected = n * density.mass(iv);
    const double diff = std::abs(static_cast<double>(row.count) - row.expected);
    row.rel_dev = row.expected > 0.0 ? diff / row.expected : HUGE_VAL;
    row.abs_dev = diff / (n * iv.length());
    return row;
}

/// Window starts lo, lo + stride, ... with the last window ending at hi.
std::vector<double> window_starts(double lo, double hi, double scale, double stride) {
    std::vector<double> starts;
    const double last = hi - scale;
    const double slack = 1e-12 * std::max(1.0, std::abs(hi));
    for (std::size_t i = 0;; ++i) {
        const double s = lo + static_cast<double>(i) * stride;
        if (s > last + slack) break;
        starts.push_back(s);
    }
    if (starts.empty() || starts.back() < last - slack) starts.push_back(last);
    return starts;
}

}  // namespace

LawDeviation law_deviation(std::span<const double> eigs, const Density& density, double scale,
                           const Interval& bulk, double stride_frac) {
    if (!(scale > 0.0)) throw ParameterError("law_deviation: scale must be positive");
    if (!(stride_frac > 0.0 && stride_frac <= 1.0))
        throw ParameterError("law_deviation: stride_frac must lie in (0, 1]");
    if (eigs.empty()) throw InsufficientDataError("law_deviation: empty spectrum");
    const Interval support = density.support();
    if (bulk.lo < support.lo || bulk.hi > support.hi)
        throw ParameterError("law_deviation: bulk must lie inside the density support");

    LawDeviation out;
    if (scale >= bulk.length()) {
        out.windows.push_back(make_row(eigs, density, bulk.lo, bulk.hi));
    } else {
        for (double s : window_starts(bulk.lo, bulk.hi, scale, stride_frac * scale))
            out.windows.push_back(make_row(eigs, density, s, s + scale));
    }
    if (out.windows.empty()) throw InsufficientDataError("law_deviation: empty window set");
    for (const auto& w : out.windows) {
        out.max_rel_dev = std::max(out.max_rel_dev, w.rel_dev);
        out.max_abs_dev = std::max(out.max_abs_dev, w.abs_dev);
    }
    return out;
}

double crude_count_check(std::span<const double> eigs, std::int64_t n, double scale, double stride_frac) {
    if (!(scale > 0.0)) throw ParameterError("crude_count_check: scale must be positive");
    if (!(stride_frac > 0.0 && stride_frac <= 1.0))
        throw ParameterError("crude_count_check: stride_frac must lie in (0, 1]");
    if (n < 1) throw ParameterError("crude_count_check: n must be >= 1");
    if (eigs.empty()) return 0.0;
    if (!std::is_sorted(eigs.begin(), eigs.end()))
        throw ContractError("crude_count_check: eigenvalues must be sorted ascending");
    const double lo = eigs.front();
    const double hi = eigs.back();
    const double stride = stride_frac * scale;
    const double denom = static_cast<double>(n) * scale;
    double best = 0.0;
    for (std::size_t i = 0;; ++i) {
        const double s = lo + static_cast<double>(i) * stride;
        if (s > hi) break;
        const auto count = count_interval(eigs, Interval(s, s + scale));
        best = std::max(best, static_cast<double>(count) / denom);
    }
    return best;
}

ThresholdEstimate threshold_scan(const DistSpec& dist, std::int64_t n, std::span<const double> multiples,
                                 double delta, std::size_t trials, const Interval& bulk,
                                 std::uint64_t base_seed, int workers, bool keep_rows) {
    if (n < 2) throw ParameterError("threshold_scan: n must be >= 2");
    if (trials < 1) throw ParameterError("threshold_scan: trials must be >= 1");
    if (multiples.empty()) throw ParameterError("threshold_scan: no scales");
    if (!(delta > 0.0)) throw ParameterError("threshold_scan: delta must be positive");
    for (std::size_t i = 0; i < multiples.size(); ++i) {
        if (!(multiples[i] > 0.0)) throw ParameterError("threshold_scan: scales must be positive");
        if (i > 0 && !(multiples[i] > multiples[i - 1]))
            throw ContractError("threshold_scan: scales must be strictly ascending");
    }

    ThresholdEstimate est;
    est.multiples.assign(multiples.begin(), multiples.end());
    est.unit = std::log(static_cast<double>(n)) / static_cast<double>(n);
    est.delta = delta;
    const Density sc = Density::semicircle();

    auto per_trial = parallel_map(trials, workers, [&](std::size_t trial) {
        const auto w = sample_wigner(dist, n, derive_seed(base_seed, trial), true);
        const auto eigs = eigvalsh(w);
        std::vector<LawDeviation> devs;
        devs.reserve(multiples.size());
        for (double m : multiples) devs.push_back(law_deviation(eigs, sc, m * est.unit, bulk));
        return devs;
    });

    est.max_rel_dev.assign(multiples.size(), 0.0);
    for (std::size_t s = 0; s < multiples.size(); ++s) {
        for (std::size_t trial = 0; trial < trials; ++trial) {
            const LawDeviation& d = per_trial[trial][s];
            est.max_rel_dev[s] = std::max(est.max_rel_dev[s], d.max_rel_dev);
            if (keep_rows)
                for (const auto& row : d.windows) est.rows.push_back({multiples[s] * est.unit, trial, row});
        }
    }
    for (std::size_t s = 0; s < multiples.size(); ++s) {
        if (est.max_rel_dev[s] <= delta) {
            est.threshold_multiple = multiples[s];
            est.threshold_scale = multiples[s] * est.unit;
            break;
        }
    }
    return est;
}

double max_monotonicity_violation(std::span<const double> curve) {
    double worst = 0.0;
    double running_min = HUGE_VAL;
    for (double v : curve) {
        if (running_min < HUGE_VAL) worst = std::max(worst, v - running_min);
        running_min = std::min(running_min, v);
    }
    return worst;
}

}  // namespace rmtlab
