#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rmtlab/covariance.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/locallaw.hpp"

using namespace rmtlab;
using std::numbers::pi;

namespace {

RectMatrix gaussian_rect(oracle::Gen& gen, int p, int n) {
    CMatrix m(p, n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = gen.normal();
    return RectMatrix(m);
}

/// y * int x rho_MP(x) / (x - lambda) dx for lambda outside [a, b], by Simpson
/// in x = c - r cos(theta).
double pv_mp_outside(double lambda, double y) {
    const auto [a, b] = oracle::mp_edges(y);
    const double c = (a + b) / 2, r = (b - a) / 2;
    return oracle::simpson(
        [&](double t) {
            const double s = r * std::sin(t);
            return s * s / (2 * pi) / (c - r * std::cos(t) - lambda);
        },
        0.0, pi, 200000);
}

}  // namespace

TEST_CASE("singular_triplets") {
    CMatrix one(1, 2);
    one << 2, 0;
    const auto t1 = singular_triplets(RectMatrix(one));
    REQUIRE(t1.sigma.size() == 1);
    CHECK(t1.sigma(0) == doctest::Approx(2.0));

    oracle::Gen gen(31);
    oracle::Mat raw(3, std::vector<double>(5));
    CMatrix m(3, 5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = raw[i][j] = gen.normal();
    const RectMatrix rm(m);
    const auto t = singular_triplets(rm);
    const auto ref = oracle::singular_squares(raw);  // eigenvalues of M M^T
    const auto lam = covariance_eigenvalues(rm);
    for (int i = 0; i < 3; ++i) {
        CHECK(t.sigma(i) * t.sigma(i) == doctest::Approx(ref[i]).epsilon(1e-10));
        CHECK(t.sigma(i) * t.sigma(i) == doctest::Approx(5.0 * lam[i]).epsilon(1e-10));
    }
    CHECK(t.sigma(0) <= t.sigma(1));
    CHECK((t.left.adjoint() * t.left - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((t.right.adjoint() * t.right - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    const double norm = t.sigma.maxCoeff();
    for (int i = 0; i < 3; ++i) {
        CHECK((m * t.right.col(i) - t.sigma(i) * t.left.col(i)).norm() < 1e-8 * norm);
        CHECK((m.adjoint() * t.left.col(i) - t.sigma(i) * t.right.col(i)).norm() < 1e-8 * norm);
    }
}

TEST_CASE("covariance_schur_terms") {
    CMatrix row(1, 4);
    row << 1, -2, 0.5, 3;
    const RectMatrix r1(row);
    const Complex z(0.4, 0.3);
    const auto t1 = covariance_schur_terms(r1, z, 0);
    CHECK(t1.xi_kk == doctest::Approx(row.squaredNorm() / 4.0));
    CHECK(t1.Yk == Complex(0.0));
    const auto e1 = covariance_eigenvalues(r1);
    CHECK(std::abs(stieltjes_empirical(e1, z) - 1.0 / (t1.xi_kk - z)) < 1e-14);
    CHECK(covariance_schur_residual(r1, z) < 1e-14);

    const auto m = sample_rect(DistSpec::gaussian(), 8, 16, 12);
    for (const Complex zz : {Complex(0.5, 0.05), Complex(2.0, 0.5), Complex(-0.5, 1.0)}) CHECK(covariance_schur_residual(m, zz) < 1e-8);

    // p = 400, n = 800 Rademacher: bulk self-consistency at eta = 10 log n / n
    const auto big = sample_rect(DistSpec::rademacher(), 400, 800, 1);
    const auto eigs = covariance_eigenvalues(big);
    const double eta = 10 * std::log(800.0) / 800;
    const auto [a, b] = mp_edges(0.5);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = a + 0.2 + (b - a - 0.4) * i / 40.0;
        worst = std::max(worst, mp_self_consistency_residual(eigs, Complex(x, eta), 0.5));
    }
    CHECK(worst < 0.1);

    CHECK_THROWS_AS(covariance_schur_terms(m, Complex(1, 0), 0), DomainError);
    CHECK_THROWS_AS(covariance_schur_terms(m, z, 8), ParameterError);
    CHECK_THROWS_AS(mp_self_consistency_residual(eigs, z, 1.5), ParameterError);
}

TEST_CASE("covariance R decomposition") {
    const auto m = sample_rect(DistSpec::gaussian(), 6, 10, 4);
    for (Eigen::Index k = 0; k < 6; ++k) {
        const auto r = covariance_r_decomposition(m, k);
        for (const Complex z : {Complex(0.3, 0.1), Complex(1.5, 0.7)}) {
            const auto t = covariance_schur_terms(m, z, k);
            CHECK(std::abs(r.recombine(z) - (t.Yk - t.expected_Yk)) < 1e-10);
        }
    }
}

TEST_CASE("E(Y_k | W_k) by resampling the deleted row") {
    const int p = 32, n = 64;
    const auto base = sample_rect(DistSpec::gaussian(), p, n, 7);
    const Complex z(1.0, 0.2);
    const int reps = 1000;
    Complex mean = 0.0;
    std::vector<Complex> ys;
    Complex expected = 0.0;
    for (int r = 0; r < reps; ++r) {
        CMatrix m = base.dense();
        m.row(p - 1) = sample_vector(DistSpec::gaussian(), n, derive_seed(8, r)).entries.transpose();
        const auto t = covariance_schur_terms(RectMatrix(m), z, p - 1);
        ys.push_back(t.Yk);
        mean += t.Yk;
        expected = t.expected_Yk;  // depends only on the fixed minor
    }
    mean /= static_cast<double>(reps);
    double var_re = 0.0, var_im = 0.0;
    for (const auto& y : ys) {
        var_re += std::pow(y.real() - mean.real(), 2);
        var_im += std::pow(y.imag() - mean.imag(), 2);
    }
    const double se_re = std::sqrt(var_re / (reps - 1) / reps), se_im = std::sqrt(var_im / (reps - 1) / reps);
    CHECK(std::abs(mean.real() - expected.real()) <= 3 * se_re);
    CHECK(std::abs(mean.imag() - expected.imag()) <= 3 * se_im);
}

TEST_CASE("singular entry identity") {
    oracle::Gen gen(33);
    const auto m = gaussian_rect(gen, 4, 6);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Side side : {Side::left, Side::right}) {
            const auto c = singular_entry_identity(m, i, side);
            CHECK(std::abs(c.lhs - c.rhs) < 1e-9);
        }

    // 1 x 2 by hand: M = (a, b), |x|^2 = b^2 / (a^2 + b^2)
    const double a = 1.5, b = -0.7;
    CMatrix h(1, 2);
    h << a, b;
    const auto c = singular_entry_identity(RectMatrix(h), 0, Side::right);
    CHECK(std::abs(c.lhs - b * b / (a * a + b * b)) < 1e-12);
    CHECK(std::abs(c.rhs - b * b / (a * a + b * b)) < 1e-12);
    const auto l = singular_entry_identity(RectMatrix(h), 0, Side::left);
    CHECK(l.lhs == doctest::Approx(1.0));
    CHECK(l.rhs == doctest::Approx(1.0));

    // Appended zero column with p = n: the new zero singular value has right
    // vector e_n, so |x| = 1 = rhs; every other sigma collides with the minor.
    CMatrix z = CMatrix::Zero(3, 3);
    z.leftCols(2) = gaussian_rect(gen, 2, 3).dense().transpose();
    const RectMatrix zm(z);
    const auto c0 = singular_entry_identity(zm, 0, Side::right);
    CHECK(c0.lhs == doctest::Approx(1.0));
    CHECK(c0.rhs == doctest::Approx(1.0));
    CHECK_THROWS_AS(singular_entry_identity(zm, 2, Side::right), NearCollisionError);
    CHECK_THROWS_AS(singular_entry_identity(m, 4, Side::right), ParameterError);
}

TEST_CASE("singular interlacing identity") {
    oracle::Gen gen(34);
    const auto m = gaussian_rect(gen, 4, 6);
    const double norm2 = std::pow(spectral_norm(m.dense()), 2);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Side side : {Side::left, Side::right}) {
            const auto c = singular_interlacing_identity(m, i, side);
            CHECK(std::abs(c.lhs - c.rhs) < 1e-8 * norm2);
        }

    const double a = 1.5, b = -0.7;
    CMatrix h(1, 2);
    h << a, b;
    const auto c = singular_interlacing_identity(RectMatrix(h), 0, Side::right);
    CHECK(std::abs(c.lhs - (-a * a)) < 1e-12);
    CHECK(std::abs(c.rhs - (-a * a)) < 1e-12);

    // X = 0 at the decoupled zero singular value: lhs = 0 = |X|^2 - sigma^2
    CMatrix z = CMatrix::Zero(3, 3);
    z.leftCols(2) = gaussian_rect(gen, 2, 3).dense().transpose();
    const auto c0 = singular_interlacing_identity(RectMatrix(z), 0, Side::right);
    CHECK(std::abs(c0.lhs) < 1e-12);
    CHECK(std::abs(c0.rhs) < 1e-12);
}

TEST_CASE("pv_mp") {
    const double y = 0.5;
    const auto [a, b] = mp_edges(y);
    CHECK(std::abs(pv_mp(a, y) - std::sqrt(y)) < 0.05);
    CHECK(std::abs(pv_mp(b, y) + std::sqrt(y)) < 0.05);
    CHECK(pv_mp(10.0, y) == doctest::Approx(pv_mp_outside(10.0, y)).epsilon(1e-8));
    CHECK(pv_mp(-1.0, 0.25) == doctest::Approx(pv_mp_outside(-1.0, 0.25)).epsilon(1e-8));
    // inside the support the principal value is linear: (1 + y - lambda) / 2
    for (double yy : {0.25, 0.5, 1.0}) {
        const auto [lo, hi] = mp_edges(yy);
        for (int i = 1; i < 10; ++i) {
            const double lam = lo + (hi - lo) * i / 10.0;
            CHECK(pv_mp(lam, yy) == doctest::Approx((1 + yy - lam) / 2).epsilon(1e-6).scale(1.0));
        }
    }
    CHECK_THROWS_AS(pv_mp(1.0, 0.5, 0.0), ParameterError);
}

TEST_CASE("classify_mp_region") {
    const auto [a, b] = mp_edges(0.25);
    CHECK(classify_mp_region(1.0, 0.25, 0.1) == Region::bulk);
    CHECK(classify_mp_region(a, 0.25, 0.1) == Region::edge);
    CHECK(classify_mp_region(b + 0.05, 0.25, 0.1) == Region::edge);
    CHECK(classify_mp_region(b + 0.5, 0.25, 0.1) == Region::outside);
    CHECK(classify_mp_region(0.0, 0.25, 0.1) == Region::outside);
    // hard edge
    CHECK(classify_mp_region(0.05, 1.0, 0.1) == Region::outside);
    CHECK(classify_mp_region(3.95, 1.0, 0.1) == Region::edge);
    CHECK(classify_mp_region(4.05, 1.0, 0.1) == Region::outside);
    CHECK(classify_mp_region(2.0, 1.0, 0.1) == Region::bulk);
    CHECK_THROWS_AS(classify_mp_region(1.0, 0.5, 0.0), ParameterError);
}

TEST_CASE("singular_vec_inf_norms") {
    // p = 1: one left vector (+-1)
    CMatrix row(1, 5);
    row << 1, 2, 3, 4, 5;
    const auto r1 = singular_vec_inf_norms(RectMatrix(row));
    REQUIRE(r1.size() == 2);
    CHECK(r1[0].side == Side::left);
    CHECK(r1[0].inf_norm == doctest::Approx(1.0));
    CHECK(r1[1].side == Side::right);
    CHECK(r1[1].inf_norm == doctest::Approx(5.0 / std::sqrt(55.0)));

    // Rows of a scaled 4 x 4 Hadamard matrix (orthogonal design): every
    // right singular vector of the 2 x 4 factor is flat. Distinct row norms keep
    // the singular values apart.
    CMatrix had(2, 4);
    had << 1, 1, 1, 1, 2, -2, 2, -2;
    for (const auto& r : singular_vec_inf_norms(RectMatrix(had)))
        if (r.side == Side::right) CHECK(r.inf_norm == doctest::Approx(0.5));

    const auto m = sample_rect(DistSpec::rademacher(), 400, 800, 1);
    const auto recs = singular_vec_inf_norms(m, 0.1, 1);
    REQUIRE(recs.size() == 800);
    double right_max = 0.0, left_max = 0.0;
    for (const auto& r : recs) {
        const double dim = r.side == Side::left ? 400.0 : 800.0;
        CHECK(r.inf_norm >= 1.0 / std::sqrt(dim) - 1e-12);
        CHECK(r.inf_norm <= 1.0 + 1e-12);
        if (r.region != Region::bulk) continue;
        if (r.side == Side::right) right_max = std::max(right_max, r.scaled_bulk);
        else left_max = std::max(left_max, r.scaled_bulk_dim);
    }
    CHECK(right_max >= 0.5);
    CHECK(right_max <= 4.0);
    CHECK(left_max >= 0.5);
    CHECK(left_max <= 4.0);
}

TEST_CASE("MP law deviation: a single full-support window agrees with the global count") {
    const auto m = sample_rect(DistSpec::rademacher(), 200, 400, 3);
    const auto eigs = covariance_eigenvalues(m);
    const auto mp = Density::marchenko_pastur(0.5);
    const auto sup = mp.support();
    const auto d = law_deviation(eigs, mp, 100.0, sup);
    REQUIRE(d.windows.size() == 1);
    const double inside = static_cast<double>(count_interval(eigs, sup));
    CHECK(d.windows[0].expected == doctest::Approx(200.0).epsilon(1e-8));
    CHECK(d.max_rel_dev == doctest::Approx(std::abs(inside - 200.0) / 200.0));

    // KS against the MP CDF matches the direct oracle
    const double ref = oracle::ks(eigs, [](double x) { return mp_cdf(x, 0.5); });
    CHECK(ks_distance(eigs, mp) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(ks_distance(eigs, mp) < 0.05);
}
