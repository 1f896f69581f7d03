#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/error.hpp"
#include "rmtlab/spectral.hpp"

using namespace rmtlab;

namespace {

std::vector<DistSpec> all_dists() {
    return {DistSpec::rademacher(), DistSpec::gaussian(), DistSpec::bounded_uniform(2.0), DistSpec::subexp(1.0),
            DistSpec::subexp(0.5), DistSpec::complex_gaussian()};
}

}  // namespace

TEST_CASE("golden derive_seed values") {
    struct G {
        std::uint64_t base, index, out;
    };
    // Generated once from an independent splitmix64 implementation.
    const G golden[] = {
        {0x0ULL, 0x0ULL, 0xe220a8397b1dcdafULL},
        {0x0ULL, 0x1ULL, 0x6e789e6aa1b965f4ULL},
        {0x1ULL, 0x0ULL, 0xbfef8030ddc2d772ULL},
        {0x1ULL, 0x1ULL, 0x5f552ce482f2aa47ULL},
        {0x2aULL, 0x7ULL, 0x272404a0a3926552ULL},
        {0xdeadbeefULL, 0xf4240ULL, 0x25cb856758e19305ULL},
        {0xffffffffffffffffULL, 0xfffffffffffffffeULL, 0x37bbcbaf20495954ULL},
        {0x75bcd15ULL, 0x10000000000ULL, 0x6d9aa34a95a726f9ULL},
    };
    for (const auto& g : golden) CHECK(derive_seed(g.base, g.index) == g.out);
}

TEST_CASE("derive_seed: distinct over 10^6 consecutive indices") {
    std::vector<std::uint64_t> v(1000000);
    for (std::uint64_t i = 0; i < v.size(); ++i) v[i] = derive_seed(12345, i);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) REQUIRE(v[i] != v[i + 1]);
    std::sort(v.begin(), v.end());
    CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
}

TEST_CASE("derive_seed: single-bit flips avalanche") {
    oracle::Gen gen(7);
    double total = 0.0;
    int count = 0;
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t b = gen.u64(), i = gen.u64() >> 1;
        const std::uint64_t base = derive_seed(b, i);
        for (int bit = 0; bit < 64; bit += 7) {
            total += std::popcount(base ^ derive_seed(b ^ (1ULL << bit), i));
            total += std::popcount(base ^ derive_seed(b, i ^ (1ULL << bit)));
            count += 2;
        }
    }
    CHECK(total / count >= 20.0);
}

TEST_CASE("sample_vector") {
    const auto x = sample_vector(DistSpec::rademacher(), 4, 1);
    REQUIRE(x.size() == 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(x.entries(i).real()) == 1.0);
        CHECK(x.entries(i).imag() == 0.0);
    }
    const auto y = sample_vector(DistSpec::rademacher(), 4, 1);
    CHECK(x.entries == y.entries);

    const auto g = sample_vector(DistSpec::gaussian(), 100000, 99);
    const double mean = g.entries.real().mean();
    const double var = (g.entries.real().array() - mean).square().sum() / (100000 - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(1e5));
    CHECK(std::abs(var - 1.0) < 0.05);

    CHECK_THROWS_AS(sample_vector(DistSpec::subexp(-1.0), 3, 1), ParameterError);
    CHECK_THROWS_AS(sample_vector(DistSpec::bounded_uniform(1.0), 3, 1), ParameterError);
}

TEST_CASE("every distribution is standardized (10^6 draws)") {
    for (const auto& d : all_dists()) {
        CAPTURE(to_string(d.kind));
        const auto x = sample_vector(d, 1000000, 2024);
        const Complex mean = x.entries.mean();
        double var = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) var += std::norm(x.entries(i) - mean);
        var /= static_cast<double>(x.size() - 1);
        const double se = std::sqrt(var / static_cast<double>(x.size()));
        CHECK(std::abs(mean) < 5.0 * se);
        CHECK(std::abs(var - 1.0) < 0.02);
        // and the declared fourth moment
        double m4 = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) m4 += std::pow(std::norm(x.entries(i)), 2);
        m4 /= static_cast<double>(x.size());
        CHECK(m4 == doctest::Approx(fourth_moment(d)).epsilon(0.05));
    }
}

TEST_CASE("fourth moments") {
    CHECK(fourth_moment(DistSpec::rademacher()) == 1.0);
    CHECK(fourth_moment(DistSpec::gaussian()) == doctest::Approx(3.0));
    CHECK(fourth_moment(DistSpec::bounded_uniform(5.0)) == doctest::Approx(1.8));
    CHECK(fourth_moment(DistSpec::complex_gaussian()) == doctest::Approx(2.0));
    // alpha = 1: Laplace law, E xi^4 = 6 after standardization
    CHECK(fourth_moment(DistSpec::subexp(1.0)) == doctest::Approx(6.0));
}

TEST_CASE("bounded_uniform respects its bound") {
    const auto d = DistSpec::bounded_uniform(2.0);
    const auto x = sample_vector(d, 10000, 3);
    CHECK(x.entries.cwiseAbs().maxCoeff() <= std::sqrt(3.0));
    CHECK(d.bound() == doctest::Approx(std::sqrt(3.0)));
    CHECK(std::isinf(DistSpec::gaussian().bound()));
}

TEST_CASE("sample_wigner") {
    const auto m = sample_wigner(DistSpec::rademacher(), 2, 5, false);
    const CMatrix& a = m.dense();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(a(i, j)) == 1.0);
    CHECK(a(0, 1) == a(1, 0));

    const auto w = sample_wigner(DistSpec::rademacher(), 9, 5, true);
    CHECK((w.dense().cwiseAbs().array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);

    const auto c = sample_wigner(DistSpec::complex_gaussian(), 6, 8, false);
    CHECK(c.dense() == c.dense().adjoint());  // exact
    for (int i = 0; i < 6; ++i) CHECK(c.dense()(i, i).imag() == 0.0);

    const auto big = eigvalsh(sample_wigner(DistSpec::rademacher(), 1000, 11, true));
    CHECK(big.back() >= 1.9);
    CHECK(big.back() <= 2.2);
}

TEST_CASE("sample_wigner: diagonal and upper entries come from the stream") {
    const auto a = sample_wigner(DistSpec::gaussian(), 50, 1, false);
    const auto b = sample_wigner(DistSpec::gaussian(), 50, 1, false);
    const auto c = sample_wigner(DistSpec::gaussian(), 50, 2, false);
    CHECK(a.dense() == b.dense());
    CHECK(a.dense() != c.dense());
}

TEST_CASE("sample_rect and covariance forms") {
    CHECK_THROWS_AS(sample_rect(DistSpec::gaussian(), 3, 2, 1), ShapeError);

    CMatrix m(2, 2);
    m << 1.0, 2.0, 0.0, 3.0;
    const RectMatrix r(m);
    const auto w = form_covariance(r);
    CHECK((w.dense() - m.adjoint() * m / 2.0).cwiseAbs().maxCoeff() < 1e-15);
    const auto wd = form_dual_covariance(r);
    CHECK((wd.dense() - m * m.adjoint() / 2.0).cwiseAbs().maxCoeff() < 1e-15);

    const auto big = sample_rect(DistSpec::rademacher(), 400, 800, 4);
    const auto eigs = eigvalsh(form_covariance(big));
    CHECK(eigs.front() >= -1e-10 * 800);
    const auto nonzero = std::count_if(eigs.begin(), eigs.end(), [](double v) { return v > 1e-8; });
    CHECK(nonzero == 400);
}

TEST_CASE("form_covariance is PSD on many instances") {
    oracle::Gen gen(17);
    for (int t = 0; t < 50; ++t) {
        const int p = gen.integer(1, 12), n = gen.integer(p, 20);
        const auto eigs = eigvalsh(form_covariance(sample_rect(DistSpec::gaussian(), p, n, gen.u64())));
        CHECK(eigs.front() >= -1e-10 * n);
    }
}

TEST_CASE("truncation_stats") {
    const auto r = truncation_stats(DistSpec::rademacher(), 2.0);
    CHECK(r.eps1 == 0.0);
    CHECK(r.eps2 == 0.0);
    CHECK(r.eps3 == 0.0);
    CHECK(r.mu == 0.0);
    CHECK(r.sigma2 == 1.0);

    const auto g = truncation_stats(DistSpec::gaussian(), 5.0);
    CHECK(g.eps1 == doctest::Approx(oracle::gaussian_tail(5.0)).epsilon(1e-10));
    CHECK(std::abs(g.eps1 / 5.73e-7 - 1.0) < 0.01);
    // variance lost beyond K: E g^2 1{|g|>K} = eps1 + 2 K phi(K)
    const double phi = std::exp(-12.5) / std::sqrt(2.0 * oracle::pi);
    CHECK(g.eps3 == doctest::Approx(g.eps1 + 10.0 * phi).epsilon(1e-8));

    const auto far = truncation_stats(DistSpec::gaussian(), 50.0);
    CHECK(far.eps1 < 1e-12);
    CHECK(far.eps2 < 1e-12);
    CHECK(far.eps3 < 1e-12);

    CHECK_THROWS_AS(truncation_stats(DistSpec::gaussian(), 1.0), ParameterError);
    CHECK_THROWS_AS(truncation_stats(DistSpec::gaussian(), 0.5), ParameterError);
}

TEST_CASE("truncation_stats by quadrature matches Simpson") {
    // subexp alpha = 1 is a Laplace law with scale s = 1/sqrt(2): density e^{-|x|/s}/(2s).
    const double s = 1.0 / std::sqrt(2.0);
    const double K = 3.0;
    const auto r = truncation_stats(DistSpec::subexp(1.0), K);
    CHECK(r.eps1 == doctest::Approx(std::exp(-K / s)).epsilon(1e-8));
    const double second = oracle::simpson([&](double x) { return x * x * std::exp(-std::abs(x) / s) / (2 * s); }, -K, K);
    CHECK(r.sigma2 == doctest::Approx(second).epsilon(1e-8));
    CHECK(std::abs(r.mu) < 1e-12);

    // bounded uniform with K below sqrt(3)-scale support truncates nothing when K >= sqrt3
    const auto u = truncation_stats(DistSpec::bounded_uniform(2.0), 2.0);
    CHECK(u.eps1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(u.sigma2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("standardize_truncated") {
    const auto x = sample_vector(DistSpec::rademacher(), 50, 3);
    const auto rep = truncation_stats(DistSpec::rademacher(), 2.0);
    CHECK(standardize_truncated(x, rep).entries == x.entries);

    TruncationReport fake;
    fake.K = 2.0;
    fake.mu = 0.25;
    fake.sigma2 = 4.0;
    RandomVector v{CVector::Constant(2, 3.0)};  // |xi| = K + 1
    const auto out = standardize_truncated(v, fake);
    CHECK(out.entries(0).real() == doctest::Approx((0.0 - 0.25) / 2.0));

    TruncationReport degenerate = fake;
    degenerate.sigma2 = 0.0;
    CHECK_THROWS_AS(standardize_truncated(v, degenerate), DegenerateError);

    const auto g = sample_vector(DistSpec::gaussian(), 100000, 8);
    const auto gr = truncation_stats(DistSpec::gaussian(), 5.0);
    const auto z = standardize_truncated(g, gr);
    const double mean = z.entries.real().mean();
    const double var = (z.entries.real().array() - mean).square().sum() / (100000 - 1);
    CHECK(std::abs(var - 1.0) < 0.05);
    // 2K-bounded when eps2, eps3 <= 1/2
    const auto small = truncation_stats(DistSpec::gaussian(), 1.5);
    if (small.eps2 <= 0.5 && small.eps3 <= 0.5)
        CHECK(standardize_truncated(g, small).entries.cwiseAbs().maxCoeff() <= 3.0);
}

TEST_CASE("distribution names round-trip") {
    for (const auto& d : all_dists()) CHECK(dist_kind_from_string(to_string(d.kind)) == d.kind);
    CHECK_THROWS_AS(dist_kind_from_string("cauchy"), ParameterError);
}
