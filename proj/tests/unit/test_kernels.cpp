#include "opuc/equilibrium.hpp"
#include "opuc/errors.hpp"
#include "opuc/kernels.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace opuc;
using std::numbers::pi;

namespace {

cplx geometric(int n, cplx z, cplx w)
{
    const cplx q = z * std::conj(w);
    cplx acc = 0.0, t = 1.0;
    for (int j = 0; j <= n; ++j, t *= q)
        acc += t;
    return acc;
}

// J*_{-1/2} from the elementary formulas, a != b.
cplx jminus_offdiag(cplx a, cplx b)
{
    const cplx ra = std::sqrt(a), rb = std::sqrt(b);
    return (ra * std::sin(ra) * std::cos(rb) - rb * std::sin(rb) * std::cos(ra)) / (pi * (a - b));
}

} // namespace

TEST_SUITE("kernels")
{
TEST_CASE("direct kernel in the free case")
{
    const VerblunskyPeriod v({0.0, 0.0});
    std::mt19937_64 rng(61);
    for (int i = 0; i < 20; ++i) {
        const cplx z = oracle::random_in_disk(rng, 1.2), w = oracle::random_in_disk(rng, 1.2);
        const int n = 5 * i;
        CHECK(oracle::rel_err(cd_kernel_direct(v, n, z, w), geometric(n, z, w)) <= 1e-12);
    }
    const Discriminant d(v);
    CHECK(oracle::rel_err(cd_kernel_fast(d, 10, 2.0, 0.5), geometric(10, 2.0, 0.5)) <= 1e-12);
    CHECK_THROWS_AS(cd_kernel_direct(v, -1, 1.0, 1.0), ArgumentError);
}

TEST_CASE("phi_sequence matches the oracle")
{
    std::mt19937_64 rng(62);
    const auto a = oracle::random_period(rng, 3);
    const cplx z = std::polar(1.0, 0.7);
    const auto got = phi_sequence(VerblunskyPeriod(a), 50, z);
    const auto want = oracle::phi_values(a, 50, z);
    REQUIRE(got.size() == 51);
    for (int j = 0; j <= 50; ++j)
        CHECK(oracle::rel_err(got[j], want[j]) <= 1e-12);
}

TEST_CASE("Hermitian symmetry and the diagonal")
{
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> th(0.0, 2 * pi);
    for (int i = 0; i < 50; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 5));
        const int n = 1 + 7 * i;
        const cplx z = std::polar(1.0, th(rng)), w = std::polar(1.0, th(rng));
        const cplx kzw = cd_kernel_direct(v, n, z, w), kwz = cd_kernel_direct(v, n, w, z);
        CHECK(std::abs(kzw - std::conj(kwz)) <= 1e-12 * std::abs(kzw));
        const cplx kzz = cd_kernel_direct(v, n, z, z);
        CHECK(std::abs(kzz.imag()) <= 1e-12 * kzz.real());
        CHECK(kzz.real() >= 1.0);
    }
}

TEST_CASE("Christoffel-Darboux form against the direct sum")
{
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> th(0.0, 2 * pi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 6));
        const Discriminant d(v);
        const int n = 1 + (i * 53) % 300;
        cplx z, w;
        if (i % 2 == 0) {
            z = std::polar(1.0, th(rng));
            w = std::polar(1.0, th(rng));
        } else {
            z = oracle::random_annulus(rng, 0.8, 1.1);
            w = oracle::random_annulus(rng, 0.8, 1.1);
        }
        worst = std::max(worst, oracle::rel_err(cd_kernel_fast(d, n, z, w), cd_kernel_direct(v, n, z, w)));
    }
    CHECK(worst <= 1e-8);

    // Diagonal requests go through the direct sum.
    const VerblunskyPeriod v(oracle::random_period(rng, 4));
    const Discriminant d(v);
    const cplx z = std::polar(1.0, 1.1);
    CHECK(cd_kernel_fast(d, 200, z, z) == cd_kernel_direct(d.period(), 200, z, z));
    CHECK(cd_kernel_fast(d, 20, 0.0, z) == cd_kernel_direct(d.period(), 20, 0.0, z));
}

TEST_CASE("sinc kernel")
{
    CHECK(std::abs(sinc_kernel(0.7, 1.3, 1.3) - 1.0) <= 1e-15);
    CHECK(std::abs(sinc_kernel(0.7, 0.0, 0.0) - 1.0) <= 1e-15);
    const cplx want = std::exp(cplx(0.0, 0.5)) * (std::sin(0.5) / 0.5);
    CHECK(std::abs(sinc_kernel(0.5, 1.0, 0.0) - want) <= 1e-15);
    CHECK(std::abs(std::abs(want) - 0.958851077208406) <= 1e-12);
    std::mt19937_64 rng(65);
    for (int i = 0; i < 50; ++i) {
        const cplx a = oracle::random_in_disk(rng, 3.0), b = oracle::random_in_disk(rng, 3.0);
        CHECK(std::abs(sinc_kernel(0.4, a, b) - std::conj(sinc_kernel(0.4, b, a))) <= 1e-13);
    }
    // Both sides of the series switch.
    for (double x : {0.99e-4, 1.01e-4, 1e-9})
        CHECK(std::abs(sinc_kernel(1.0, x, 0.0) - std::exp(cplx(0.0, 0.5 * x)) * (std::sin(x) / x)) <= 1e-15);
}

TEST_CASE("J* special values")
{
    CHECK(bessel_jstar(-0.5, 0.0, 0.0).real() == doctest::Approx(1.0 / pi).epsilon(1e-14));
    CHECK(bessel_jstar(0.5, 0.0, 0.0).real() == doctest::Approx(1.0 / (3.0 * pi)).epsilon(1e-14));
    CHECK_THROWS_AS(bessel_jstar(1.5, 1.0, 2.0), UnsupportedCase);
    for (double t : {0.01, 0.5, 2.0, 10.0, 40.0}) {
        const double want = (2.0 + std::sin(2.0 * std::sqrt(t)) / std::sqrt(t)) / (4.0 * pi);
        CHECK(std::abs(bessel_jstar(-0.5, t, t) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
    }
    std::mt19937_64 rng(66);
    for (int i = 0; i < 100; ++i) {
        const cplx a = oracle::random_in_disk(rng, 20.0), b = oracle::random_in_disk(rng, 20.0);
        CHECK(oracle::rel_err(bessel_jstar(-0.5, a, b), jminus_offdiag(a, b)) <= 1e-10);
        for (double s : {-0.5, 0.5})
            CHECK(std::abs(bessel_jstar(s, a, b) - bessel_jstar(s, b, a)) <=
                  1e-12 * std::max(1.0, std::abs(bessel_jstar(s, a, b))));
    }
}

TEST_CASE("J* is smooth across the Taylor switch")
{
    std::mt19937_64 rng(67);
    for (int i = 0; i < 20; ++i) {
        const cplx a = oracle::random_in_disk(rng, 15.0);
        const cplx dir = std::polar(1.0, 0.3 * i);
        const double sw = 1e-4 * (1.0 + std::abs(a));
        for (double s : {-0.5, 0.5}) {
            // Steps of h straddle the switch at |a - b| = sw.
            const double h = 0.1 * sw;
            std::vector<cplx> f;
            for (int k = 5; k <= 15; ++k)
                f.push_back(bessel_jstar(s, a, a + dir * (h * k)));
            const double scale = std::max(1.0, std::abs(f[5]));
            for (std::size_t k = 1; k + 1 < f.size(); ++k) {
                CHECK(std::isfinite(std::abs(f[k])));
                CHECK(std::abs(f[k + 1] - 2.0 * f[k] + f[k - 1]) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("J*_{-1/2}(t, conj t) does not vanish")
{
    double least = 1e300;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            const cplx t(-25.0 + 50.0 * i / 39.0, -25.0 + 50.0 * j / 39.0);
            const cplx v = bessel_jstar(-0.5, t, std::conj(t));
            CHECK(std::abs(v.imag()) <= 1e-9 * std::abs(v));
            CHECK(v.real() > 0.0);
            least = std::min(least, std::abs(v));
        }
    CHECK(least > 0.0);
}

TEST_CASE("limit kernels")
{
    const Discriminant d(VerblunskyPeriod({0.5}));
    const BandStructure b = band_structure(d);
    const LimitKernel bulk = limit_kernel(d, b, 2.0);
    CHECK(bulk.regime == RegimeLabel::InteriorBulk);
    CHECK(std::abs(bulk(0.7, 0.7) - 1.0) <= 1e-15);
    CHECK(bulk.sigma(100) == doctest::Approx(0.01));
    CHECK_THROWS_AS(limit_kernel(d, b, 0.2), DomainError);

    const LimitKernel edge = limit_kernel(d, b, b.edges[0].theta);
    CHECK(edge.regime == RegimeLabel::EdgeNonResonant);
    CHECK(edge.order == 0.5);
    CHECK(std::abs(edge(0.0, 0.0) - 1.0) <= 1e-15);
    CHECK(edge.sigma(100) == doctest::Approx(-1e-4));
    CHECK(edge.sigma(100, 1) == doctest::Approx(1e-4));

    const Discriminant df(VerblunskyPeriod({0.0, 0.0}));
    const BandStructure bf = band_structure(df);
    const LimitKernel gap = limit_kernel(df, bf, 3e-8);
    CHECK(gap.regime == RegimeLabel::ClosedGap);
    CHECK(gap.theta == 0.0);
    CHECK(gap.v == doctest::Approx(0.5));
}

TEST_CASE("Delta = -2 edges")
{
    const Discriminant d(make_spike_family(2, critical_circle_alpha(0.25)));
    const BandStructure b = band_structure(d);
    int neg = 0;
    for (const EdgeRecord& e : b.edges) {
        if (e.delta_sign > 0)
            continue;
        ++neg;
        CHECK_THROWS_AS(limit_kernel(d, b, e.theta), UnsupportedCase);
        LimitOptions opt;
        opt.experimental_neg_edge = true;
        const LimitKernel lk = limit_kernel(d, b, e.theta, opt);
        CHECK(lk.rotated);
        CHECK(std::abs(lk(0.0, 0.0) - 1.0) <= 1e-15);
    }
    CHECK(neg == 2);

    // The rotation flips the sign of Delta and shifts theta by 2 pi / p.
    std::mt19937_64 rng(68);
    for (int i = 0; i < 10; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 2 + 2 * (i % 3)));
        const Discriminant dv(v), dr(rotate_period(v));
        for (double t = 0.1; t < 2 * pi; t += 0.7)
            CHECK(dr.on_circle(t + 2 * pi / dv.p()) == doctest::Approx(-dv.on_circle(t)).epsilon(1e-10).scale(dv.scale()));
    }
}

TEST_CASE("free bulk ratio")
{
    const Discriminant d(VerblunskyPeriod({0.0, 0.0}));
    const BandStructure b = band_structure(d);
    CHECK(universality_ratio(d, b, pi / 2, 0.0, 0.0, 2000) == cplx(1.0));
    const cplx r = universality_ratio(d, b, pi / 2, 1.0, 0.0, 2000);
    CHECK(std::abs(r - std::exp(cplx(0.0, 0.5)) * std::sin(0.5) / 0.5) <= 0.01);
    CHECK(std::abs(r - predicted_limit(d, b, pi / 2, 1.0, 0.0)) <= 0.01);
    CHECK_THROWS_AS(universality_ratio(d, b, pi / 2, 1.0, 0.0, 5), ArgumentError);

    // Closed gap at theta = 0.
    for (double a : {-2.0, 0.5, 3.0})
        CHECK(std::abs(universality_ratio(d, b, 0.0, a, 1.0, 3000) - predicted_limit(d, b, 0.0, a, 1.0)) <= 0.02);
}

TEST_CASE("sweep report")
{
    const Discriminant d(VerblunskyPeriod({0.5}));
    const BandStructure b = band_structure(d);
    const std::vector<cplx> as{-1.0, 0.0, 2.0}, bs{0.0, 1.0};
    const UniversalityReport rep = universality_sweep(d, b, b.edges[0].theta, {200, 400, 800}, as, bs);
    CHECK(rep.rows.size() == 18);
    CHECK(rep.max_error.size() == 3);
    CHECK(rep.limit.regime == RegimeLabel::EdgeNonResonant);
    CHECK(rep.monotone);
    for (const UniversalityRow& row : rep.rows) {
        const cplx direct = universality_ratio(d, rep.limit, row.a, row.b, row.n);
        CHECK(std::abs(row.ratio - direct) <= 1e-10);
    }
}

TEST_CASE("ratios along n = kp - 1 + s approach each other")
{
    const Discriminant d(VerblunskyPeriod({cplx(0.3, 0.1), -0.4, 0.2, cplx(0.0, 0.3)}));
    const BandStructure b = band_structure(d);
    const Arc& arc = b.bands.front();
    const double t = arc.start + 0.5 * arc.length();
    REQUIRE(classify_point(d, b, t) == RegimeLabel::InteriorBulk);
    auto gap_at = [&](int k) {
        double worst = 0.0;
        const cplx base = universality_ratio(d, b, t, 1.5, -0.5, k * d.p() - 1);
        for (int s = 1; s < d.p(); ++s)
            worst = std::max(worst, std::abs(universality_ratio(d, b, t, 1.5, -0.5, k * d.p() - 1 + s) - base));
        return worst;
    };
    const double g50 = gap_at(50), g200 = gap_at(200);
    CHECK(g200 < g50);
    CHECK(g200 <= 0.05);
}
}
