#include "opuc/errors.hpp"
#include "opuc/szego.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace opuc;

namespace {

double max_coeff_diff(const ComplexPoly& p, const oracle::Coeffs& c, double scale)
{
    double worst = 0.0;
    const std::size_t n = std::max(p.coeffs().size(), c.size());
    for (std::size_t j = 0; j < n; ++j) {
        const cplx want = j < c.size() ? c[j] : cplx(0.0);
        worst = std::max(worst, std::abs(p.coeff(static_cast<int>(j)) - want));
    }
    return worst / scale;
}

// Rounding bound of Horner at z: 4 n eps sum |c_j| |z|^j.
double horner_bound(const ComplexPoly& p, cplx z)
{
    double acc = 0.0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
        acc = acc * std::abs(z) + std::abs(*it);
    return 4.0 * static_cast<double>(p.coeffs().size()) * 2.220446049250313e-16 * acc;
}

double partial_r(const VerblunskyPeriod& v, int n)
{
    double r = 1.0;
    for (int j = 0; j < n; ++j)
        r *= std::sqrt(1.0 - std::norm(v.alpha(j)));
    return r;
}

} // namespace

TEST_SUITE("szego")
{
TEST_CASE("period validation and derived constants")
{
    CHECK_THROWS_AS(VerblunskyPeriod({0.3, cplx(0.6, 0.8)}), ArgumentError);
    CHECK_THROWS_AS(VerblunskyPeriod(std::vector<cplx>{}), ArgumentError);
    try {
        VerblunskyPeriod({0.1, 0.2, 1.5});
        FAIL("no throw");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
    const VerblunskyPeriod free({0.0, 0.0});
    CHECK(free.is_free());
    CHECK(free.r() == 1.0);
    const VerblunskyPeriod v({0.5});
    CHECK(v.effective_period() == 2);
    CHECK(v.even().period() == 2);
    CHECK(v.even().alphas()[1] == cplx(0.5));
    CHECK(v.r() == doctest::Approx(std::sqrt(0.75)));
    CHECK(v.r() > 0.0);
    CHECK(v.r() < 1.0);
    CHECK(v.negated().alphas()[0] == cplx(-0.5));
}

TEST_CASE("free case")
{
    const PolyQuad q = iterate_polys(VerblunskyPeriod({0.0, 0.0}), 5);
    CHECK(q.phi.degree() == 5);
    CHECK(q.phi.coeff(5) == cplx(1.0));
    CHECK(q.phi.max_abs_coeff() == 1.0);
    CHECK(q.phi_star.degree() == 0);
    CHECK(q.phi_star.coeff(0) == cplx(1.0));
    CHECK(q.psi.coeff(5) == cplx(1.0));
    CHECK(q.psi_star.coeff(0) == cplx(1.0));

    const QuadValues val = eval_quad_at(VerblunskyPeriod({0.0, 0.0}), 4, 2.0);
    CHECK(val.phi == cplx(16.0));
    CHECK(val.phi_star == cplx(1.0));
    CHECK(val.psi == cplx(16.0));
    CHECK(val.psi_star == cplx(1.0));
}

TEST_CASE("one step")
{
    const PolyQuad q = iterate_polys(VerblunskyPeriod({0.5}), 1, Normalization::Monic);
    CHECK(q.phi.coeff(0) == cplx(-0.5));
    CHECK(q.phi.coeff(1) == cplx(1.0));
    CHECK(q.psi.coeff(0) == cplx(0.5));
    CHECK(q.psi.coeff(1) == cplx(1.0));
}

TEST_CASE("degree zero")
{
    std::mt19937_64 rng(31);
    const VerblunskyPeriod v(oracle::random_period(rng, 3));
    const QuadValues val = eval_quad_at(v, 0, cplx(0.3, -1.2));
    CHECK(val.phi == cplx(1.0));
    CHECK(val.phi_star == cplx(1.0));
    CHECK(val.psi == cplx(1.0));
    CHECK(val.psi_star == cplx(1.0));
}

TEST_CASE("monic coefficients against the transfer matrix product")
{
    const std::vector<cplx> a{cplx(0.3, 0.1), -0.2};
    const VerblunskyPeriod v(a);
    const PolyQuad q = iterate_polys(v, 7, Normalization::Monic);
    const auto [phi, phis] = oracle::transfer_product(a, 7);
    const auto [psi, psis] = oracle::transfer_product({-a[0], -a[1]}, 7);
    CHECK(max_coeff_diff(q.phi, phi, 1.0) <= 1e-14);
    CHECK(max_coeff_diff(q.phi_star, phis, 1.0) <= 1e-14);
    CHECK(max_coeff_diff(q.psi, psi, 1.0) <= 1e-14);
    CHECK(max_coeff_diff(q.psi_star, psis, 1.0) <= 1e-14);

    std::mt19937_64 rng(32);
    for (int i = 0; i < 20; ++i) {
        const auto per = oracle::random_period(rng, 1 + i % 5);
        const int n = 1 + 3 * i;
        const PolyQuad qq = iterate_polys(VerblunskyPeriod(per), n, Normalization::Monic);
        const auto [f, fs] = oracle::transfer_product(per, n);
        double scale = 1.0;
        for (cplx c : f)
            scale = std::max(scale, std::abs(c));
        CHECK(max_coeff_diff(qq.phi, f, scale) <= 1e-12);
        CHECK(max_coeff_diff(qq.phi_star, fs, scale) <= 1e-12);
    }
}

TEST_CASE("Phi_{n+1}(0) = -conj(alpha_n)")
{
    std::mt19937_64 rng(33);
    const VerblunskyPeriod v(oracle::random_period(rng, 5));
    const auto quads = iterate_polys_upto(v, 12, Normalization::Monic);
    REQUIRE(quads.size() == 13);
    for (int n = 0; n < 12; ++n)
        CHECK(std::abs(quads[n + 1].phi.coeff(0) + std::conj(v.alpha(n))) <= 1e-14);
}

TEST_CASE("leading coefficient and kappa")
{
    std::mt19937_64 rng(34);
    const VerblunskyPeriod v(oracle::random_period(rng, 4));
    const auto quads = iterate_polys_upto(v, 30);
    for (const PolyQuad& q : quads) {
        const double kappa = 1.0 / partial_r(v, q.n);
        CHECK(q.kappa == doctest::Approx(kappa).epsilon(1e-12));
        CHECK(std::abs(q.phi.coeff(q.n) - kappa) <= 1e-12 * kappa);
        CHECK(q.phi.coeff(q.n).real() > 0.0);
    }
}

TEST_CASE("star of Phi_n is Phi*_n")
{
    std::mt19937_64 rng(35);
    for (int i = 0; i < 20; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 6));
        const int n = 1 + 2 * i;
        const PolyQuad q = iterate_polys(v, n);
        const ComplexPoly s = star(q.phi, n);
        const ComplexPoly t = star(q.psi, n);
        for (int j = 0; j <= n; ++j) {
            CHECK(std::abs(s.coeff(j) - q.phi_star.coeff(j)) <= 1e-12 * q.kappa);
            CHECK(std::abs(t.coeff(j) - q.psi_star.coeff(j)) <= 1e-12 * q.kappa);
        }
    }
}

TEST_CASE("|phi_n| = |phi*_n| on the circle")
{
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 6));
        const QuadValues q = eval_quad_at(v, 1 + i, std::polar(1.0, th(rng)));
        CHECK(std::abs(std::abs(q.phi) - std::abs(q.phi_star)) <= 1e-10 * std::max(1.0, std::abs(q.phi)));
    }
}

TEST_CASE("Wronskian psi*_n phi_n + psi_n phi*_n = 2 z^n")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> th(0.0, 2.0 * M_PI);
    for (int i = 0; i < 200; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 6));
        const int n = i % 101;
        const cplx z = std::polar(1.0, th(rng));
        const QuadValues q = eval_quad_at(v, n, z);
        const cplx lhs = q.psi_star * q.phi + q.psi * q.phi_star;
        const cplx rhs = 2.0 * std::pow(z, n);
        const double scale = std::max({2.0, std::abs(q.psi_star * q.phi), std::abs(q.psi * q.phi_star)});
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("pointwise recursion agrees with the coefficient vectors")
{
    std::mt19937_64 rng(38);
    for (int i = 0; i < 60; ++i) {
        const VerblunskyPeriod v(oracle::random_period(rng, 1 + i % 6));
        const int n = 1 + (i * 37) % 200;
        const cplx z = oracle::random_annulus(rng, 0.5, 1.5);
        const PolyQuad q = iterate_polys(v, n);
        const QuadValues val = eval_quad_at(v, n, z);
        // Horner on the coefficient vectors loses up to its rounding bound
        // when the coefficients are much larger than the value.
        auto agree = [&](cplx got, const ComplexPoly& poly) {
            return std::abs(got - poly(z)) <= 1e-10 * std::abs(poly(z)) + horner_bound(poly, z);
        };
        CHECK(agree(val.phi, q.phi));
        CHECK(agree(val.phi_star, q.phi_star));
        CHECK(agree(val.psi, q.psi));
        CHECK(agree(val.psi_star, q.psi_star));
    }
    // Relative agreement with a second pointwise route (monic recursion,
    // rescaled once at the end).
    for (int i = 0; i < 60; ++i) {
        const auto a = oracle::random_period(rng, 1 + i % 6);
        const int n = 1 + (i * 37) % 200;
        const cplx z = oracle::random_annulus(rng, 0.5, 1.5);
        const QuadValues val = eval_quad_at(VerblunskyPeriod(a), n, z);
        CHECK(oracle::rel_err(val.phi, oracle::phi_values(a, n, z)[n]) <= 1e-10);
    }

    // Constant alpha on the circle |alpha| = 1/2, written with period 2.
    const cplx a(-0.25, 0.4330127);
    const VerblunskyPeriod v({a, a});
    const cplx z = std::polar(1.0, 1.0);
    const QuadValues val = eval_quad_at(v, 6, z);
    const PolyQuad q = iterate_polys(v, 6);
    CHECK(oracle::rel_err(val.phi, q.phi(z)) <= 1e-12);
    CHECK(oracle::rel_err(val.psi_star, q.psi_star(z)) <= 1e-12);
    const auto phis = oracle::phi_values({a}, 6, z);
    CHECK(oracle::rel_err(val.phi, phis[6]) <= 1e-12);
}

TEST_CASE("transfer matrix determinant")
{
    std::mt19937_64 rng(39);
    for (int i = 0; i < 50; ++i) {
        const cplx a = oracle::random_in_disk(rng, 0.95);
        const cplx z = oracle::random_in_disk(rng, 2.0);
        const TransferMatrix m = TransferMatrix::step(a, z);
        CHECK(std::abs(m.determinant() - z * (1.0 - std::norm(a))) <= 1e-12);
        const TransferMatrix m2 = m * TransferMatrix::step(-a, z);
        CHECK(std::abs(m2.determinant() - z * z * std::pow(1.0 - std::norm(a), 2)) <= 1e-12 * std::max(1.0, std::norm(z)));
    }
}
}
