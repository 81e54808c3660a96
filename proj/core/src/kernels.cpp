#include "opuc/kernels.hpp"

#include "opuc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace opuc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Entire { S, C, T };

// Ratio c_{k+1} / c_k of the power series coefficients of S, C, T in a.
double coeff_ratio(Entire f, int k)
{
    switch (f) {
    case Entire::S:
        return -1.0 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    case Entire::C:
        return -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    case Entire::T:
        return k == 0 ? 0.0 : -1.0 / ((2.0 * k) * (2.0 * k + 1.0));
    }
    return 0.0;
}

double coeff(Entire f, int k)
{
    // First nonzero coefficient: S, C start at 1 (k = 0); T starts at 1 (k = 1).
    if (f == Entire::T) {
        if (k == 0)
            return 0.0;
        double c = 1.0;
        for (int j = 1; j < k; ++j)
            c *= coeff_ratio(f, j);
        return c;
    }
    double c = 1.0;
    for (int j = 0; j < k; ++j)
        c *= coeff_ratio(f, j);
    return c;
}

// Taylor coefficients F^{(i)}(m) / i!, i = 0..N-1, from the power series.
template <int N>
std::array<cplx, N> taylor_at(Entire f, cplx m)
{
    std::array<cplx, N> out{};
    for (int i = 0; i < N; ++i) {
        // term_k = c_k C(k, i) m^{k-i}, k >= i
        int k = i;
        cplx term = coeff(f, k);
        if (f == Entire::T && i == 0) { // c_0 = 0: start at k = 1
            k = 1;
            term = m;
        }
        cplx sum = term;
        double peak = std::abs(term);
        for (int it = 0; it < 400; ++it) {
            const double r = coeff_ratio(f, k);
            term *= r * m * static_cast<double>(k + 1) / static_cast<double>(k + 1 - i);
            ++k;
            sum += term;
            peak = std::max(peak, std::abs(term));
            if (k > i + 4 && std::abs(term) <= 1e-18 * peak)
                break;
        }
        out[i] = sum;
    }
    return out;
}

cplx eval_s(cplx a)
{
    if (std::abs(a) < 1e-3)
        return 1.0 - a / 6.0 + a * a / 120.0 - a * a * a / 5040.0;
    const cplx r = std::sqrt(a);
    return std::sin(r) / r;
}

cplx eval_c(cplx a)
{
    return std::cos(std::sqrt(a));
}

cplx eval_first(double s, cplx a)
{
    return s > 0.0 ? eval_s(a) : a * eval_s(a);
}

} // namespace

std::vector<cplx> phi_sequence(const VerblunskyPeriod& v, int n, cplx z)
{
    if (n < 0)
        throw ArgumentError("phi_sequence: n must be >= 0");
    std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
    cplx phi = 1.0, phi_s = 1.0;
    out[0] = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha(k);
        const double rho = std::sqrt(1.0 - std::norm(a));
        const cplx next = (z * phi - std::conj(a) * phi_s) / rho;
        phi_s = (phi_s - a * z * phi) / rho;
        phi = next;
        out[k + 1] = phi;
    }
    return out;
}

cplx cd_kernel_direct(const VerblunskyPeriod& v, int n, cplx z, cplx w)
{
    if (n < 0)
        throw ArgumentError("cd_kernel_direct: n must be >= 0");
    cplx pz = 1.0, pzs = 1.0, pw = 1.0, pws = 1.0;
    cplx acc = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha(k);
        const double rho = std::sqrt(1.0 - std::norm(a));
        const cplx nz = (z * pz - std::conj(a) * pzs) / rho;
        pzs = (pzs - a * z * pz) / rho;
        pz = nz;
        const cplx nw = (w * pw - std::conj(a) * pws) / rho;
        pws = (pws - a * w * pw) / rho;
        pw = nw;
        acc += pz * std::conj(pw);
    }
    return acc;
}

cplx cd_kernel_fast(const Discriminant& d, int n, cplx z, cplx w)
{
    if (n < 0)
        throw ArgumentError("cd_kernel_fast: n must be >= 0");
    const cplx denom = 1.0 - z * std::conj(w);
    if (z == 0.0 || w == 0.0 || std::abs(denom) <= 1e-8)
        return cd_kernel_direct(d.period(), n, z, w);
    const int m = n + 1;
    const PhiPair a = closed_form_phi(d, m / d.p(), m % d.p(), z);
    const PhiPair b = closed_form_phi(d, m / d.p(), m % d.p(), w);
    return (a.phi_star * std::conj(b.phi_star) - a.phi * std::conj(b.phi)) / denom;
}

cplx sinc_kernel(double v, cplx a, cplx b)
{
    const cplx diff = a - std::conj(b);
    const cplx x = v * diff;
    const cplx sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
    return std::exp(cplx(0.0, 0.5) * diff) * sinc;
}

cplx bessel_jstar(double s, cplx a, cplx b)
{
    const bool plus = std::abs(s - 0.5) < 1e-12;
    const bool minus = std::abs(s + 0.5) < 1e-12;
    if (!plus && !minus)
        throw UnsupportedCase("bessel_jstar: order " + std::to_string(s) +
                              " is not supported (only +-1/2)");
    if (std::abs(a - b) >= 1e-4 * (1.0 + std::abs(a))) {
        const cplx num = eval_first(s, a) * eval_c(b) - eval_first(s, b) * eval_c(a);
        return num / (kPi * (a - b));
    }
    // N(m + d, m - d) / (2d) = sum_{i + j odd} f_i g_j (-1)^j d^{i+j-1}
    constexpr int kTerms = 10;
    const cplx m = 0.5 * (a + b);
    const cplx dd = 0.5 * (a - b);
    const auto f = taylor_at<kTerms>(plus ? Entire::S : Entire::T, m);
    const auto g = taylor_at<kTerms>(Entire::C, m);
    std::array<cplx, kTerms> dpow{};
    dpow[0] = 1.0;
    for (int i = 1; i < kTerms; ++i)
        dpow[i] = dpow[i - 1] * dd;
    cplx acc = 0.0;
    for (int i = 0; i < kTerms; ++i)
        for (int j = 0; j < kTerms; ++j) {
            const int e = i + j - 1;
            if ((i + j) % 2 == 0 || e >= kTerms - 1)
                continue;
            acc += f[i] * g[j] * (j % 2 == 0 ? 1.0 : -1.0) * dpow[e];
        }
    return acc / kPi;
}

double LimitKernel::sigma(int n, int edge_sigma_sign) const
{
    if (regime == RegimeLabel::EdgeNonResonant || regime == RegimeLabel::EdgeResonant)
        return edge_sigma_sign / (static_cast<double>(n) * n);
    return 1.0 / n;
}

cplx LimitKernel::operator()(cplx a, cplx b) const
{
    switch (regime) {
    case RegimeLabel::InteriorBulk:
    case RegimeLabel::ClosedGap:
        return sinc_kernel(v, a, b);
    case RegimeLabel::EdgeNonResonant:
    case RegimeLabel::EdgeResonant: {
        const double scale = w / (static_cast<double>(p) * p);
        return bessel_jstar(order, scale * a, scale * std::conj(b)) / bessel_jstar(order, 0.0, 0.0);
    }
    case RegimeLabel::OutsideBands:
        break;
    }
    throw DomainError("limit kernel: theta lies outside the bands");
}

VerblunskyPeriod rotate_period(const VerblunskyPeriod& even_period)
{
    const int p = even_period.period();
    std::vector<cplx> a(static_cast<std::size_t>(p));
    for (int n = 0; n < p; ++n)
        a[n] = std::polar(1.0, -kTwoPi * (n + 1) / p) * even_period.alpha(n);
    return VerblunskyPeriod(std::move(a));
}

LimitKernel limit_kernel(const Discriminant& d, const BandStructure& bands, double theta,
                         const LimitOptions& opt)
{
    LimitKernel lk;
    lk.p = d.p();
    lk.theta = wrap_angle(theta);
    lk.regime = classify_point(d, bands, theta);
    const Feature nf = nearest_feature(bands, theta);
    switch (lk.regime) {
    case RegimeLabel::OutsideBands:
        throw DomainError("theta = " + std::to_string(lk.theta) + " lies in a gap (regime " +
                          std::string(to_string(lk.regime)) + ")");
    case RegimeLabel::InteriorBulk:
        lk.v = v_density(d, bands, theta);
        return lk;
    case RegimeLabel::ClosedGap:
        if (nf.distance <= kFeatureTol)
            lk.theta = nf.theta;
        lk.v = v_density(d, bands, lk.theta);
        return lk;
    case RegimeLabel::EdgeNonResonant:
    case RegimeLabel::EdgeResonant:
        break;
    }
    lk.theta = nf.theta;
    lk.delta_sign = nf.delta_sign;
    lk.order = lk.regime == RegimeLabel::EdgeResonant ? -0.5 : 0.5;
    if (nf.delta_sign > 0) {
        lk.w = d.W(lk.theta);
        return lk;
    }
    if (!opt.experimental_neg_edge)
        throw UnsupportedCase("edge at theta = " + std::to_string(lk.theta) +
                              " has Delta = -2; enable the experimental rotation to handle it");
    const Discriminant dr(rotate_period(d.period()));
    const BandStructure br = band_structure(dr, std::max(bands.grid_size, 4096));
    const double tr = wrap_angle(lk.theta + kTwoPi / d.p());
    const Feature fr = nearest_feature(br, tr);
    const RegimeLabel lr = classify_point(dr, br, tr);
    if (lr != lk.regime || fr.delta_sign != 1)
        throw ConsistencyError("rotation did not map the Delta = -2 edge onto a Delta = +2 edge "
                               "of the same type");
    lk.w = dr.W(fr.theta);
    lk.rotated = true;
    return lk;
}

cplx predicted_limit(const Discriminant& d, const BandStructure& bands, double theta, cplx a,
                     cplx b, const LimitOptions& opt)
{
    return limit_kernel(d, bands, theta, opt)(a, b);
}

cplx universality_ratio(const Discriminant& d, const LimitKernel& lk, cplx a, cplx b, int n,
                        int edge_sigma_sign)
{
    if (n < 10)
        throw ArgumentError("universality_ratio: n must be >= 10");
    const double sig = lk.sigma(n, edge_sigma_sign);
    const cplx z0 = std::polar(1.0, lk.theta);
    const cplx za = z0 * std::exp(cplx(0.0, 1.0) * a * sig);
    const cplx zb = z0 * std::exp(cplx(0.0, 1.0) * b * sig);
    const double diag = cd_kernel_direct(d.period(), n, z0, z0).real();
    return cd_kernel_direct(d.period(), n, za, zb) / diag;
}

cplx universality_ratio(const Discriminant& d, const BandStructure& bands, double theta, cplx a,
                        cplx b, int n, const LimitOptions& opt)
{
    return universality_ratio(d, limit_kernel(d, bands, theta, opt), a, b, n, opt.edge_sigma_sign);
}

UniversalityReport universality_sweep(const Discriminant& d, const BandStructure& bands,
                                      double theta, const std::vector<int>& ns,
                                      const std::vector<cplx>& as, const std::vector<cplx>& bs,
                                      const LimitOptions& opt)
{
    UniversalityReport rep;
    rep.limit = limit_kernel(d, bands, theta, opt);
    rep.ns = ns;
    const VerblunskyPeriod& v = d.period();
    const cplx z0 = std::polar(1.0, rep.limit.theta);
    for (int n : ns) {
        if (n < 10)
            throw ArgumentError("universality_sweep: n must be >= 10");
        const double sig = rep.limit.sigma(n, opt.edge_sigma_sign);
        auto seq = [&](cplx c) { return phi_sequence(v, n, z0 * std::exp(cplx(0.0, 1.0) * c * sig)); };
        std::vector<std::vector<cplx>> pa, pb;
        for (cplx a : as)
            pa.push_back(seq(a));
        for (cplx b : bs)
            pb.push_back(seq(b));
        const std::vector<cplx> p0 = phi_sequence(v, n, z0);
        double diag = 0.0;
        for (cplx c : p0)
            diag += std::norm(c);
        double worst = 0.0;
        for (std::size_t i = 0; i < as.size(); ++i)
            for (std::size_t j = 0; j < bs.size(); ++j) {
                cplx k = 0.0;
                for (int m = 0; m <= n; ++m)
                    k += pa[i][m] * std::conj(pb[j][m]);
                UniversalityRow row;
                row.n = n;
                row.a = as[i];
                row.b = bs[j];
                row.ratio = k / diag;
                row.predicted = rep.limit(as[i], bs[j]);
                row.error = std::abs(row.ratio - row.predicted);
                worst = std::max(worst, row.error);
                rep.rows.push_back(row);
            }
        rep.max_error.push_back(worst);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.max_error.size(); ++i)
        if (rep.max_error[i] > rep.max_error[i - 1])
            rep.monotone = false;
    return rep;
}

} // namespace opuc
