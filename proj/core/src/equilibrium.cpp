#include "opuc/equilibrium.hpp"

#include "opuc/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace opuc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Gauss8 = boost::math::quadrature::gauss<double, 8>;

int edge_sign_at(const BandStructure& bands, double theta)
{
    for (const EdgeRecord& e : bands.edges)
        if (angular_distance(e.theta, theta) < 1e-12)
            return e.delta_sign;
    return 0;
}

} // namespace

BandCdf::BandCdf(const Discriminant& d, const BandStructure& bands, int quad_points_per_band)
    : d_(&d), panels_(quad_points_per_band)
{
    if (quad_points_per_band < 64)
        throw ArgumentError("band_cdf: quad_points_per_band must be >= 64");
    if (bands.bands.empty())
        throw DomainError("band_cdf: no bands");
    x1_ = bands.bands.front().start;

    const double du = kPi / panels_;
    double acc = 0.0;
    for (std::size_t bi = 0; bi < bands.bands.size(); ++bi) {
        Band b;
        b.arc = bands.bands[bi];
        b.mid = 0.5 * (b.arc.start + b.arc.end);
        b.half = 0.5 * b.arc.length();
        b.open_ends = !bands.full_circle;
        if (b.open_ends) {
            b.start_sign = edge_sign_at(bands, b.arc.start);
            b.end_sign = edge_sign_at(bands, b.arc.end);
        }
        for (const ClosedGap& g : bands.closed_gaps)
            if (b.arc.contains(g.theta))
                b.interior.push_back({g.theta, g.delta_sign});

        b.before = acc;
        b.cum.assign(static_cast<std::size_t>(panels_) + 1, 0.0);
        for (int i = 0; i < panels_; ++i) {
            const double lo = -0.5 * kPi + i * du;
            const double piece =
                Gauss8::integrate([&](double u) { return integrand(b, u); }, lo, lo + du);
            if (!std::isfinite(piece))
                throw NumericError("band_cdf: non-finite integrand in band " + std::to_string(bi));
            b.cum[i + 1] = b.cum[i] + piece;
        }
        acc += b.cum.back();
        bands_.push_back(std::move(b));
    }
    total_raw_ = acc;
    if (!(total_raw_ > 0.0))
        throw NumericError("band_cdf: band mass is not positive");
}

double BandCdf::integrand(const Band& b, double u) const
{
    const double theta = b.mid + b.half * std::sin(u);
    double ref = 0.0, offset = 0.0;
    int sign = 0;
    double dist = std::numeric_limits<double>::infinity();
    if (b.open_ends) {
        // Offsets from the ends without the 1 + sin(u) cancellation.
        if (u < 0.0) {
            const double sh = std::sin(0.5 * (u + 0.5 * kPi));
            ref = b.arc.start;
            offset = 2.0 * b.half * sh * sh;
            sign = b.start_sign;
        } else {
            const double sh = std::sin(0.5 * (0.5 * kPi - u));
            ref = b.arc.end;
            offset = -2.0 * b.half * sh * sh;
            sign = b.end_sign;
        }
        dist = std::abs(offset);
    }
    bool at_gap = false;
    for (const Ref& g : b.interior) {
        const double off = std::remainder(theta - g.theta, kTwoPi);
        if (std::abs(off) < dist) {
            dist = std::abs(off);
            ref = g.theta;
            offset = off;
            sign = g.sign;
            at_gap = true;
        }
    }
    double v = sign == 0 ? v_density_from(*d_, theta, 0.0, 0) : v_density_from(*d_, ref, offset, sign);
    if (std::isinf(v) && at_gap)
        v = std::sqrt(std::abs(d_->W_prime(ref)) / 2.0) / d_->p();
    return v * b.half * std::cos(u) / kTwoPi;
}

double BandCdf::partial(const Band& b, double t) const
{
    const double x = std::clamp((t - b.mid) / b.half, -1.0, 1.0);
    const double u = std::asin(x);
    const double du = kPi / panels_;
    const int idx = std::clamp(static_cast<int>(std::floor((u + 0.5 * kPi) / du)), 0, panels_ - 1);
    const double lo = -0.5 * kPi + idx * du;
    if (u <= lo)
        return b.cum[idx];
    return b.cum[idx] + Gauss8::integrate([&](double v) { return integrand(b, v); }, lo, u);
}

double BandCdf::operator()(double theta) const
{
    const double t = x1_ + wrap_angle(theta - x1_);
    for (const Band& b : bands_) {
        if (t < b.arc.start)
            return b.before / total_raw_;
        if (t <= b.arc.end)
            return std::clamp((b.before + partial(b, t)) / total_raw_, 0.0, 1.0);
    }
    return 1.0;
}

std::vector<std::pair<double, double>> BandCdf::table(int per_band) const
{
    std::vector<std::pair<double, double>> out;
    for (const Band& b : bands_) {
        for (int j = 0; j < per_band; ++j) {
            const double t = b.arc.start + (j + 0.5) * b.arc.length() / per_band;
            out.emplace_back(wrap_angle(t), (b.before + partial(b, t)) / total_raw_);
        }
    }
    return out;
}

namespace {

cplx singular_function(const Discriminant& d, const BandCdf& k, int s, double theta)
{
    const cplx z = std::polar(1.0, theta);
    const PolyQuad& q = d.quad(s);
    const cplx phi_s = q.phi(z);
    if (std::abs(phi_s) < 1e-14 * std::max(1.0, q.phi.max_abs_coeff()))
        throw DomainError("singular points: phi_" + std::to_string(s) + " vanishes at theta = " +
                          std::to_string(wrap_angle(theta)));
    const cplx sigma = q.psi(z) / phi_s;
    return 2.0 * std::polar(1.0, -kPi * d.p() * k(theta)) + d.eta(z, sigma);
}

} // namespace

double singular_residual(const Discriminant& d, const BandCdf& k, int s, double theta)
{
    return std::abs(singular_function(d, k, s, theta));
}

SingularSearch find_singular_points(const Discriminant& d, const BandStructure& bands,
                                    const BandCdf& k, int s, int scan_size)
{
    if (s < 0 || s >= d.p())
        throw ArgumentError("find_singular_points: s = " + std::to_string(s) + " outside [0, " +
                            std::to_string(d.p()) + ")");
    if (scan_size < 16)
        throw ArgumentError("find_singular_points: scan_size must be >= 16");

    SingularSearch out;
    out.s = s;
    auto rho = [&](double t) { return singular_residual(d, k, s, t); };

    std::vector<SingularPoint> candidates;
    for (std::size_t bi = 0; bi < bands.bands.size(); ++bi) {
        const Arc& arc = bands.bands[bi];
        const double step = arc.length() / scan_size;
        std::vector<double> th(scan_size), r(scan_size);
        for (int j = 0; j < scan_size; ++j) {
            th[j] = arc.start + (j + 0.5) * step;
            r[j] = rho(th[j]);
        }
        for (int j = 0; j < scan_size; ++j) {
            const double left = j > 0 ? r[j - 1] : std::numeric_limits<double>::infinity();
            const double right = j + 1 < scan_size ? r[j + 1] : std::numeric_limits<double>::infinity();
            if (!(r[j] <= left && r[j] <= right))
                continue;
            const double lo = std::max(arc.start, th[j] - step);
            const double hi = std::min(arc.end, th[j] + step);
            std::uintmax_t iters = 200;
            auto [t, val] = boost::math::tools::brent_find_minima(
                rho, lo, hi, std::numeric_limits<double>::digits / 2, iters);

            // Gauss-Newton on the complex residual: near a zero it is linear in theta.
            for (int it = 0; it < 6 && val > 0.0; ++it) {
                const double hstep = 1e-7;
                const cplx f0 = singular_function(d, k, s, t);
                const cplx df = (singular_function(d, k, s, t + hstep) -
                                 singular_function(d, k, s, t - hstep)) / (2.0 * hstep);
                if (std::norm(df) == 0.0)
                    break;
                const double cand = t - (std::conj(df) * f0).real() / std::norm(df);
                if (cand < arc.start || cand > arc.end)
                    break;
                const double cval = rho(cand);
                if (!(cval < val))
                    break;
                t = cand;
                val = cval;
            }
            candidates.push_back({wrap_angle(t), s, val, static_cast<int>(bi)});
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const SingularPoint& a, const SingularPoint& b) { return a.theta < b.theta; });
    std::vector<SingularPoint> unique;
    for (const SingularPoint& c : candidates) {
        if (!unique.empty() && angular_distance(unique.back().theta, c.theta) < 1e-9) {
            if (c.residual < unique.back().residual)
                unique.back() = c;
            continue;
        }
        unique.push_back(c);
    }

    for (const SingularPoint& c : unique) {
        if (c.residual < 1e-6) {
            if (nearest_feature(bands, c.theta).distance <= 1e-6)
                out.feature_hits.push_back(c);
            else
                out.points.push_back(c);
        } else if (c.residual < 1e-3) {
            out.near_misses.push_back(c);
        }
    }
    return out;
}

VerblunskyPeriod make_spike_family(int p, cplx alpha)
{
    if (p < 2 || p % 2 != 0)
        throw ArgumentError("make_spike_family: p must be even and >= 2, got " + std::to_string(p));
    std::vector<cplx> a(static_cast<std::size_t>(p), 0.0);
    a.back() = alpha;
    return VerblunskyPeriod(std::move(a));
}

cplx critical_circle_alpha(double c)
{
    if (!(c > 0.0 && c < 1.0))
        throw ArgumentError("critical_circle_alpha: c must lie in (0, 1)");
    return {-c, std::sqrt(c - c * c)};
}

} // namespace opuc
