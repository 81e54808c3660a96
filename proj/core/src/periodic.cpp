#include "opuc/periodic.hpp"

#include "opuc/chebyshev.hpp"
#include "opuc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace opuc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bisection on a sign change of f over [lo, hi]; "positive" means f >= 0.
template <class F>
double bisect(F&& f, double lo, double hi)
{
    const bool pos_lo = f(lo) >= 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if ((f(mid) >= 0.0) == pos_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

cplx z_half(const Discriminant& d, cplx z)
{
    return ipow(z, d.p() / 2);
}

} // namespace

double wrap_angle(double theta)
{
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0)
        t += kTwoPi;
    if (t >= kTwoPi)
        t = 0.0;
    return t;
}

namespace {

// Bisection lands within rounding of 0 or 2pi for features at angle 0.
double snap_zero(double theta)
{
    const double t = wrap_angle(theta);
    return (t < 1e-14 || kTwoPi - t < 1e-14) ? 0.0 : t;
}

} // namespace

double angular_distance(double a, double b)
{
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

Discriminant::Discriminant(const VerblunskyPeriod& v, PsiScaling psi)
    : v_(v.even()), p_(v_.period()), r_(v_.r())
{
    quads_ = iterate_polys_upto(v_, p_, Normalization::Orthonormal);
    if (psi == PsiScaling::MonicDebug) {
        for (PolyQuad& q : quads_) {
            q.psi *= 1.0 / q.kappa;
            q.psi_star *= 1.0 / q.kappa;
        }
    }
    const PolyQuad& q = quads_.back();
    half_trace_ = (q.phi + q.phi_star + q.psi + q.psi_star) * 0.5;
    delta_ = LaurentPoly::from_poly(half_trace_, -p_ / 2);
    phi_diff_ = q.phi - q.phi_star;
    eta_plus_ = phi_diff_ - q.psi - q.psi_star;
    eta_minus_ = (q.phi_star - q.phi) - q.psi - q.psi_star;
}

cplx Discriminant::eta(cplx z, cplx sigma) const
{
    const PolyQuad& q = quads_.back();
    return sigma * phi_diff_(z) - q.psi(z) - q.psi_star(z);
}

double Discriminant::on_circle(double theta) const
{
    cplx acc = 0.0;
    for (int e = delta_.min_exponent(); e <= delta_.max_exponent(); ++e)
        acc += delta_.coeff(e) * std::polar(1.0, e * theta);
    return acc.real();
}

double Discriminant::difference_on_circle(double ref, double offset) const
{
    // e^{ij (r + o)} - e^{ij r} = 2i sin(j o / 2) e^{ij (r + o / 2)}
    const double half_diff = 0.5 * offset;
    const double half_sum = ref + half_diff;
    cplx acc = 0.0;
    for (int e = delta_.min_exponent(); e <= delta_.max_exponent(); ++e)
        acc += delta_.coeff(e) * cplx(0.0, 2.0 * std::sin(e * half_diff)) *
               std::polar(1.0, e * half_sum);
    return acc.real();
}

double Discriminant::W(double theta) const
{
    cplx acc = 0.0;
    for (int e = delta_.min_exponent(); e <= delta_.max_exponent(); ++e)
        acc += cplx(0.0, e) * delta_.coeff(e) * std::polar(1.0, e * theta);
    return acc.real();
}

double Discriminant::W_prime(double theta) const
{
    cplx acc = 0.0;
    for (int e = delta_.min_exponent(); e <= delta_.max_exponent(); ++e)
        acc -= static_cast<double>(e * e) * delta_.coeff(e) * std::polar(1.0, e * theta);
    return acc.real();
}

double Discriminant::scale() const
{
    double s = 0.0;
    for (cplx c : delta_.coeffs())
        s += std::abs(c);
    return s;
}

cplx Discriminant::scaled_gamma(cplx z) const
{
    const cplx q = half_trace_(z);
    const cplx root = std::sqrt(0.25 * q * q - ipow(z, p_));
    const cplx g1 = 0.5 * q + root;
    const cplx g2 = 0.5 * q - root;
    return std::abs(g1) >= std::abs(g2) ? g1 : g2;
}

namespace {

void check_ks(const Discriminant& d, int k, int s)
{
    if (k < 0)
        throw ArgumentError("closed form: k must be >= 0");
    if (s < 0 || s >= d.p())
        throw ArgumentError("closed form: s = " + std::to_string(s) + " outside [0, " +
                            std::to_string(d.p()) + ")");
}

// Combine the period-start values with the degree-s quad.
PhiPair shift_by_s(const Discriminant& d, int s, cplx z, PhiPair base)
{
    if (s == 0)
        return base;
    const PolyQuad& q = d.quad(s);
    const cplx ph = q.phi(z), ph_s = q.phi_star(z), ps = q.psi(z), ps_s = q.psi_star(z);
    return {0.5 * ((ph + ps) * base.phi + (ph - ps) * base.phi_star),
            0.5 * ((ph_s - ps_s) * base.phi + (ph_s + ps_s) * base.phi_star)};
}

} // namespace

PhiPair closed_form_phi(const Discriminant& d, int k, int s, cplx z)
{
    check_ks(d, k, s);
    if (z == 0.0)
        throw DomainError("closed_form_phi: z = 0");
    const cplx zh = z_half(d, z);
    const cplx x = 0.5 * d(z);
    const cplx uk = cheb::cheb_u(k, x);
    const cplx ukm1 = cheb::cheb_u(k - 1, x);
    const cplx lead = ipow(zh, k);
    const PhiPair base{lead * (uk + d.eta(z, 1.0) / (2.0 * zh) * ukm1),
                       lead * (uk + d.eta(z, -1.0) / (2.0 * zh) * ukm1)};
    return shift_by_s(d, s, z, base);
}

PhiPair closed_form_phi_normalized(const Discriminant& d, int k, int s, cplx z)
{
    check_ks(d, k, s);
    if (z == 0.0)
        throw DomainError("closed_form_phi_normalized: z = 0");
    (void)gamma_pm(d, z); // rejects band points
    const cplx zh = z_half(d, z);
    const cheb::ScaledPair u = cheb::cheb_u_scaled_pair(k, 0.5 * d(z));
    const PhiPair base{u.uk + d.eta(z, 1.0) / (2.0 * zh) * u.ukm1,
                       u.uk + d.eta(z, -1.0) / (2.0 * zh) * u.ukm1};
    return shift_by_s(d, s, z, base);
}

GammaPair gamma_pm(const Discriminant& d, cplx z)
{
    if (z == 0.0)
        throw DomainError("gamma_pm: z = 0 (use Discriminant::scaled_gamma)");
    const cplx g = cheb::gamma_plus(0.5 * d(z));
    if (std::abs(g) - 1.0 <= 1e-10)
        throw DomainError("gamma_pm: z lies on a band, branch is ambiguous");
    return {g, 1.0 / g};
}

SzegoLimits szego_asymptotics(const Discriminant& d, int s, cplx z)
{
    check_ks(d, 0, s);
    const GammaPair g = gamma_pm(d, z);
    const cplx zh = z_half(d, z);
    const cplx root = g.plus - 0.5 * d(z); // sqrt(Delta^2/4 - 1) on the Gamma_+ branch
    const cplx j0 = g.plus / (2.0 * root) + d.eta(z, 1.0) / (4.0 * zh * root);
    const cplx l0 = g.plus / (2.0 * root) + d.eta(z, -1.0) / (4.0 * zh * root);
    const PhiPair js = shift_by_s(d, s, z, {j0, l0});
    return {js.phi, js.phi_star};
}

bool Arc::contains(double theta, double tol) const
{
    const double t = wrap_angle(theta);
    return (t >= start - tol && t <= end + tol) ||
           (t + kTwoPi >= start - tol && t + kTwoPi <= end + tol);
}

BandStructure band_structure(const Discriminant& d, int grid_size)
{
    if (grid_size < 4096)
        throw ArgumentError("band_structure: grid_size must be >= 4096, got " +
                            std::to_string(grid_size));
    BandStructure out;
    out.grid_size = grid_size;

    const double scale = d.scale();
    const double touch_tol = 1e-10 * scale;
    const double h = kTwoPi / grid_size;
    auto f = [&](double t) { return d.on_circle(t); };
    auto w = [&](double t) { return d.W(t); };

    std::vector<double> fv(grid_size), wv(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        fv[i] = f(i * h);
        wv[i] = w(i * h);
    }

    // Sample points: the grid plus every critical point of Delta on the
    // circle, so Delta is monotone between consecutive samples.
    struct Sample {
        double theta;
        double value;
        bool critical;
    };
    std::vector<Sample> pts;
    pts.reserve(static_cast<std::size_t>(grid_size) + 64);
    for (int i = 0; i < grid_size; ++i) {
        pts.push_back({i * h, fv[i], false});
        const double w0 = wv[i], w1 = wv[(i + 1) % grid_size];
        if ((w0 >= 0.0) != (w1 >= 0.0)) {
            const double tc = bisect(w, i * h, (i + 1) * h);
            pts.push_back({tc, f(tc), true});
        }
    }

    // Closed gaps: critical points touching +-2 without crossing.
    for (const Sample& s : pts) {
        if (!s.critical)
            continue;
        for (int sign : {1, -1}) {
            const double L = 2.0 * sign;
            if (std::abs(s.value - L) > touch_tol)
                continue;
            const double wp = d.W_prime(s.theta);
            // A touch from inside the band: local max at +2, local min at -2.
            if (sign * wp >= 0.0 || std::abs(d.W(s.theta)) > 1e-8 * scale)
                continue;
            ClosedGap g;
            g.theta = snap_zero(s.theta);
            g.delta_sign = sign;
            g.warning = sign * (s.value - L) > 1e-13 * scale;
            out.closed_gaps.push_back(g);
        }
    }

    // Band edges: strict level crossings. Samples within touch_tol of the
    // level count as neither side.
    std::vector<EdgeRecord> edges;
    for (int sign : {1, -1}) {
        const double L = 2.0 * sign;
        auto state = [&](double v) { return v - L > touch_tol ? 1 : (v - L < -touch_tol ? -1 : 0); };
        auto g = [&](double t) { return f(t) - L; };
        const std::size_t n = pts.size();
        // Start from a sample with a definite state so the cyclic scan is consistent.
        std::size_t first = 0;
        while (first < n && state(pts[first].value) == 0)
            ++first;
        if (first == n)
            continue;
        double prev_theta = pts[first].theta;
        int prev_state = state(pts[first].value);
        for (std::size_t step = 1; step <= n; ++step) {
            const std::size_t idx = (first + step) % n;
            double theta = pts[idx].theta;
            if (first + step >= n)
                theta += kTwoPi;
            const int st = state(pts[idx].value);
            if (st == 0)
                continue;
            if (st != prev_state) {
                EdgeRecord e;
                e.theta = snap_zero(bisect(g, prev_theta, theta));
                e.delta_sign = sign;
                e.warning = std::abs(d.W(e.theta)) <= 1e-8 * scale;
                edges.push_back(e);
            }
            prev_theta = theta;
            prev_state = st;
        }
    }

    // An edge sitting on a closed gap means the touch could not be resolved.
    for (const EdgeRecord& e : edges) {
        bool merged = false;
        for (ClosedGap& g : out.closed_gaps) {
            if (angular_distance(e.theta, g.theta) <= 1e-6) {
                g.warning = true;
                merged = true;
            }
        }
        if (!merged)
            out.edges.push_back(e);
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const EdgeRecord& a, const EdgeRecord& b) { return a.theta < b.theta; });
    std::sort(out.closed_gaps.begin(), out.closed_gaps.end(),
              [](const ClosedGap& a, const ClosedGap& b) { return a.theta < b.theta; });

    // Resonances.
    for (cplx root : roots(d.resonance_poly())) {
        if (std::abs(std::abs(root) - 1.0) > 1e-6) {
            ++out.rejected_resonances;
            continue;
        }
        out.resonances.push_back(snap_zero(std::arg(root)));
    }
    std::sort(out.resonances.begin(), out.resonances.end());
    for (EdgeRecord& e : out.edges)
        for (double r : out.resonances)
            if (angular_distance(e.theta, r) < 1e-6)
                e.is_resonance = true;

    // Bands between consecutive edges.
    const std::size_t ne = out.edges.size();
    if (ne == 0) {
        double max_abs = 0.0;
        for (double v : fv)
            max_abs = std::max(max_abs, std::abs(v));
        if (max_abs <= 2.0 + touch_tol) {
            out.bands.push_back({0.0, kTwoPi});
            out.full_circle = true;
        }
        return out;
    }
    for (std::size_t i = 0; i < ne; ++i) {
        const double a = out.edges[i].theta;
        double b = out.edges[(i + 1) % ne].theta;
        if (b <= a)
            b += kTwoPi;
        // Probe off-center: the midpoint can be a closed gap where |Delta| = 2.
        if (std::abs(f(a + 0.382 * (b - a))) <= 2.0 + touch_tol)
            out.bands.push_back({a, b});
    }
    std::sort(out.bands.begin(), out.bands.end(),
              [](const Arc& x, const Arc& y) { return x.start < y.start; });
    return out;
}

std::string_view to_string(RegimeLabel r)
{
    switch (r) {
    case RegimeLabel::InteriorBulk:
        return "InteriorBulk";
    case RegimeLabel::EdgeNonResonant:
        return "EdgeNonResonant";
    case RegimeLabel::EdgeResonant:
        return "EdgeResonant";
    case RegimeLabel::ClosedGap:
        return "ClosedGap";
    case RegimeLabel::OutsideBands:
        return "OutsideBands";
    }
    return "?";
}

Feature nearest_feature(const BandStructure& bands, double theta)
{
    Feature best;
    best.distance = std::numeric_limits<double>::infinity();
    for (const EdgeRecord& e : bands.edges) {
        const double dist = angular_distance(theta, e.theta);
        if (dist < best.distance)
            best = {e.is_resonance ? RegimeLabel::EdgeResonant : RegimeLabel::EdgeNonResonant,
                    e.theta, e.delta_sign, dist};
    }
    for (const ClosedGap& g : bands.closed_gaps) {
        const double dist = angular_distance(theta, g.theta);
        if (dist < best.distance)
            best = {RegimeLabel::ClosedGap, g.theta, g.delta_sign, dist};
    }
    return best;
}

RegimeLabel classify_point(const Discriminant& d, const BandStructure& bands, double theta,
                           double tol)
{
    const Feature nf = nearest_feature(bands, theta);
    if (nf.distance <= kFeatureTol)
        return nf.label;
    bool inside = false;
    for (const Arc& a : bands.bands)
        inside = inside || a.contains(theta);
    if (!inside)
        return RegimeLabel::OutsideBands;
    if (std::abs(d.on_circle(theta)) < 2.0 - tol)
        return RegimeLabel::InteriorBulk;
    return nf.label;
}

double v_density(const Discriminant& d, const BandStructure& bands, double theta)
{
    const RegimeLabel label = classify_point(d, bands, theta);
    const Feature nf = nearest_feature(bands, theta);
    auto closed_gap_value = [&](double t0) { return std::sqrt(std::abs(d.W_prime(t0)) / 2.0) / d.p(); };
    switch (label) {
    case RegimeLabel::OutsideBands:
        throw DomainError("v_density: theta = " + std::to_string(wrap_angle(theta)) +
                          " lies in a gap");
    case RegimeLabel::EdgeNonResonant:
    case RegimeLabel::EdgeResonant:
        return std::numeric_limits<double>::infinity();
    case RegimeLabel::ClosedGap:
        if (nf.distance <= kFeatureTol)
            return closed_gap_value(nf.theta);
        break;
    case RegimeLabel::InteriorBulk:
        break;
    }
    if (nf.delta_sign == 0) // no features at all
        return v_density_from(d, theta, 0.0, 0);
    const double offset = std::remainder(theta - nf.theta, kTwoPi);
    const double v = v_density_from(d, nf.theta, offset, nf.delta_sign);
    if (std::isinf(v) && nf.label == RegimeLabel::ClosedGap)
        return closed_gap_value(nf.theta);
    return v;
}

double v_density_from(const Discriminant& d, double ref, double offset, int ref_sign)
{
    const double theta = ref + offset;
    const double w = std::abs(d.W(theta));
    if (ref_sign == 0) {
        const double delta = d.on_circle(theta);
        return w / (d.p() * std::sqrt(4.0 - delta * delta));
    }
    // 2 - s Delta(theta), with s Delta(ref) = 2.
    const double x = -ref_sign * d.difference_on_circle(ref, offset);
    if (!(x > 0.0))
        return std::numeric_limits<double>::infinity();
    return w / (d.p() * std::sqrt(x * (4.0 - x)));
}

} // namespace opuc
