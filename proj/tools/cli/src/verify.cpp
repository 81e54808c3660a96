#include "commands.hpp"

#include "opuc_cli/cli.hpp"

#include "opuc/chebyshev.hpp"
#include "opuc/errors.hpp"
#include "opuc/kernels.hpp"
#include "opuc/periodic.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace opuc::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform [0, 1) from the raw 64-bit stream. std::uniform_real_distribution is
// implementation-defined, which would make reports depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
    cplx in_disk(double rmax) { return std::polar(rmax * std::sqrt(uniform()), kTwoPi * uniform()); }
    cplx annulus(double lo, double hi) { return std::polar(uniform(lo, hi), kTwoPi * uniform()); }

private:
    std::mt19937_64 gen_;
};

struct Property {
    std::string name;
    double tolerance = 0.0;
    double worst = 0.0;
    int samples = 0;
    json worst_case;
    std::string error;

    bool pass() const { return error.empty() && worst <= tolerance; }

    void record(double residual, json replay)
    {
        ++samples;
        if (std::isnan(residual))
            residual = std::numeric_limits<double>::infinity();
        if (samples == 1 || residual > worst) {
            worst = residual;
            worst_case = std::move(replay);
        }
    }
};

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

double poly_distance(const ComplexPoly& a, const ComplexPoly& b)
{
    double d = 0.0;
    for (int j = 0; j <= std::max(a.degree(), b.degree()); ++j)
        d = std::max(d, std::abs(a.coeff(j) - b.coeff(j)));
    return d;
}

// Size of the terms the closed form adds up for phi_n(z). Off the circle in
// the free case they are far larger than the result (they cancel), so this is
// the scale rounding errors are measured on. For generic V it is close to |phi_n|.
double closed_form_scale(const Discriminant& d, int n, cplx z)
{
    const int p = d.p(), k = n / p, s = n % p;
    const cplx zh = ipow(z, p / 2);
    const cplx x = 0.5 * d(z);
    const double uk = std::abs(cheb::cheb_u(k, x)), ukm1 = std::abs(cheb::cheb_u(k - 1, x));
    const double eta = std::max(std::abs(d.eta(z, 1.0)), std::abs(d.eta(z, -1.0))) / std::abs(2.0 * zh);
    double t = std::pow(std::abs(zh), k) * std::max(uk, eta * ukm1);
    if (s > 0) {
        const PolyQuad& q = d.quad(s);
        t *= std::max(std::abs(q.phi(z)) + std::abs(q.psi(z)), std::abs(q.phi_star(z)) + std::abs(q.psi_star(z)));
    }
    return t;
}

} // namespace

Report cmd_verify(const Options& o)
{
    Rng rng(o.seed);
    VerblunskyPeriod v = [&] {
        if (!o.alphas.empty())
            return load_alphas(o.alphas);
        if (o.p < 1 || o.p > 64)
            throw ArgumentError("--p must lie in [1, 64]");
        std::vector<cplx> a(static_cast<std::size_t>(o.p));
        for (cplx& x : a)
            x = rng.in_disk(0.8);
        return VerblunskyPeriod(std::move(a));
    }();
    const PsiScaling scaling = o.debug_wrong_psi ? PsiScaling::MonicDebug : PsiScaling::Matched;
    const Discriminant d(v, scaling);
    const int p = d.p();
    const int grid = o.grid.value_or(16384);

    std::vector<Property> props;
    auto run = [&](const char* name, double tol, const std::function<void(Property&)>& body) {
        Property pr;
        pr.name = name;
        pr.tolerance = tol;
        try {
            body(pr);
        } catch (const Error& e) {
            pr.error = e.what();
            pr.worst = std::numeric_limits<double>::infinity();
        }
        props.push_back(std::move(pr));
    };

    run("closed_form", 1e-9, [&](Property& pr) {
        for (int i = 0; i < 200; ++i) {
            const int n = rng.integer(0, 200);
            const int k = n / p, s = n % p;
            const cplx z = rng.annulus(0.5, 2.0);
            const PhiPair ph = closed_form_phi(d, k, s, z);
            const QuadValues q = eval_quad_at(d.period(), n, z);
            const double scale = closed_form_scale(d, n, z);
            pr.record(std::max(std::abs(ph.phi - q.phi) / std::max(std::abs(q.phi), scale),
                               std::abs(ph.phi_star - q.phi_star) / std::max(std::abs(q.phi_star), scale)),
                      {{"k", k}, {"s", s}, {"z", complex_out(z)}});
        }
    });

    run("wronskian", 1e-9, [&](Property& pr) {
        for (int i = 0; i < 100; ++i) {
            const int n = rng.integer(0, 200);
            const cplx z = std::polar(1.0, kTwoPi * rng.uniform());
            const QuadValues q = eval_quad_at(d.period(), n, z);
            const cplx lhs = q.psi_star * q.phi + q.psi * q.phi_star;
            const double scale =
                std::max({2.0, std::abs(q.psi_star * q.phi), std::abs(q.psi * q.phi_star)});
            pr.record(std::abs(lhs - 2.0 * ipow(z, n)) / scale, {{"n", n}, {"z", complex_out(z)}});
        }
    });

    run("delta_real_on_circle", 1e-10, [&](Property& pr) {
        for (int i = 0; i < 256; ++i) {
            const double t = kTwoPi * i / 256;
            pr.record(std::abs(d(std::polar(1.0, t)).imag()) / d.scale(), {{"theta", angle_out(t)}});
        }
    });

    std::optional<BandStructure> bands;
    auto need_bands = [&]() -> const BandStructure& {
        if (!bands)
            throw ConsistencyError("band structure unavailable");
        return *bands;
    };

    run("band_edges", 1e-8, [&](Property& pr) {
        bands = band_structure(d, grid);
        for (const EdgeRecord& e : bands->edges)
            pr.record(std::abs(d.on_circle(e.theta) - 2.0 * e.delta_sign) / std::max(1.0, d.scale()),
                      {{"edge", angle_out(e.theta)}});
        for (const ClosedGap& g : bands->closed_gaps)
            pr.record(std::abs(d.on_circle(g.theta) - 2.0 * g.delta_sign) / std::max(1.0, d.scale()),
                      {{"closed_gap", angle_out(g.theta)}});
    });

    // A closed gap is a double root of phi_p - phi*_p, so the root finder only
    // places it to about sqrt(eps).
    run("closed_gaps_are_resonances", 1e-6, [&](Property& pr) {
        for (const ClosedGap& g : need_bands().closed_gaps) {
            double dist = kTwoPi;
            for (double t : bands->resonances)
                dist = std::min(dist, angular_distance(t, g.theta));
            pr.record(dist, {{"closed_gap", angle_out(g.theta)}});
        }
    });

    run("second_kind_at_resonances", 1e-7, [&](Property& pr) {
        const PolyQuad& q = d.quad(p);
        for (double t : need_bands().resonances) {
            const cplx z = std::polar(1.0, t);
            const cplx x = (q.psi(z) + q.psi_star(z)) / (2.0 * ipow(z, p / 2));
            const double delta = d.on_circle(t);
            double r = std::abs(x + 1.0 / x - delta) / std::max(1.0, std::abs(delta));
            if (std::abs(std::abs(delta) - 2.0) <= 1e-8)
                r = std::max(r, std::abs(x - delta / 2.0));
            pr.record(r, {{"resonance", angle_out(t)}, {"delta", delta}});
        }
    });

    run("kernel_cd", 1e-8, [&](Property& pr) {
        for (int i = 0; i < 50; ++i) {
            const int n = rng.integer(1, 300);
            const bool circle = i % 2 == 0;
            const cplx z = circle ? std::polar(1.0, kTwoPi * rng.uniform()) : rng.annulus(0.8, 1.1);
            const cplx w = circle ? std::polar(1.0, kTwoPi * rng.uniform()) : rng.annulus(0.8, 1.1);
            // Relative error, widened by the cancellation inside the closed form
            // for phi_{n+1} (a factor near 1 for generic V).
            const QuadValues qz = eval_quad_at(d.period(), n + 1, z), qw = eval_quad_at(d.period(), n + 1, w);
            const double sz = closed_form_scale(d, n + 1, z), sw = closed_form_scale(d, n + 1, w);
            const double amp = std::max(
                1.0, sz * sw /
                         (std::abs(qz.phi) * std::abs(qw.phi) + std::abs(qz.phi_star) * std::abs(qw.phi_star)));
            pr.record(rel(cd_kernel_fast(d, n, z, w), cd_kernel_direct(d.period(), n, z, w)) / amp,
                      {{"n", n}, {"z", complex_out(z)}, {"w", complex_out(w)}});
        }
    });

    run("wall_vs_pinter_nevai", 1e-9, [&](Property& pr) {
        for (int k = 1; k <= std::clamp(o.k, 1, 10); ++k) {
            const WallPair w = wall_polys(d, k);
            const WallPair pn = pinter_nevai_wall(d.period(), k * p - 1);
            const double scale = std::max({1.0, pn.A.max_abs_coeff(), pn.B.max_abs_coeff()});
            pr.record(std::max(poly_distance(w.A, pn.A), poly_distance(w.B, pn.B)) / scale, {{"k", k}});
        }
    });

    std::vector<cplx> disk;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            disk.push_back(std::polar(0.95 * i / 14, kTwoPi * j / 15));

    // Residuals below are "how far past the bound", so <= 0 passes.
    run("schur_bound", 0.0, [&](Property& pr) {
        for (cplx z : disk)
            pr.record(std::abs(schur_f(d, z)) - (1.0 - 1e-15), {{"z", complex_out(z)}});
    });

    run("caratheodory_positive", 0.0, [&](Property& pr) {
        for (cplx z : disk)
            pr.record(1e-300 - caratheodory_F(d, z).real(), {{"z", complex_out(z)}});
    });

    run("caratheodory_schur_link", 1e-8, [&](Property& pr) {
        for (cplx z : disk) {
            const cplx zf = z * schur_f(d, z);
            pr.record(std::abs(caratheodory_F(d, z) - (1.0 + zf) / (1.0 - zf)), {{"z", complex_out(z)}});
        }
    });

    run("generating_function", 1e-8, [&](Property& pr) {
        for (int i = 0; i < 30; ++i) {
            const cplx z = std::polar(1.0, kTwoPi * rng.uniform());
            const cplx t = rng.in_disk(0.2);
            pr.record(generating_function_residual(d, z, t, 60),
                      {{"z", complex_out(z)}, {"t", complex_out(t)}, {"N", 60}});
        }
    });

    run("period_rescaling_identity", 1e-9, [&](Property& pr) {
        for (int i = 0; i < 40; ++i) {
            const int m = 2 + i % 2, k = i % 21;
            const cplx z = rng.annulus(0.5, 2.0);
            const IdentityResidual r = cheb_period_identity(d.period(), m, k, z);
            pr.record(r.residual / std::max(std::abs(r.lhs), 1.0),
                      {{"m", m}, {"k", k}, {"z", complex_out(z)}});
        }
    });

    if (p <= 6) {
        run("zero_classification", 0.0, [&](Property& pr) {
            for (int k = 1; k <= 5; ++k)
                pr.record(classify_zeros_phi_diff(d, k, o.tol.value_or(1e-6), false).neither,
                          {{"k", k}});
        });
    }

    Report r;
    r.header = {"property", "max_residual", "tolerance", "samples", "pass"};
    json list = json::array();
    json failures = json::array();
    for (const Property& pr : props) {
        json e = {{"name", pr.name},
                  {"max_residual", std::isfinite(pr.worst) ? json(pr.worst) : json("inf")},
                  {"tolerance", pr.tolerance},
                  {"samples", pr.samples},
                  {"pass", pr.pass()},
                  {"worst_case", pr.worst_case}};
        if (!pr.error.empty())
            e["error"] = pr.error;
        r.tolerances[pr.name] = pr.tolerance;
        r.rows.push_back({pr.name, std::isfinite(pr.worst) ? csv_num(pr.worst) : "inf",
                          csv_num(pr.tolerance), std::to_string(pr.samples),
                          pr.pass() ? "true" : "false"});
        if (!pr.pass()) {
            json replay = {{"property", pr.name},
                           {"alphas", alphas_out(v.alphas())},
                           {"seed", o.seed},
                           {"case", pr.worst_case}};
            if (!pr.error.empty())
                replay["error"] = pr.error;
            failures.push_back(replay);
        }
        list.push_back(std::move(e));
    }
    const bool pass = failures.empty();
    r.result = {{"alphas", alphas_out(v.alphas())},
                {"randomized", o.alphas.empty()},
                {"effective_period", p},
                {"psi_scaling", o.debug_wrong_psi ? "monic-debug" : "matched"},
                {"properties", list},
                {"failures", failures},
                {"pass", pass}};
    r.exit_code = pass ? kOk : kPropertyFailure;
    return r;
}

} // namespace opuc::cli
