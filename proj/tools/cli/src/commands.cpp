#include "commands.hpp"

#include "opuc_cli/cli.hpp"

#include "opuc/equilibrium.hpp"
#include "opuc/errors.hpp"
#include "opuc/kernels.hpp"
#include "opuc/periodic.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>

namespace opuc::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

VerblunskyPeriod require_alphas(const Options& o)
{
    if (o.alphas.empty())
        throw ArgumentError("--alphas is required");
    return load_alphas(o.alphas);
}

PsiScaling psi_scaling(const Options& o)
{
    return o.debug_wrong_psi ? PsiScaling::MonicDebug : PsiScaling::Matched;
}

std::string sign_label(int s) { return s > 0 ? "+2" : "-2"; }

json points_out(const std::vector<SingularPoint>& pts)
{
    json arr = json::array();
    for (const SingularPoint& p : pts)
        arr.push_back({{"theta", angle_out(p.theta)}, {"residual", p.residual}, {"band", p.band}});
    return arr;
}

} // namespace

double round_sig12(double x)
{
    if (!std::isfinite(x) || x == 0.0)
        return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

double angle_out(double theta)
{
    double t = round_sig12(wrap_angle(theta));
    // Rounding can land exactly on 2pi.
    return t >= round_sig12(kTwoPi) ? 0.0 : t;
}

json complex_out(cplx c) { return json::array({c.real(), c.imag()}); }

json alphas_out(const std::vector<cplx>& a)
{
    json arr = json::array();
    for (cplx c : a)
        arr.push_back(complex_out(c));
    return arr;
}

std::string csv_num(double x)
{
    // Shortest text that reads back to the same double.
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_angle(double theta)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", angle_out(theta));
    return buf;
}

cplx parse_complex(const std::string& text, const char* what)
{
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }),
            s.end());
    const auto comma = s.find(',');
    char* end = nullptr;
    const std::string re_s = s.substr(0, comma);
    const double re = std::strtod(re_s.c_str(), &end);
    if (re_s.empty() || *end != '\0')
        throw ArgumentError(std::string(what) + ": cannot parse '" + text + "' as a complex number");
    double im = 0.0;
    if (comma != std::string::npos) {
        const std::string im_s = s.substr(comma + 1);
        im = std::strtod(im_s.c_str(), &end);
        if (im_s.empty() || *end != '\0')
            throw ArgumentError(std::string(what) + ": cannot parse '" + text + "' as a complex number");
    }
    return {re, im};
}

Report cmd_bands(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    const Discriminant d(v, psi_scaling(o));
    const int grid = o.grid.value_or(16384);
    const BandStructure b = band_structure(d, grid);
    const BandCdf k(d, b);

    Report r;
    r.tolerances = {{"grid", grid},
                    {"resonance_modulus", 1e-6},
                    {"resonance_match", 1e-6},
                    {"feature_snap", kFeatureTol},
                    {"cdf_points_per_band", 512}};

    json bands = json::array();
    for (const Arc& a : b.bands)
        bands.push_back({{"start", angle_out(a.start)},
                         {"end", angle_out(a.end)},
                         {"length", round_sig12(a.length())}});
    json edges = json::array();
    for (const EdgeRecord& e : b.edges)
        edges.push_back({{"theta", angle_out(e.theta)},
                         {"delta", sign_label(e.delta_sign)},
                         {"resonant", e.is_resonance},
                         {"warning", e.warning},
                         {"W", d.W(e.theta)}});
    json gaps = json::array();
    for (const ClosedGap& g : b.closed_gaps)
        gaps.push_back({{"theta", angle_out(g.theta)},
                        {"delta", sign_label(g.delta_sign)},
                        {"warning", g.warning},
                        {"V", v_density(d, b, g.theta)}});
    json res = json::array();
    for (double t : b.resonances)
        res.push_back(angle_out(t));

    json table = json::array();
    for (const auto& [theta, kv] : k.table(32)) {
        const double vd = v_density(d, b, theta);
        table.push_back({angle_out(theta), vd, kv});
        r.rows.push_back({csv_angle(theta), csv_num(vd), csv_num(kv)});
    }
    r.header = {"theta", "V", "k"};

    r.result = {{"period", v.period()},
                {"effective_period", d.p()},
                {"r", d.r()},
                {"full_circle", b.full_circle},
                {"bands", bands},
                {"edges", edges},
                {"closed_gaps", gaps},
                {"resonances", res},
                {"rejected_resonances", b.rejected_resonances},
                {"cdf", {{"total_raw", k.total_raw()}, {"x1", angle_out(k.x1())}, {"table", table}}}};
    return r;
}

Report cmd_singular(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    const Discriminant d(v, psi_scaling(o));
    const BandStructure b = band_structure(d, 16384);
    const BandCdf k(d, b);
    const int scan = o.grid.value_or(2048);

    std::vector<int> sections;
    if (o.s) {
        if (*o.s < 0 || *o.s >= d.p())
            throw ArgumentError("--s = " + std::to_string(*o.s) + " outside [0, " +
                                std::to_string(d.p()) + ")");
        sections.push_back(*o.s);
    } else {
        for (int s = 0; s < d.p(); ++s)
            sections.push_back(s);
    }

    Report r;
    r.tolerances = {{"accept", 1e-6}, {"near_miss", 1e-3}, {"dedupe", 1e-9}, {"scan", scan},
                    {"common_theta", 1e-6}};
    r.header = {"s", "kind", "theta", "residual", "band"};

    json per_s = json::array();
    std::vector<std::vector<double>> thetas;
    for (int s : sections) {
        const SingularSearch ss = find_singular_points(d, b, k, s, scan);
        per_s.push_back({{"s", s},
                         {"count", ss.points.size()},
                         {"points", points_out(ss.points)},
                         {"near_misses", points_out(ss.near_misses)},
                         {"feature_hits", points_out(ss.feature_hits)}});
        std::vector<double> th;
        auto add_rows = [&](const std::vector<SingularPoint>& pts, const char* kind) {
            for (const SingularPoint& p : pts)
                r.rows.push_back({std::to_string(s), kind, csv_angle(p.theta), csv_num(p.residual),
                                  std::to_string(p.band)});
        };
        add_rows(ss.points, "point");
        add_rows(ss.near_misses, "near_miss");
        add_rows(ss.feature_hits, "feature_hit");
        for (const SingularPoint& p : ss.points)
            th.push_back(p.theta);
        std::sort(th.begin(), th.end());
        thetas.push_back(th);
    }
    bool common = true;
    for (const auto& th : thetas) {
        if (th.size() != thetas.front().size()) {
            common = false;
            break;
        }
        for (std::size_t j = 0; j < th.size(); ++j)
            common = common && angular_distance(th[j], thetas.front()[j]) <= 1e-6;
    }
    r.result = {{"effective_period", d.p()},
                {"sections", per_s},
                {"common_to_all_s", common},
                {"cdf_total_raw", k.total_raw()}};
    return r;
}

Report cmd_universality(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    if (!o.theta)
        throw ArgumentError("--theta is required");
    if (o.sigma_sign != 1 && o.sigma_sign != -1)
        throw ArgumentError("--sigma-sign must be +1 or -1");
    const Discriminant d(v, psi_scaling(o));
    const BandStructure b = band_structure(d, o.grid.value_or(16384));
    const std::vector<int> ns = o.n.empty() ? std::vector<int>{400, 800, 1600} : o.n;
    std::vector<cplx> as(o.a.begin(), o.a.end()), bs(o.b.begin(), o.b.end());

    LimitOptions opt;
    opt.experimental_neg_edge = o.experimental_neg_edge;
    opt.edge_sigma_sign = o.sigma_sign;
    const UniversalityReport rep = universality_sweep(d, b, *o.theta, ns, as, bs, opt);
    const LimitKernel& lk = rep.limit;
    const bool edge = lk.regime == RegimeLabel::EdgeNonResonant || lk.regime == RegimeLabel::EdgeResonant;
    const double tol = o.tol.value_or(edge ? 0.05 : 0.01);

    // The same sweep along n = kp - 1, for comparison with the full sequence.
    std::vector<int> aligned;
    for (int n : ns)
        aligned.push_back(std::max(d.p() * (n / d.p()) - 1, 10));
    const UniversalityReport rep_aligned = universality_sweep(d, b, *o.theta, aligned, as, bs, opt);

    bool trend = true;
    for (std::size_t i = 1; i < rep.max_error.size(); ++i)
        trend = trend && rep.max_error[i] <= rep.max_error[i - 1] + 1e-3;
    const double terminal = rep.max_error.back();
    const bool pass = terminal <= tol && trend;

    Report r;
    r.tolerances = {{"terminal", tol}, {"trend_slack", 1e-3}, {"feature_snap", kFeatureTol}};
    r.header = {"n", "a", "b", "ratio_re", "ratio_im", "predicted_re", "predicted_im", "error"};
    json rows = json::array();
    for (const UniversalityRow& row : rep.rows) {
        rows.push_back({{"n", row.n},
                        {"a", row.a.real()},
                        {"b", row.b.real()},
                        {"ratio", complex_out(row.ratio)},
                        {"predicted", complex_out(row.predicted)},
                        {"error", row.error}});
        r.rows.push_back({std::to_string(row.n), csv_num(row.a.real()), csv_num(row.b.real()),
                          csv_num(row.ratio.real()), csv_num(row.ratio.imag()),
                          csv_num(row.predicted.real()), csv_num(row.predicted.imag()),
                          csv_num(row.error)});
    }
    json lim = {{"regime", std::string(to_string(lk.regime))}, {"theta", angle_out(lk.theta)}};
    if (edge) {
        lim["delta"] = sign_label(lk.delta_sign);
        lim["W"] = lk.w;
        lim["order"] = lk.order;
        lim["rotated"] = lk.rotated;
        lim["sigma_sign"] = o.sigma_sign;
    } else {
        lim["V"] = lk.v;
    }
    r.result = {{"limit", lim},
                {"ns", ns},
                {"max_error", rep.max_error},
                {"aligned_ns", aligned},
                {"aligned_max_error", rep_aligned.max_error},
                {"monotone", rep.monotone},
                {"trend_ok", trend},
                {"terminal_error", terminal},
                {"verdict", pass ? "PASS" : "FAIL"},
                {"rows", rows}};
    r.exit_code = pass ? kOk : kPropertyFailure;
    return r;
}

Report cmd_kernel(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    const Discriminant d(v, psi_scaling(o));
    const int n = o.n.empty() ? 100 : o.n.front();
    if (n < 0)
        throw ArgumentError("--n must be >= 0");
    const double theta = o.theta.value_or(0.0);
    const cplx z = o.z.empty() ? std::polar(1.0, theta) : parse_complex(o.z, "--z");
    const cplx w = o.w.empty() ? std::polar(1.0, theta + 0.5) : parse_complex(o.w, "--w");

    const cplx direct = cd_kernel_direct(d.period(), n, z, w);
    const cplx fast = cd_kernel_fast(d, n, z, w);
    const cplx swapped = cd_kernel_direct(d.period(), n, w, z);
    const double rel = std::abs(fast - direct) / std::max(std::abs(direct), 1e-300);
    const double herm = std::abs(direct - std::conj(swapped)) / std::max(std::abs(direct), 1e-300);
    const bool on_diag = std::abs(1.0 - z * std::conj(w)) <= 1e-8 || z == 0.0 || w == 0.0;

    Report r;
    r.tolerances = {{"cd_vs_direct", 1e-8}, {"diagonal_fallback", 1e-8}};
    r.header = {"n", "direct_re", "direct_im", "fast_re", "fast_im", "relative_difference"};
    r.rows.push_back({std::to_string(n), csv_num(direct.real()), csv_num(direct.imag()),
                      csv_num(fast.real()), csv_num(fast.imag()), csv_num(rel)});
    r.result = {{"n", n},
                {"z", complex_out(z)},
                {"w", complex_out(w)},
                {"direct", complex_out(direct)},
                {"fast", complex_out(fast)},
                {"fallback", on_diag},
                {"relative_difference", rel},
                {"hermitian_defect", herm},
                {"pass", rel <= 1e-8}};
    r.exit_code = rel <= 1e-8 ? kOk : kPropertyFailure;
    return r;
}

Report cmd_schur(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    const Discriminant d(v, psi_scaling(o));
    const int k = o.k;
    std::vector<cplx> pts;
    if (!o.z.empty()) {
        pts.push_back(parse_complex(o.z, "--z"));
    } else {
        const int g = o.grid.value_or(10);
        if (g < 2)
            throw ArgumentError("--grid must be >= 2 for the Schur grid");
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                pts.push_back(std::polar(0.9 * i / (g - 1), kTwoPi * j / g));
    }

    const WallPair wall = wall_polys(d, k);
    const WallPair pn = pinter_nevai_wall(d.period(), k * d.p() - 1);
    double wall_dist = 0.0;
    const int deg = std::max(wall.A.degree(), pn.A.degree()) + std::max(wall.B.degree(), pn.B.degree()) + 2;
    const double wall_scale = std::max({1.0, pn.A.max_abs_coeff(), pn.B.max_abs_coeff()});
    for (int j = 0; j <= deg; ++j)
        wall_dist = std::max({wall_dist, std::abs(wall.A.coeff(j) - pn.A.coeff(j)),
                              std::abs(wall.B.coeff(j) - pn.B.coeff(j))});
    wall_dist /= wall_scale;

    Report r;
    r.tolerances = {{"caratheodory_link", 1e-8}, {"wall_vs_pinter_nevai", 1e-9}};
    r.header = {"z_re", "z_im", "f_re", "f_im", "F_re", "F_im", "wall_ratio_re", "wall_ratio_im"};
    double max_f = 0.0, min_re_f = 1e300, link = 0.0;
    json grid = json::array();
    for (cplx z : pts) {
        const cplx f = schur_f(d, z);
        const cplx F = caratheodory_F(d, z);
        const cplx zf = z * f;
        const cplx ratio = wall.A(z) / wall.B(z);
        max_f = std::max(max_f, std::abs(f));
        min_re_f = std::min(min_re_f, F.real());
        link = std::max(link, std::abs(F - (1.0 + zf) / (1.0 - zf)));
        grid.push_back({{"z", complex_out(z)}, {"f", complex_out(f)}, {"F", complex_out(F)},
                        {"wall_ratio", complex_out(ratio)}});
        r.rows.push_back({csv_num(z.real()), csv_num(z.imag()), csv_num(f.real()), csv_num(f.imag()),
                          csv_num(F.real()), csv_num(F.imag()), csv_num(ratio.real()),
                          csv_num(ratio.imag())});
    }
    json a_c = json::array(), b_c = json::array();
    for (cplx c : wall.A.coeffs())
        a_c.push_back(complex_out(c));
    for (cplx c : wall.B.coeffs())
        b_c.push_back(complex_out(c));
    const bool pass = max_f < 1.0 && min_re_f > 0.0 && link <= 1e-8 && wall_dist <= 1e-9;
    r.result = {{"k", k},
                {"max_abs_f", max_f},
                {"min_re_F", min_re_f},
                {"caratheodory_link", link},
                {"wall_vs_pinter_nevai", wall_dist},
                {"pass", pass},
                {"wall", {{"A", a_c}, {"B", b_c}}},
                {"grid", grid}};
    r.exit_code = pass ? kOk : kPropertyFailure;
    return r;
}

Report cmd_identity(const Options& o)
{
    const VerblunskyPeriod v = require_alphas(o);
    const Discriminant d(v, psi_scaling(o));
    const cplx z = o.z.empty() ? cplx(1.1, 0.3) : parse_complex(o.z, "--z");
    const int N = o.n.empty() ? 60 : o.n.front();

    Report r;
    r.tolerances = {{"newu_relative", 1e-9}, {"generating_function", 1e-8},
                    {"zero_classification", o.tol.value_or(1e-6)}};
    r.header = {"identity", "residual", "tolerance", "pass"};
    bool pass = true;

    const IdentityResidual id = cheb_period_identity(v, o.m, o.k, z);
    const double id_rel = id.residual / std::max(std::abs(id.lhs), 1.0);
    const bool id_ok = id_rel <= 1e-9;
    pass = pass && id_ok;
    r.rows.push_back({"newu", csv_num(id_rel), csv_num(1e-9), id_ok ? "true" : "false"});
    json newu = {{"m", o.m}, {"k", o.k}, {"z", complex_out(z)}, {"lhs", complex_out(id.lhs)},
                 {"rhs", complex_out(id.rhs)}, {"residual", id.residual},
                 {"relative_residual", id_rel}, {"pass", id_ok}};

    json gen;
    try {
        const double res = generating_function_residual(d, z, o.t, N);
        const bool ok = res <= 1e-8;
        pass = pass && ok;
        gen = {{"z", complex_out(z)}, {"t", o.t}, {"N", N}, {"residual", res}, {"pass", ok}};
        r.rows.push_back({"generating_function", csv_num(res), csv_num(1e-8), ok ? "true" : "false"});
    } catch (const DomainError& e) {
        gen = {{"z", complex_out(z)}, {"t", o.t}, {"N", N}, {"skipped", e.what()}};
    }

    json zeros;
    if (d.p() <= 6 && o.k >= 1) {
        const int kk = std::min(o.k, 8);
        const ZeroClassification zc = classify_zeros_phi_diff(d, kk, o.tol.value_or(1e-6), false);
        json list = json::array();
        for (const ZeroRecord& zr : zc.zeros)
            list.push_back({{"root", complex_out(zr.root)},
                            {"label", std::string(to_string(zr.label))},
                            {"resonance_residual", zr.resonance_residual},
                            {"cheb_residual", zr.cheb_residual}});
        const bool ok = zc.neither == 0;
        pass = pass && ok;
        zeros = {{"k", kk}, {"neither", zc.neither}, {"pass", ok}, {"zeros", list}};
        r.rows.push_back({"zero_classification", std::to_string(zc.neither), "0", ok ? "true" : "false"});
    } else {
        zeros = {{"skipped", "needs effective period <= 6 and k >= 1"}};
    }

    r.result = {{"newu", newu}, {"generating_function", gen}, {"zero_classification", zeros},
                {"pass", pass}};
    r.exit_code = pass ? kOk : kPropertyFailure;
    return r;
}

} // namespace opuc::cli
