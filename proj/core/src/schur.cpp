#include "opuc/schur.hpp"

#include "opuc/chebyshev.hpp"
#include "opuc/errors.hpp"
#include "opuc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opuc {

namespace {

// P(z) / z for a polynomial whose constant term is (numerically) zero.
ComplexPoly divide_by_z(const ComplexPoly& p, const char* what)
{
    if (std::abs(p.coeff(0)) > 1e-12 * std::max(1.0, p.max_abs_coeff()))
        throw ConsistencyError(std::string(what) + ": constant term does not vanish");
    const auto c = p.coeffs();
    if (c.size() <= 1)
        return ComplexPoly();
    return ComplexPoly(std::vector<cplx>(c.begin() + 1, c.end()));
}

// sum |c_j| |z|^j: the size of the terms Horner adds up.
double abs_scale(const ComplexPoly& p, cplx z)
{
    double acc = 0.0;
    const double r = std::abs(z);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
        acc = acc * r + std::abs(*it);
    return acc;
}

// sum_j C(n-j, j) |2x|^{n-2j}: the same for U_n(x).
double cheb_abs_scale(int n, cplx x)
{
    if (n < 0)
        return 1.0;
    return std::max(1.0, std::abs(cheb::cheb_u_recurrence(n, cplx(0.0, std::abs(x)))));
}

// Monic Phi_n - Phi*_n and its derivative by the pointwise recursion.
std::pair<cplx, cplx> phi_diff_with_derivative(const VerblunskyPeriod& v, int n, cplx z)
{
    cplx f = 1.0, fs = 1.0, df = 0.0, dfs = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx a = v.alpha(j);
        const cplx f1 = z * f - std::conj(a) * fs;
        const cplx df1 = f + z * df - std::conj(a) * dfs;
        dfs = dfs - a * f - a * z * df;
        fs = fs - a * z * f;
        f = f1;
        df = df1;
    }
    return {f - fs, df - dfs};
}

// A few Newton steps from a companion-matrix root; the step is kept only
// while it reduces the residual.
cplx polish_root(const VerblunskyPeriod& v, int n, cplx z)
{
    auto [f, df] = phi_diff_with_derivative(v, n, z);
    for (int it = 0; it < 8 && std::abs(df) > 0.0; ++it) {
        const cplx next = z - f / df;
        const auto [g, dg] = phi_diff_with_derivative(v, n, next);
        if (!(std::abs(g) < std::abs(f)))
            break;
        z = next;
        f = g;
        df = dg;
    }
    return z;
}

void check_disk(cplx z, const char* what)
{
    if (!(std::abs(z) < 1.0))
        throw DomainError(std::string(what) + ": |z| must be < 1");
}

} // namespace

LaurentPoly cheb_of_delta(const Discriminant& d, int j)
{
    if (j < -1)
        throw ArgumentError("cheb_of_delta: j must be >= -1");
    if (j == -1)
        return LaurentPoly();
    LaurentPoly prev;                          // U_{-1}
    LaurentPoly cur = LaurentPoly::constant(1.0); // U_0
    for (int i = 0; i < j; ++i) {
        LaurentPoly next = d.delta() * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

WallPair wall_polys(const Discriminant& d, int k)
{
    if (k < 1)
        throw ArgumentError("wall_polys: k must be >= 1");
    const int p = d.p();
    const PolyQuad& q = d.quad(p);
    const double rk = std::pow(d.r(), k);
    const LaurentPoly uk = cheb_of_delta(d, k);
    const LaurentPoly ukm1 = cheb_of_delta(d, k - 1);

    const LaurentPoly a = ukm1.shifted((k - 1) * p / 2 - 1) *
                          LaurentPoly::from_poly(q.psi_star - q.phi_star) * (0.5 * rk);
    const LaurentPoly b =
        (uk.shifted(k * p / 2) -
         ukm1.shifted((k - 1) * p / 2) * LaurentPoly::from_poly(q.psi + q.phi) * 0.5) *
        rk;

    WallPair out;
    out.k = k;
    out.A = a.to_poly(1e-10);
    ComplexPoly bp = b.to_poly(1e-10);
    // The z^{kp} terms cancel as well.
    if (std::abs(bp.coeff(k * p)) > 1e-10 * std::max(1.0, bp.max_abs_coeff()))
        throw ConsistencyError("wall_polys: z^" + std::to_string(k * p) +
                               " coefficient of B does not cancel");
    std::vector<cplx> bc(bp.coeffs().begin(), bp.coeffs().end());
    bc.resize(static_cast<std::size_t>(k * p));
    out.B = ComplexPoly(std::move(bc));
    return out;
}

WallPair pinter_nevai_wall(const VerblunskyPeriod& v, int n)
{
    if (n < 0)
        throw ArgumentError("pinter_nevai_wall: n must be >= 0");
    const PolyQuad q = iterate_polys(v, n + 1, Normalization::Monic);
    WallPair out;
    out.A = divide_by_z(q.psi_star - q.phi_star, "pinter_nevai_wall") * 0.5;
    out.B = (q.psi_star + q.phi_star) * 0.5;
    return out;
}

cplx schur_f(const Discriminant& d, cplx z)
{
    check_disk(z, "schur_f");
    const PolyQuad& q = d.quad(d.p());
    const ComplexPoly num = divide_by_z(q.psi_star - q.phi_star, "schur_f");
    const cplx den = 2.0 * d.scaled_gamma(z) - q.psi(z) - q.phi(z);
    if (!(std::abs(den) > 0.0) || !std::isfinite(std::abs(den)))
        throw NumericError("schur_f: pole at z = (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + ")");
    return num(z) / den;
}

cplx caratheodory_F(const Discriminant& d, cplx z)
{
    check_disk(z, "caratheodory_F");
    const PolyQuad& q = d.quad(d.p());
    const cplx den = 2.0 * d.scaled_gamma(z) + q.phi_star(z) - q.phi(z) - q.psi(z) - q.psi_star(z);
    if (!(std::abs(den) > 0.0) || !std::isfinite(std::abs(den)))
        throw NumericError("caratheodory_F: pole at z = (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + ")");
    return 1.0 + 2.0 * (q.psi_star(z) - q.phi_star(z)) / den;
}

cplx generating_function(const Discriminant& d, cplx z, cplx t)
{
    if (z == 0.0)
        throw DomainError("generating_function: z = 0");
    const int p = d.p();
    const double growth = std::pow(std::abs(t), p) * std::abs(d.scaled_gamma(z));
    if (!(growth < 0.9))
        throw DomainError("generating_function: |t|^p |z^{p/2} Gamma_+| = " + std::to_string(growth) +
                          " is not < 0.9");
    cplx nu = 0.0, nu_psi = 0.0, tp = 1.0;
    for (int s = 0; s < p; ++s) {
        const PolyQuad& q = d.quad(s);
        nu += tp * q.phi(z);
        nu_psi += tp * q.psi(z);
        tp *= t;
    }
    const PolyQuad& qp = d.quad(p);
    const cplx g = d.resonance_poly()(z) * nu_psi - (qp.psi(z) + qp.psi_star(z)) * nu;
    const cplx denom = 2.0 * (1.0 - d.half_trace()(z) * tp + ipow(z, p) * tp * tp);
    return (2.0 * nu + tp * g) / denom;
}

double generating_function_residual(const Discriminant& d, cplx z, cplx t, int N)
{
    if (N < 0)
        throw ArgumentError("generating_function_residual: N must be >= 0");
    const cplx rhs = generating_function(d, z, t);
    const std::vector<cplx> phi = phi_sequence(d.period(), N, z);
    cplx lhs = 0.0, tn = 1.0;
    for (int n = 0; n <= N; ++n) {
        lhs += phi[n] * tn;
        tn *= t;
    }
    return std::abs(lhs - rhs);
}

IdentityResidual cheb_period_identity(const VerblunskyPeriod& v, int m, int k, cplx z)
{
    if (m < 1 || k < 0)
        throw ArgumentError("cheb_period_identity: need m >= 1 and k >= 0");
    if (z == 0.0)
        throw DomainError("cheb_period_identity: z = 0");
    const Discriminant dp(v);
    std::vector<cplx> rep;
    for (int i = 0; i < m; ++i)
        rep.insert(rep.end(), dp.period().alphas().begin(), dp.period().alphas().end());
    const Discriminant dm{VerblunskyPeriod(std::move(rep))};

    IdentityResidual out;
    // Delta and eta from the pointwise recursion: for the repeated period the
    // coefficient vectors are large enough that Horner loses digits.
    auto side = [&](const Discriminant& d, int idx) {
        const QuadValues q = eval_quad_at(d.period(), d.p(), z);
        const cplx zh = ipow(z, d.p() / 2);
        const cplx x = (q.phi + q.phi_star + q.psi + q.psi_star) / (4.0 * zh);
        const cplx eta = q.phi - q.phi_star - q.psi - q.psi_star;
        const cplx t1 = cheb::cheb_u(idx, x);
        const cplx t2 = eta / (2.0 * zh) * cheb::cheb_u(idx - 1, x);
        out.term_scale = std::max({out.term_scale, std::abs(t1), std::abs(t2)});
        return t1 + t2;
    };
    out.lhs = side(dm, k);
    out.rhs = side(dp, m * k);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

std::string_view to_string(ZeroLabel l)
{
    switch (l) {
    case ZeroLabel::Resonance:
        return "Resonance";
    case ZeroLabel::ChebPreimage:
        return "ChebPreimage";
    case ZeroLabel::Both:
        return "Both";
    case ZeroLabel::Neither:
        return "Neither";
    }
    return "?";
}

ZeroClassification classify_zeros_phi_diff(const Discriminant& d, int k, double tol,
                                           bool throw_on_neither)
{
    if (k < 1 || k > 8)
        throw ArgumentError("classify_zeros_phi_diff: k must lie in [1, 8]");
    if (d.p() > 6)
        throw ArgumentError("classify_zeros_phi_diff: period " + std::to_string(d.p()) +
                            " exceeds 6");
    const PolyQuad q = iterate_polys(d.period(), k * d.p(), Normalization::Monic);
    const ComplexPoly diff = q.phi - q.phi_star;
    const ComplexPoly& res_poly = d.resonance_poly();

    ZeroClassification out;
    out.k = k;
    out.tol = tol;
    for (cplx root : roots(diff)) {
        root = polish_root(d.period(), k * d.p(), root);
        ZeroRecord r;
        r.root = root;
        r.resonance_residual = std::abs(res_poly(root)) / abs_scale(res_poly, root);
        const cplx x = 0.5 * d(root);
        r.cheb_residual = std::abs(cheb::cheb_u(k - 1, x)) / cheb_abs_scale(k - 1, x);
        const bool res = r.resonance_residual <= tol;
        const bool ch = r.cheb_residual <= tol;
        r.label = res && ch ? ZeroLabel::Both
                  : res     ? ZeroLabel::Resonance
                  : ch      ? ZeroLabel::ChebPreimage
                            : ZeroLabel::Neither;
        if (r.label == ZeroLabel::Neither)
            ++out.neither;
        out.zeros.push_back(r);
    }
    if (throw_on_neither && out.neither > 0) {
        for (const ZeroRecord& r : out.zeros)
            if (r.label == ZeroLabel::Neither)
                throw PropertyViolation("root (" + std::to_string(r.root.real()) + ", " +
                                        std::to_string(r.root.imag()) +
                                        ") of Phi_kp - Phi*_kp is neither a resonance nor a "
                                        "Chebyshev preimage");
    }
    return out;
}

cplx ratio_asymptotic(const Discriminant& d, int s, cplx z)
{
    const int p = d.p();
    if (s < 0 || s >= p)
        throw ArgumentError("ratio_asymptotic: s = " + std::to_string(s) + " outside [0, " +
                            std::to_string(p) + ")");
    const cplx num = szego_asymptotics(d, s, z).j;
    cplx den;
    if (s < p - 1)
        den = szego_asymptotics(d, s + 1, z).j;
    else
        den = ipow(z, p / 2) * gamma_pm(d, z).plus * szego_asymptotics(d, 0, z).j;
    if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(num)))
        throw SingularRatioError("ratio_asymptotic: j vanishes in the denominator (s = " +
                                 std::to_string(s) + ")");
    return num / den;
}

} // namespace opuc
