#include "opuc/chebyshev.hpp"

#include "opuc/errors.hpp"

#include <cmath>
#include <string>

namespace opuc::cheb {

namespace {

constexpr int kRecurrenceMaxN = 64;
constexpr double kEdgeRadius = 1e-6;
constexpr double kIntervalRadius = 1e-8;

double distance_to_interval(cplx x)
{
    const double re = x.real();
    const double dx = re < -1.0 ? -1.0 - re : (re > 1.0 ? re - 1.0 : 0.0);
    return std::hypot(dx, x.imag());
}

// U_n(1 - eps) for y = 1 - eps near 1.
cplx near_one(int n, cplx y)
{
    const cplx eps = 1.0 - y;
    const double m = n;
    if ((m + 1.0) * (m + 1.0) * std::abs(eps) < 1e-8) {
        const double d1 = m * (m + 1.0) * (m + 2.0) / 3.0;
        const double d2 = (m - 1.0) * m * (m + 1.0) * (m + 2.0) * (m + 3.0) / 15.0;
        return (m + 1.0) - eps * d1 + 0.5 * eps * eps * d2;
    }
    // t = arccos(y) through the half-angle identity keeps 1 - y exact.
    const cplx t = 2.0 * std::asin(std::sqrt(eps / 2.0));
    return std::sin((m + 1.0) * t) / std::sin(t);
}

} // namespace

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Recurrence: return "recurrence";
    case Method::Trig: return "trig";
    case Method::Hyperbolic: return "hyperbolic";
    case Method::EdgeTaylor: return "edge-taylor";
    }
    return "unknown";
}

cplx cheb_u_recurrence(int n, cplx x)
{
    if (n < -1)
        throw ArgumentError("cheb_u: n must be >= -1, got " + std::to_string(n));
    if (n == -1)
        return 0.0;
    cplx prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx cheb_u_trig(int n, cplx x)
{
    const cplx t = std::acos(x);
    const cplx s = std::sin(t);
    if (s == 0.0)
        return (x.real() > 0.0 || n % 2 == 0) ? cplx(n + 1.0) : cplx(-(n + 1.0));
    return std::sin((n + 1.0) * t) / s;
}

cplx gamma_plus(cplx x)
{
    const cplx root = std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
    cplx g = x + root;
    if (std::abs(g) < 1.0)
        g = x - root;
    return g;
}

cplx cheb_u_hyperbolic(int n, cplx x)
{
    const cplx g = gamma_plus(x);
    const cplx gm = 1.0 / g;
    return (ipow(g, n + 1) - ipow(gm, n + 1)) / (g - gm);
}

ChebEval cheb_u_eval(int n, cplx x)
{
    if (n < -1)
        throw ArgumentError("cheb_u: n must be >= -1, got " + std::to_string(n));
    ChebEval out{n, x, 0.0, Method::Recurrence};
    if (n <= kRecurrenceMaxN) {
        out.value = cheb_u_recurrence(n, x);
        return out;
    }
    if (std::abs(x - 1.0) < kEdgeRadius) {
        out.method = Method::EdgeTaylor;
        out.value = near_one(n, x);
    } else if (std::abs(x + 1.0) < kEdgeRadius) {
        out.method = Method::EdgeTaylor;
        out.value = (n % 2 == 0 ? 1.0 : -1.0) * near_one(n, -x);
    } else if (distance_to_interval(x) <= kIntervalRadius) {
        out.method = Method::Trig;
        out.value = cheb_u_trig(n, x);
    } else {
        out.method = Method::Hyperbolic;
        out.value = cheb_u_hyperbolic(n, x);
    }
    return out;
}

cplx cheb_u_sum_form(int n, cplx x)
{
    if (n > 40)
        throw ArgumentError("cheb_u_sum_form: n = " + std::to_string(n) + " exceeds 40");
    if (n == -1)
        return 0.0;
    if (n < -1)
        throw ArgumentError("cheb_u_sum_form: n must be >= -1");
    cplx sum = 0.0;
    for (int j = 0; j <= n / 2; ++j) {
        // C(n-j, j)
        double binom = 1.0;
        for (int i = 1; i <= j; ++i)
            binom = binom * (n - j - j + i) / i;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binom * ipow(2.0 * x, n - 2 * j);
    }
    return sum;
}

cplx cheb_generating_series(cplx x, cplx t, int N)
{
    const double ax = std::abs(x);
    if (!(std::abs(t) * (ax + std::sqrt(ax * ax + 1.0) + 1.0) < 0.99))
        throw DomainError("cheb_generating_series: |t| outside the convergence guard");
    cplx sum = 0.0, prev = 0.0, cur = 1.0, tn = 1.0;
    for (int n = 0; n <= N; ++n) {
        sum += cur * tn;
        const cplx next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
        tn *= t;
    }
    return sum;
}

ScaledPair cheb_u_scaled_pair(int k, cplx x)
{
    if (k < 0)
        throw ArgumentError("cheb_u_scaled_pair: k must be >= 0");
    const cplx g = gamma_plus(x);
    const cplx gm = 1.0 / g;
    const cplx den = g - gm;
    if (den == 0.0)
        throw DomainError("cheb_u_scaled_pair: x = +-1");
    const cplx gm2k = ipow(gm, 2LL * k);
    return {(g - gm2k * gm) / den, (1.0 - gm2k) / den};
}

} // namespace opuc::cheb
