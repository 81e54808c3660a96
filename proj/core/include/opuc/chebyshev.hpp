#ifndef OPUC_CHEBYSHEV_HPP
#define OPUC_CHEBYSHEV_HPP

#include "opuc/poly.hpp"

#include <string_view>

namespace opuc::cheb {

// Chebyshev polynomials of the second kind U_n at complex arguments.
//
// Route selection in cheb_u (n > 64):
//   x within 1e-6 of +-1         -> EdgeTaylor: U_n(+-1) = (+-1)^n (n+1) plus
//                                   the first two Taylor corrections while
//                                   (n+1)^2 |x -+ 1| < 1e-8, otherwise the
//                                   half-angle form of sin((n+1)t)/sin t
//   x within 1e-8 of [-1, 1]     -> Trig, t = arccos x
//   otherwise                    -> Hyperbolic, Gamma = x + sqrt(x^2 - 1)
//                                   with |Gamma| >= 1
// For n <= 64 the three-term recurrence is used everywhere.

enum class Method { Recurrence, Trig, Hyperbolic, EdgeTaylor };

std::string_view to_string(Method m);

struct ChebEval {
    int n = 0;
    cplx x;
    cplx value;
    Method method = Method::Recurrence;
};

ChebEval cheb_u_eval(int n, cplx x);

/// U_n(x) for n >= -1 (U_{-1} = 0, U_0 = 1).
inline cplx cheb_u(int n, cplx x) { return cheb_u_eval(n, x).value; }

// The individual routes, exposed so each can be checked against the others.
cplx cheb_u_recurrence(int n, cplx x);
cplx cheb_u_trig(int n, cplx x);
cplx cheb_u_hyperbolic(int n, cplx x);

/// Explicit binomial sum  sum_j (-1)^j C(n-j, j) (2x)^{n-2j}. Test oracle;
/// n > 40 throws ArgumentError.
cplx cheb_u_sum_form(int n, cplx x);

/// Partial sum sum_{n=0}^{N} U_n(x) t^n. Throws DomainError unless
/// |t| (|x| + sqrt(|x|^2 + 1) + 1) < 0.99.
cplx cheb_generating_series(cplx x, cplx t, int N);

/// x + sqrt(x^2 - 1) on the branch with modulus >= 1.
cplx gamma_plus(cplx x);

/// (U_k(x) / Gamma^k, U_{k-1}(x) / Gamma^k) with Gamma = gamma_plus(x).
/// Bounded for every k when x is off [-1, 1]; that is the overflow-safe form
/// used for large k away from the bands.
struct ScaledPair {
    cplx uk;
    cplx ukm1;
};
ScaledPair cheb_u_scaled_pair(int k, cplx x);

} // namespace opuc::cheb

#endif // OPUC_CHEBYSHEV_HPP
