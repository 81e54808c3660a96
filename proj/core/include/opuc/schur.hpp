#ifndef OPUC_SCHUR_HPP
#define OPUC_SCHUR_HPP

#include "opuc/periodic.hpp"

#include <string_view>
#include <vector>

namespace opuc {

struct WallPair {
    int k = 0;
    ComplexPoly A; ///< A_{kp-1}
    ComplexPoly B; ///< B_{kp-1}
};

/// U_j(Delta/2) as a Laurent polynomial (exponents -jp/2..jp/2), j >= -1.
LaurentPoly cheb_of_delta(const Discriminant& d, int j);

/// A_{kp-1}, B_{kp-1} from the Chebyshev form. Negative powers must cancel
/// (ConsistencyError otherwise, tolerance 1e-10 relative).
WallPair wall_polys(const Discriminant& d, int k);

/// A_n = (Psi*_{n+1} - Phi*_{n+1}) / (2z), B_n = (Psi*_{n+1} + Phi*_{n+1}) / 2
/// from the monic recursion.
WallPair pinter_nevai_wall(const VerblunskyPeriod& v, int n);

/// f(z) = ((psi*_p - phi*_p)/z) / (2 z^{p/2} Gamma_+ - psi_p - phi_p), |z| < 1.
cplx schur_f(const Discriminant& d, cplx z);

/// F(z) = 1 + 2(psi*_p - phi*_p) / (2 z^{p/2} Gamma_+ + phi*_p - phi_p - psi_p - psi*_p), |z| < 1.
cplx caratheodory_F(const Discriminant& d, cplx z);

/// Right side of the generating function identity,
///   (2 nu(z,t;0) + t^p g(z,t)) / (2 (1 - Delta z^{p/2} t^p + z^p t^{2p})).
/// Throws DomainError unless |t|^p |z^{p/2} Gamma_+(z)| < 0.9 and z != 0.
cplx generating_function(const Discriminant& d, cplx z, cplx t);

/// |sum_{n<=N} phi_n(z) t^n - generating_function(z, t)|.
double generating_function_residual(const Discriminant& d, cplx z, cplx t, int N);

struct IdentityResidual {
    cplx lhs, rhs;
    double residual = 0.0;
    /// Largest modulus among the four Chebyshev terms; the rounding scale of
    /// both sides.
    double term_scale = 0.0;
};

/// Both sides of
///   U_k(D_mp/2) + eta_mp(z;1)/(2 z^{mp/2}) U_{k-1}(D_mp/2)
///     = U_mk(D_p/2) + eta_p(z;1)/(2 z^{p/2}) U_{mk-1}(D_p/2)
/// where the mp quantities are built from the period repeated m times.
IdentityResidual cheb_period_identity(const VerblunskyPeriod& v, int m, int k, cplx z);

enum class ZeroLabel { Resonance, ChebPreimage, Both, Neither };
std::string_view to_string(ZeroLabel l);

struct ZeroRecord {
    cplx root;
    double resonance_residual = 0.0; ///< |phi_p - phi*_p| / its scale
    double cheb_residual = 0.0;      ///< |U_{k-1}(Delta/2)| / its scale
    ZeroLabel label = ZeroLabel::Neither;
};

struct ZeroClassification {
    int k = 0;
    double tol = 1e-6;
    std::vector<ZeroRecord> zeros;
    int neither = 0;
};

/// Zeros of Phi_{kp} - Phi*_{kp} labelled as resonances and/or preimages of
/// zeros of U_{k-1} under Delta/2. Residuals are relative to the modulus
/// scale of each expression at the root. Requires 1 <= k <= 8 and p <= 6.
/// PropertyViolation on a Neither root when throw_on_neither.
ZeroClassification classify_zeros_phi_diff(const Discriminant& d, int k, double tol = 1e-6,
                                           bool throw_on_neither = true);

/// lim_k phi_{kp+s}(z) / phi_{kp+s+1}(z) off the bands:
/// j_s/j_{s+1} for s < p-1 and j_{p-1} / (z^{p/2} Gamma_+ j_0) for s = p-1.
/// SingularRatioError when the denominator vanishes.
cplx ratio_asymptotic(const Discriminant& d, int s, cplx z);

} // namespace opuc

#endif // OPUC_SCHUR_HPP
