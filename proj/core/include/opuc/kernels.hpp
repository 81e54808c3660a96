#ifndef OPUC_KERNELS_HPP
#define OPUC_KERNELS_HPP

#include "opuc/periodic.hpp"

#include <vector>

namespace opuc {

/// phi_0(z), ..., phi_n(z) (orthonormal) by the pointwise recursion.
std::vector<cplx> phi_sequence(const VerblunskyPeriod& v, int n, cplx z);

/// K_n(z, w) = sum_{j<=n} phi_j(z) conj(phi_j(w)).
cplx cd_kernel_direct(const VerblunskyPeriod& v, int n, cplx z, cplx w);

/// Christoffel-Darboux form
///   (phi*_{n+1}(z) conj(phi*_{n+1}(w)) - phi_{n+1}(z) conj(phi_{n+1}(w))) / (1 - z conj(w))
/// with phi from the closed form. Falls back to the direct sum when
/// |1 - z conj(w)| <= 1e-8 or when z or w is 0.
cplx cd_kernel_fast(const Discriminant& d, int n, cplx z, cplx w);

/// e^{i(a - conj b)/2} sinc(v (a - conj b)).
cplx sinc_kernel(double v, cplx a, cplx b);

/// J*_s(a, b) for s = +-1/2 (UnsupportedCase otherwise). With
/// S(a) = sin(sqrt a)/sqrt a, C(a) = cos(sqrt a), T(a) = a S(a):
///   J*_{1/2}  = (S(a)C(b) - S(b)C(a)) / (pi (a - b))
///   J*_{-1/2} = (T(a)C(b) - T(b)C(a)) / (pi (a - b))
/// Near a = b a Taylor expansion in (a - b)/2 around the midpoint is used.
cplx bessel_jstar(double s, cplx a, cplx b);

struct LimitOptions {
    /// Allow Delta = -2 edges through the rotation alpha_n -> e^{-2 pi i (n+1)/p} alpha_n.
    bool experimental_neg_edge = false;
    /// Sign of sigma_n at edges: sigma_n = edge_sigma_sign / n^2.
    int edge_sigma_sign = -1;
};

/// The limit kernel attached to one theta.
struct LimitKernel {
    RegimeLabel regime = RegimeLabel::OutsideBands;
    double theta = 0.0;     ///< snapped onto the edge / closed gap when within kFeatureTol
    int delta_sign = 0;     ///< at edges
    double v = 0.0;         ///< bulk and closed gaps
    double w = 0.0;         ///< edges: W(theta) on the Delta = +2 side (rotated if needed)
    double order = 0.0;     ///< edges: J* order
    bool rotated = false;
    int p = 0;

    cplx operator()(cplx a, cplx b) const;
    /// sigma_n used for the scaled arguments.
    double sigma(int n, int edge_sigma_sign = -1) const;
};

/// Regime, snapped theta and parameters. Throws DomainError outside the
/// bands and UnsupportedCase at Delta = -2 edges unless enabled.
LimitKernel limit_kernel(const Discriminant& d, const BandStructure& bands, double theta,
                         const LimitOptions& opt = {});

cplx predicted_limit(const Discriminant& d, const BandStructure& bands, double theta, cplx a,
                     cplx b, const LimitOptions& opt = {});

/// K_n(e^{i(theta + a sigma_n)}, e^{i(theta + b sigma_n)}) / K_n(e^{i theta}, e^{i theta}).
cplx universality_ratio(const Discriminant& d, const BandStructure& bands, double theta, cplx a,
                        cplx b, int n, const LimitOptions& opt = {});

/// The same ratio for a prepared limit kernel (reuses the regime and theta).
cplx universality_ratio(const Discriminant& d, const LimitKernel& lk, cplx a, cplx b, int n,
                        int edge_sigma_sign = -1);

/// V rotated so that a Delta = -2 edge at theta becomes a Delta = +2 edge
/// at theta + 2pi/p.
VerblunskyPeriod rotate_period(const VerblunskyPeriod& even_period);

struct UniversalityRow {
    int n = 0;
    cplx a, b;
    cplx ratio, predicted;
    double error = 0.0;
};

struct UniversalityReport {
    LimitKernel limit;
    std::vector<UniversalityRow> rows;
    std::vector<int> ns;
    std::vector<double> max_error; ///< per entry of ns
    bool monotone = false;         ///< max_error nonincreasing along ns
};

/// Ratio sweep over every n in ns and every pair (a, b) from as x bs.
UniversalityReport universality_sweep(const Discriminant& d, const BandStructure& bands,
                                      double theta, const std::vector<int>& ns,
                                      const std::vector<cplx>& as, const std::vector<cplx>& bs,
                                      const LimitOptions& opt = {});

} // namespace opuc

#endif // OPUC_KERNELS_HPP
