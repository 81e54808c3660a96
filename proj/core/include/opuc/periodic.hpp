#ifndef OPUC_PERIODIC_HPP
#define OPUC_PERIODIC_HPP

#include "opuc/poly.hpp"
#include "opuc/szego.hpp"

#include <string_view>
#include <vector>

namespace opuc {

/// How the second kind polynomials are scaled when period data is built.
/// Matched is the only correct choice; MonicDebug leaves psi monic and exists
/// so consistency checks can be shown to fire.
enum class PsiScaling { Matched, MonicDebug };

/// Everything derived from one (even) period: the four degree-p polynomials,
/// the degree-s polynomials for s < p, the discriminant
///   Delta(z) = (phi_p + phi*_p + psi_p + psi*_p) / (2 z^{p/2})
/// as a Laurent polynomial, and eta(z; sigma) = sigma (phi_p - phi*_p) - psi_p - psi*_p.
///
/// Odd periods are doubled on construction, so p() is always even and
/// z^{p/2} is an integer power.
class Discriminant {
public:
    explicit Discriminant(const VerblunskyPeriod& v, PsiScaling psi = PsiScaling::Matched);

    int p() const { return p_; }
    const VerblunskyPeriod& period() const { return v_; }
    /// r over the even period.
    double r() const { return r_; }

    /// Orthonormal quad of degree s, 0 <= s <= p.
    const PolyQuad& quad(int s) const { return quads_.at(static_cast<std::size_t>(s)); }

    const LaurentPoly& delta() const { return delta_; }
    const ComplexPoly& eta_plus() const { return eta_plus_; }
    const ComplexPoly& eta_minus() const { return eta_minus_; }
    /// phi_p - phi*_p; its zeros are the resonances.
    const ComplexPoly& resonance_poly() const { return phi_diff_; }
    /// z^{p/2} Delta(z) = (phi_p + phi*_p + psi_p + psi*_p) / 2.
    const ComplexPoly& half_trace() const { return half_trace_; }

    cplx operator()(cplx z) const { return delta_(z); }
    /// eta(z; sigma) for any complex sigma.
    cplx eta(cplx z, cplx sigma) const;

    /// Delta(e^{i theta}) (real part; the imaginary part is rounding noise).
    double on_circle(double theta) const;
    /// Delta(e^{i (ref + offset)}) - Delta(e^{i ref}) without cancellation.
    double difference_on_circle(double ref, double offset) const;
    /// W(theta) = d/dtheta Delta(e^{i theta}).
    double W(double theta) const;
    double W_prime(double theta) const;
    /// Upper bound for |Delta| on the circle (sum of |coefficients|).
    double scale() const;

    /// z^{p/2} Gamma_+(z): the larger-modulus root of G^2 - z^{p/2} Delta G + z^p.
    /// Defined for every z, including 0.
    cplx scaled_gamma(cplx z) const;

private:
    VerblunskyPeriod v_;
    int p_;
    double r_;
    std::vector<PolyQuad> quads_;
    LaurentPoly delta_;
    ComplexPoly eta_plus_, eta_minus_, phi_diff_, half_trace_;
};

struct PhiPair {
    cplx phi;
    cplx phi_star;
};

/// phi_{kp+s}(z), phi*_{kp+s}(z) from the Chebyshev closed form.
/// Throws DomainError at z = 0 and ArgumentError for k < 0 or s outside [0, p).
PhiPair closed_form_phi(const Discriminant& d, int k, int s, cplx z);

/// z^{-kp/2} (phi_{kp+s}, phi*_{kp+s}) / Gamma_+(z)^k, evaluated through the
/// bounded pair (U_k, U_{k-1}) / Gamma_+^k. z must be off the bands.
PhiPair closed_form_phi_normalized(const Discriminant& d, int k, int s, cplx z);

struct GammaPair {
    cplx plus;
    cplx minus;
};

/// Gamma_{+-} = Delta/2 +- sqrt(Delta^2/4 - 1), |Gamma_+| >= 1 >= |Gamma_-|.
/// DomainError when |Gamma_+| is within 1e-10 of 1 (z on a band).
GammaPair gamma_pm(const Discriminant& d, cplx z);

struct SzegoLimits {
    cplx j;
    cplx l;
};

/// (j_s(z), l_s(z)): limits of z^{-kp/2} phi_{kp+s} / Gamma_+^k and of the
/// starred version. z strictly off the bands.
SzegoLimits szego_asymptotics(const Discriminant& d, int s, cplx z);

/// Arc [start, end] of the circle, start in [0, 2pi), end > start (end may
/// exceed 2pi when the arc wraps through angle 0).
struct Arc {
    double start = 0.0;
    double end = 0.0;
    double length() const { return end - start; }
    /// theta (any representative) lies in the arc, widened by tol.
    bool contains(double theta, double tol = 0.0) const;
};

struct EdgeRecord {
    double theta = 0.0;
    int delta_sign = 1; ///< +1 for Delta = 2, -1 for Delta = -2
    bool is_resonance = false;
    bool warning = false;
};

struct ClosedGap {
    double theta = 0.0;
    int delta_sign = 1;
    /// Touch not resolved at tolerance: |Delta| slightly above 2 (a gap too
    /// narrow to separate) or level crossings were merged into it.
    bool warning = false;
};

struct BandStructure {
    std::vector<Arc> bands;          ///< sorted by start; a wrapping arc comes last
    std::vector<ClosedGap> closed_gaps;
    std::vector<double> resonances;  ///< angles of the zeros of phi_p - phi*_p
    std::vector<EdgeRecord> edges;   ///< sorted by angle
    int rejected_resonances = 0;     ///< roots with | |root| - 1 | > 1e-6
    int grid_size = 0;
    bool full_circle = false;
};

/// Bands, edges, closed gaps and resonances from a grid scan of
/// Delta(e^{i theta}) refined by bisection. grid_size >= 4096.
BandStructure band_structure(const Discriminant& d, int grid_size = 16384);

enum class RegimeLabel { InteriorBulk, EdgeNonResonant, EdgeResonant, ClosedGap, OutsideBands };

std::string_view to_string(RegimeLabel r);

/// Angular tolerance for snapping a theta onto an edge or a closed gap.
inline constexpr double kFeatureTol = 1e-7;

struct Feature {
    RegimeLabel label = RegimeLabel::OutsideBands;
    double theta = 0.0;   ///< the feature's own angle (edge / closed gap)
    int delta_sign = 0;
    double distance = 0.0;
};

/// Nearest edge or closed gap to theta.
Feature nearest_feature(const BandStructure& bands, double theta);

RegimeLabel classify_point(const Discriminant& d, const BandStructure& bands, double theta,
                           double tol = 1e-9);

/// Equilibrium density V(theta) = |W| / (p sqrt(4 - Delta^2)).
/// Closed gap: sqrt(|W'|/2)/p. Open band edge: +infinity. Gap: DomainError.
double v_density(const Discriminant& d, const BandStructure& bands, double theta);

/// V at theta = ref + offset, where Delta(e^{i ref}) = 2 ref_sign (an edge or a
/// closed gap). 4 - Delta^2 is formed from the difference to the reference, so
/// the result stays accurate arbitrarily close to it. ref_sign = 0 means no
/// reference (plain formula). Returns +infinity when 4 - Delta^2 underflows.
double v_density_from(const Discriminant& d, double ref, double offset, int ref_sign);

/// theta mod 2pi in [0, 2pi).
double wrap_angle(double theta);
/// Shortest angular distance.
double angular_distance(double a, double b);

} // namespace opuc

#endif // OPUC_PERIODIC_HPP
