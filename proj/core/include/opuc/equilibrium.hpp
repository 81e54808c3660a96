#ifndef OPUC_EQUILIBRIUM_HPP
#define OPUC_EQUILIBRIUM_HPP

#include "opuc/periodic.hpp"

#include <utility>
#include <vector>

namespace opuc {

/// Normalized cumulative distribution k(theta) of V(theta) dtheta / 2pi over
/// the bands, starting at x_1 (the smallest band start in [0, 2pi)).
///
/// Each band is integrated with theta = mid + half * sin(u), which cancels the
/// inverse square root of V at open edges; u is split into equal panels with
/// 8-point Gauss-Legendre on each.
class BandCdf {
public:
    BandCdf(const Discriminant& d, const BandStructure& bands, int quad_points_per_band = 512);

    /// k(theta) in [0, 1]; constant across gaps.
    double operator()(double theta) const;
    /// Integral of V dtheta / 2pi over all bands before normalization.
    double total_raw() const { return total_raw_; }
    double x1() const { return x1_; }
    int panels() const { return panels_; }
    /// (theta, k(theta)) at `per_band` equally spaced angles inside each band.
    std::vector<std::pair<double, double>> table(int per_band = 64) const;

private:
    struct Ref {
        double theta;
        int sign;
    };
    struct Band {
        Arc arc;
        double mid = 0.0;
        double half = 0.0;
        bool open_ends = true;     ///< endpoints are edges (false for the full circle)
        int start_sign = 0, end_sign = 0;
        std::vector<Ref> interior; ///< closed gaps inside the band
        std::vector<double> cum;   ///< raw mass at panel boundaries
        double before = 0.0;       ///< raw mass of earlier bands
    };

    double integrand(const Band& b, double u) const;
    double partial(const Band& b, double t) const;

    const Discriminant* d_;
    std::vector<Band> bands_;
    int panels_;
    double x1_ = 0.0;
    double total_raw_ = 0.0;
};

struct SingularPoint {
    double theta = 0.0;
    int s = 0;
    double residual = 0.0;
    int band = -1;
};

struct SingularSearch {
    int s = 0;
    std::vector<SingularPoint> points;       ///< residual < 1e-6, inside a band
    std::vector<SingularPoint> near_misses;  ///< 1e-6 <= residual < 1e-3
    std::vector<SingularPoint> feature_hits; ///< residual < 1e-6 on an edge or closed gap
};

/// rho(theta) = |2 e^{-i pi p k(theta)} + eta(e^{i theta}; psi_s/phi_s)|.
double singular_residual(const Discriminant& d, const BandCdf& k, int s, double theta);

/// Local minima of rho on each band: scan of scan_size points per band,
/// Brent refinement, then a Gauss-Newton polish on the complex residual.
/// Throws DomainError if phi_s vanishes on the scan grid.
SingularSearch find_singular_points(const Discriminant& d, const BandStructure& bands,
                                    const BandCdf& k, int s, int scan_size = 2048);

/// {0, ..., 0, alpha} with period p (p even, >= 2).
VerblunskyPeriod make_spike_family(int p, cplx alpha);

/// alpha = -c + i sqrt(c - c^2), which satisfies Re alpha = -|alpha|^2 for c in (0, 1).
cplx critical_circle_alpha(double c);

} // namespace opuc

#endif // OPUC_EQUILIBRIUM_HPP
