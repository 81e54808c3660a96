#ifndef OPUC_SZEGO_HPP
#define OPUC_SZEGO_HPP

#include "opuc/poly.hpp"

#include <vector>

namespace opuc {

/// One period alpha_0..alpha_{p-1} of a periodic Verblunsky sequence.
/// Construction validates |alpha_j| < 1 and reports the offending index.
class VerblunskyPeriod {
public:
    explicit VerblunskyPeriod(std::vector<cplx> alphas);

    int period() const { return static_cast<int>(alphas_.size()); }
    /// p if p is even, 2p otherwise.
    int effective_period() const { return period() % 2 == 0 ? period() : 2 * period(); }
    /// The same sequence written with the even period effective_period().
    VerblunskyPeriod even() const;

    const std::vector<cplx>& alphas() const { return alphas_; }
    /// alpha_n of the periodic extension.
    cplx alpha(long long n) const { return alphas_[static_cast<std::size_t>(n % period())]; }

    /// prod_j sqrt(1 - |alpha_j|^2) over the stored period.
    double r() const;
    bool is_free() const;

    /// Same sequence with every coefficient negated (second kind polynomials).
    VerblunskyPeriod negated() const;

    friend bool operator==(const VerblunskyPeriod&, const VerblunskyPeriod&) = default;

private:
    std::vector<cplx> alphas_;
};

/// Phi_n, Phi*_n, Psi_n, Psi*_n (or their orthonormal versions) at one degree.
struct PolyQuad {
    int n = 0;
    ComplexPoly phi, phi_star, psi, psi_star;
    /// Leading coefficient of the orthonormal phi_n (1 in the monic variant).
    double kappa = 1.0;
    bool monic = false;
};

enum class Normalization { Orthonormal, Monic };

/// Coefficient vectors after n Szego steps; psi runs the recursion with -alpha.
/// The orthonormal variant scales all four by kappa_n = 1/prod_{j<n} rho_j.
PolyQuad iterate_polys(const VerblunskyPeriod& v, int n,
                       Normalization norm = Normalization::Orthonormal);

/// All quads for degrees 0..n in one sweep.
std::vector<PolyQuad> iterate_polys_upto(const VerblunskyPeriod& v, int n,
                                         Normalization norm = Normalization::Orthonormal);

/// [[z, -conj(alpha)], [-alpha z, 1]]
struct TransferMatrix {
    cplx a11, a12, a21, a22;

    static TransferMatrix step(cplx alpha, cplx z);
    cplx determinant() const { return a11 * a22 - a12 * a21; }
    TransferMatrix operator*(const TransferMatrix& rhs) const;
};

struct QuadValues {
    cplx phi, phi_star, psi, psi_star;
};

/// Pointwise O(n) recursion: (phi_n, phi*_n, psi_n, psi*_n)(z), orthonormal.
QuadValues eval_quad_at(const VerblunskyPeriod& v, int n, cplx z,
                        Normalization norm = Normalization::Orthonormal);

} // namespace opuc

#endif // OPUC_SZEGO_HPP
