#include "opuc/szego.hpp"

#include "opuc/errors.hpp"

#include <cmath>
#include <string>

namespace opuc {

VerblunskyPeriod::VerblunskyPeriod(std::vector<cplx> alphas) : alphas_(std::move(alphas))
{
    if (alphas_.empty())
        throw ArgumentError("VerblunskyPeriod: empty period");
    for (std::size_t j = 0; j < alphas_.size(); ++j) {
        const double m = std::abs(alphas_[j]);
        if (!(m < 1.0))
            throw ArgumentError("VerblunskyPeriod: |alpha_" + std::to_string(j) +
                                "| = " + std::to_string(m) + " is not < 1");
    }
}

VerblunskyPeriod VerblunskyPeriod::even() const
{
    if (period() % 2 == 0)
        return *this;
    std::vector<cplx> doubled = alphas_;
    doubled.insert(doubled.end(), alphas_.begin(), alphas_.end());
    return VerblunskyPeriod(std::move(doubled));
}

double VerblunskyPeriod::r() const
{
    double r = 1.0;
    for (cplx a : alphas_)
        r *= std::sqrt(1.0 - std::norm(a));
    return r;
}

bool VerblunskyPeriod::is_free() const
{
    for (cplx a : alphas_)
        if (a != 0.0)
            return false;
    return true;
}

VerblunskyPeriod VerblunskyPeriod::negated() const
{
    std::vector<cplx> neg(alphas_.size());
    for (std::size_t j = 0; j < alphas_.size(); ++j)
        neg[j] = -alphas_[j];
    return VerblunskyPeriod(std::move(neg));
}

std::vector<PolyQuad> iterate_polys_upto(const VerblunskyPeriod& v, int n, Normalization norm)
{
    if (n < 0)
        throw ArgumentError("iterate_polys: n must be >= 0");
    const ComplexPoly z = ComplexPoly::monomial(1);
    ComplexPoly phi{1.0}, phi_s{1.0}, psi{1.0}, psi_s{1.0};
    double kappa = 1.0;

    std::vector<PolyQuad> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    auto emit = [&](int deg) {
        PolyQuad q;
        q.n = deg;
        q.monic = norm == Normalization::Monic;
        const double scale = q.monic ? 1.0 : kappa;
        q.kappa = scale;
        q.phi = phi * scale;
        q.phi_star = phi_s * scale;
        q.psi = psi * scale;
        q.psi_star = psi_s * scale;
        out.push_back(std::move(q));
    };
    emit(0);
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha(k);
        ComplexPoly zphi = z * phi;
        ComplexPoly zpsi = z * psi;
        ComplexPoly next_phi = zphi - phi_s * std::conj(a);
        ComplexPoly next_phi_s = phi_s - zphi * a;
        ComplexPoly next_psi = zpsi + psi_s * std::conj(a);
        ComplexPoly next_psi_s = psi_s + zpsi * a;
        phi = std::move(next_phi);
        phi_s = std::move(next_phi_s);
        psi = std::move(next_psi);
        psi_s = std::move(next_psi_s);
        kappa /= std::sqrt(1.0 - std::norm(a));
        emit(k + 1);
    }
    return out;
}

PolyQuad iterate_polys(const VerblunskyPeriod& v, int n, Normalization norm)
{
    return std::move(iterate_polys_upto(v, n, norm).back());
}

TransferMatrix TransferMatrix::step(cplx alpha, cplx z)
{
    return {z, -std::conj(alpha), -alpha * z, 1.0};
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& m) const
{
    return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22,
            a21 * m.a11 + a22 * m.a21, a21 * m.a12 + a22 * m.a22};
}

QuadValues eval_quad_at(const VerblunskyPeriod& v, int n, cplx z, Normalization norm)
{
    if (n < 0)
        throw ArgumentError("eval_quad_at: n must be >= 0");
    const bool monic = norm == Normalization::Monic;
    cplx phi = 1.0, phi_s = 1.0, psi = 1.0, psi_s = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx a = v.alpha(k);
        const double rho = monic ? 1.0 : std::sqrt(1.0 - std::norm(a));
        // A_k applied to (phi, phi*) and to (psi, psi*) with -alpha.
        const TransferMatrix A = TransferMatrix::step(a, z);
        const TransferMatrix B = TransferMatrix::step(-a, z);
        const cplx p1 = (A.a11 * phi + A.a12 * phi_s) / rho;
        const cplx p2 = (A.a21 * phi + A.a22 * phi_s) / rho;
        const cplx q1 = (B.a11 * psi + B.a12 * psi_s) / rho;
        const cplx q2 = (B.a21 * psi + B.a22 * psi_s) / rho;
        phi = p1;
        phi_s = p2;
        psi = q1;
        psi_s = q2;
    }
    return {phi, phi_s, psi, psi_s};
}

} // namespace opuc
