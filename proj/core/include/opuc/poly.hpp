#ifndef OPUC_POLY_HPP
#define OPUC_POLY_HPP

#include <complex>
#include <span>
#include <vector>

namespace opuc {

using cplx = std::complex<double>;

/// Integer power by repeated squaring; exact for the small exponents used
/// with z^{p/2} and friends, and avoids the log/exp route of std::pow.
cplx ipow(cplx z, long long n);

/// Dense polynomial with complex coefficients; coeffs()[j] multiplies z^j.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<cplx> coeffs);
    ComplexPoly(std::initializer_list<cplx> coeffs);

    /// Monic polynomial prod (z - r_j).
    static ComplexPoly from_roots(std::span<const cplx> roots);
    static ComplexPoly monomial(int degree, cplx coeff = 1.0);

    /// Degree after dropping exact trailing zeros; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    cplx coeff(int j) const;
    double max_abs_coeff() const;

    /// Horner evaluation.
    cplx operator()(cplx z) const;
    ComplexPoly derivative() const;

    /// Copy with trailing coefficients below rel * max|c| removed.
    ComplexPoly trimmed(double rel = 1e-14) const;

    ComplexPoly& operator+=(const ComplexPoly& rhs);
    ComplexPoly& operator-=(const ComplexPoly& rhs);
    ComplexPoly& operator*=(cplx s);

    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
    friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
    friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

    /// Multiply by z^shift (shift >= 0).
    ComplexPoly shifted(int shift) const;

private:
    std::vector<cplx> coeffs_;
};

/// Reversal z^n conj(P(1/conj z)): coefficient j of the result is
/// conj(coefficient n-j of P). Throws ArgumentError when degree(P) > n.
ComplexPoly star(const ComplexPoly& p, int n);

/// All roots with multiplicity. Companion-matrix eigenvalues followed by
/// Newton polishing that is only kept when it lowers the residual.
/// Throws ArgumentError on the zero or a constant polynomial.
std::vector<cplx> roots(const ComplexPoly& p);

/// Finite Laurent polynomial sum_{j=lo}^{hi} c_j z^j.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(int min_exponent, std::vector<cplx> coeffs);
    /// z^shift * p
    static LaurentPoly from_poly(const ComplexPoly& p, int shift = 0);
    static LaurentPoly constant(cplx c) { return LaurentPoly(0, {c}); }

    int min_exponent() const { return lo_; }
    int max_exponent() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
    cplx coeff(int exponent) const;
    std::span<const cplx> coeffs() const { return coeffs_; }
    double max_abs_coeff() const;

    /// Throws DomainError at z = 0 when a negative power carries a nonzero
    /// coefficient.
    cplx operator()(cplx z) const;
    LaurentPoly derivative() const;

    /// Multiply by z^shift (any sign).
    LaurentPoly shifted(int shift) const;

    /// Ordinary polynomial; all negative-power coefficients must be at most
    /// tol * max|c| in modulus, otherwise ConsistencyError.
    ComplexPoly to_poly(double tol = 1e-10) const;

    LaurentPoly& operator+=(const LaurentPoly& rhs);
    LaurentPoly& operator-=(const LaurentPoly& rhs);
    LaurentPoly& operator*=(cplx s);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
    friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

private:
    int lo_ = 0;
    std::vector<cplx> coeffs_;
};

} // namespace opuc

#endif // OPUC_POLY_HPP
