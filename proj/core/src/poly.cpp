#include "opuc/poly.hpp"

#include "opuc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace opuc {

cplx ipow(cplx z, long long n)
{
    if (n < 0)
        return 1.0 / ipow(z, -n);
    cplx result = 1.0;
    while (n > 0) {
        if (n & 1)
            result *= z;
        z *= z;
        n >>= 1;
    }
    return result;
}

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

ComplexPoly::ComplexPoly(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) {}

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots)
{
    std::vector<cplx> c{1.0};
    for (cplx r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = std::move(next);
    }
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::monomial(int degree, cplx coeff)
{
    std::vector<cplx> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = coeff;
    return ComplexPoly(std::move(c));
}

int ComplexPoly::degree() const
{
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j)
        if (coeffs_[j] != 0.0)
            return j;
    return -1;
}

cplx ComplexPoly::coeff(int j) const
{
    if (j < 0 || j >= static_cast<int>(coeffs_.size()))
        return 0.0;
    return coeffs_[j];
}

double ComplexPoly::max_abs_coeff() const
{
    double m = 0.0;
    for (cplx c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

cplx ComplexPoly::operator()(cplx z) const
{
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

ComplexPoly ComplexPoly::derivative() const
{
    if (coeffs_.size() <= 1)
        return ComplexPoly();
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t j = 1; j < coeffs_.size(); ++j)
        d[j - 1] = static_cast<double>(j) * coeffs_[j];
    return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::trimmed(double rel) const
{
    const double cut = rel * max_abs_coeff();
    std::size_t n = coeffs_.size();
    while (n > 0 && std::abs(coeffs_[n - 1]) <= cut)
        --n;
    return ComplexPoly(std::vector<cplx>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n)));
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
        coeffs_[j] += rhs.coeffs_[j];
    return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
        coeffs_[j] -= rhs.coeffs_[j];
    return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s)
{
    for (cplx& c : coeffs_)
        c *= s;
    return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b)
{
    if (a.coeffs_.empty() || b.coeffs_.empty())
        return ComplexPoly();
    std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::shifted(int shift) const
{
    if (shift < 0)
        throw ArgumentError("ComplexPoly::shifted: negative shift");
    std::vector<cplx> c(static_cast<std::size_t>(shift), 0.0);
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return ComplexPoly(std::move(c));
}

ComplexPoly star(const ComplexPoly& p, int n)
{
    if (n < 0 || p.degree() > n)
        throw ArgumentError("star: degree " + std::to_string(p.degree()) + " exceeds n = " +
                            std::to_string(n));
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        c[j] = std::conj(p.coeff(n - j));
    return ComplexPoly(std::move(c));
}

namespace {

double root_residual(const ComplexPoly& p, cplx z)
{
    return std::abs(p(z));
}

} // namespace

std::vector<cplx> roots(const ComplexPoly& p)
{
    const ComplexPoly q = p.trimmed(1e-14);
    const int n = q.degree();
    if (n < 0)
        throw ArgumentError("roots: zero polynomial");
    if (n == 0)
        throw ArgumentError("roots: constant polynomial has no roots");

    // Leading zeros of the coefficient list are roots at the origin; deflate
    // them exactly so the companion matrix stays well scaled.
    int low = 0;
    while (q.coeff(low) == 0.0)
        ++low;
    std::vector<cplx> out(static_cast<std::size_t>(low), 0.0);
    const int m = n - low;
    if (m == 0)
        return out;

    const cplx lead = q.coeff(n);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i)
        companion(i, m - 1) = -q.coeff(low + i) / lead;

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw NumericError("roots: companion eigenvalue iteration did not converge");

    const ComplexPoly dq = q.derivative();
    for (int i = 0; i < m; ++i) {
        cplx z = solver.eigenvalues()[i];
        double res = root_residual(q, z);
        for (int it = 0; it < 3; ++it) {
            const cplx d = dq(z);
            if (d == 0.0)
                break;
            const cplx cand = z - q(z) / d;
            const double cand_res = root_residual(q, cand);
            if (!(cand_res < res))
                break;
            z = cand;
            res = cand_res;
        }
        out.push_back(z);
    }
    return out;
}

LaurentPoly::LaurentPoly(int min_exponent, std::vector<cplx> coeffs)
    : lo_(min_exponent), coeffs_(std::move(coeffs))
{
}

LaurentPoly LaurentPoly::from_poly(const ComplexPoly& p, int shift)
{
    return LaurentPoly(shift, std::vector<cplx>(p.coeffs().begin(), p.coeffs().end()));
}

cplx LaurentPoly::coeff(int exponent) const
{
    const int j = exponent - lo_;
    if (j < 0 || j >= static_cast<int>(coeffs_.size()))
        return 0.0;
    return coeffs_[j];
}

double LaurentPoly::max_abs_coeff() const
{
    double m = 0.0;
    for (cplx c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

cplx LaurentPoly::operator()(cplx z) const
{
    if (z == 0.0) {
        for (int e = lo_; e < 0; ++e)
            if (coeff(e) != 0.0)
                throw DomainError("LaurentPoly: evaluation at 0 with negative exponents");
        return coeff(0);
    }
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc * ipow(z, lo_);
}

LaurentPoly LaurentPoly::derivative() const
{
    if (coeffs_.empty())
        return LaurentPoly();
    std::vector<cplx> d(coeffs_.size());
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
        d[j] = static_cast<double>(lo_ + static_cast<int>(j)) * coeffs_[j];
    return LaurentPoly(lo_ - 1, std::move(d));
}

LaurentPoly LaurentPoly::shifted(int shift) const
{
    return LaurentPoly(lo_ + shift, coeffs_);
}

ComplexPoly LaurentPoly::to_poly(double tol) const
{
    const double cut = tol * std::max(1.0, max_abs_coeff());
    for (int e = lo_; e < 0; ++e)
        if (std::abs(coeff(e)) > cut)
            throw ConsistencyError("LaurentPoly::to_poly: coefficient of z^" + std::to_string(e) +
                                   " has modulus " + std::to_string(std::abs(coeff(e))));
    const int hi = max_exponent();
    if (hi < 0)
        return ComplexPoly();
    std::vector<cplx> c(static_cast<std::size_t>(hi) + 1);
    for (int e = 0; e <= hi; ++e)
        c[e] = coeff(e);
    return ComplexPoly(std::move(c));
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs)
{
    if (rhs.coeffs_.empty())
        return *this;
    if (coeffs_.empty())
        return *this = rhs;
    const int lo = std::min(lo_, rhs.lo_);
    const int hi = std::max(max_exponent(), rhs.max_exponent());
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (int e = lo; e <= hi; ++e)
        c[e - lo] = coeff(e) + rhs.coeff(e);
    lo_ = lo;
    coeffs_ = std::move(c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs)
{
    return *this += rhs * cplx(-1.0);
}

LaurentPoly& LaurentPoly::operator*=(cplx s)
{
    for (cplx& c : coeffs_)
        c *= s;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
{
    if (a.coeffs_.empty() || b.coeffs_.empty())
        return LaurentPoly();
    std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return LaurentPoly(a.lo_ + b.lo_, std::move(c));
}

} // namespace opuc
