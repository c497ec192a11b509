#ifndef RRP_INTPOLY_HPP
#define RRP_INTPOLY_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace rrp {

using Int = mpz_class;
using Rat = mpq_class;

Int ipow(const Int& base, unsigned long e);
Rat qpow(const Rat& base, long e);
Int binom(unsigned long n, unsigned long k);
Rat make_rat(const Int& num, const Int& den);

// Dense univariate polynomial over Z, coefficients in ascending degree.
// Invariant: trailing (leading-coefficient) zeros are trimmed; the zero
// polynomial is the empty vector and has degree -1.
struct ZPoly {
    std::vector<Int> c;

    ZPoly() = default;
    explicit ZPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { trim(); }
    static ZPoly from_longs(const std::vector<long>& v);
    static ZPoly monomial(long deg, const Int& lead = 1);

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Int& lc() const { return c.back(); }
    Int coeff(long i) const { return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : Int(0); }
    void trim();
    bool operator==(const ZPoly& o) const { return c == o.c; }
    bool operator!=(const ZPoly& o) const { return c != o.c; }
    std::string str(const std::string& var = "x") const;
};

ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly operator*(const Int& s, const ZPoly& a);
ZPoly operator-(const ZPoly& a);

ZPoly zp_pow(const ZPoly& a, unsigned long e);
ZPoly derivative(const ZPoly& a);
Int eval(const ZPoly& a, const Int& x);
Rat eval(const ZPoly& a, const Rat& x);
ZPoly compose(const ZPoly& a, const ZPoly& b);  // a(b(x))
Int content(const ZPoly& a);

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r.
ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b);

// Resultant over Z via the subresultant PRS.  Res(a,b) with the usual
// Sylvester convention; Res(const c, b) = c^deg(b).
Int resultant(const ZPoly& a, const ZPoly& b);

// Test oracle: Res as the Bareiss determinant of the Sylvester matrix.
Int resultant_sylvester(const ZPoly& a, const ZPoly& b);

// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)
Int discriminant(const ZPoly& f);

// Dense univariate polynomial over Q, ascending degree.
struct QPoly {
    std::vector<Rat> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static QPoly from_z(const ZPoly& a);

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rat coeff(long i) const { return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : Rat(0); }
    void trim();
    bool operator==(const QPoly& o) const { return c == o.c; }
    bool operator!=(const QPoly& o) const { return c != o.c; }
};

QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const Rat& s, const QPoly& a);
Rat eval(const QPoly& a, const Rat& x);

// Division with remainder by a monic divisor.
void divrem_monic(const QPoly& a, const QPoly& m, QPoly& quo, QPoly& rem);
QPoly mod_monic(const QPoly& a, const QPoly& m);

// Common denominator d and integer polynomial n with a = n/d, d > 0.
void clear_denominators(const QPoly& a, ZPoly& n, Int& d);

// Resultant over Q by clearing denominators: Res(a,b) for a with deg m,
// b rational of any degree.
Rat resultant_q(const ZPoly& a, const QPoly& b);

// Laurent polynomial over Z: c[i] is the coefficient of x^(off+i).
struct ZLaurent {
    std::vector<Int> c;
    long off = 0;

    static ZLaurent from_poly(const ZPoly& p) { return ZLaurent{p.c, 0}; }
    void normalize();
    bool is_zero() const { return c.empty(); }
    long lo() const { return off; }
    long hi() const { return off + static_cast<long>(c.size()) - 1; }
    Int coeff(long k) const;
    bool operator==(const ZLaurent& o) const;
};

ZLaurent operator+(const ZLaurent& a, const ZLaurent& b);
ZLaurent operator-(const ZLaurent& a, const ZLaurent& b);
ZLaurent operator*(const ZLaurent& a, const ZLaurent& b);
ZLaurent lshift(const ZLaurent& a, long k);  // multiply by x^k
ZLaurent laurent_compose(const ZPoly& a, const ZLaurent& b);  // a(b(x))
bool laurent_is_poly(const ZLaurent& a);
ZPoly laurent_to_poly(const ZLaurent& a);

}  // namespace rrp

#endif
