#ifndef RRP_FREYPOLY_HPP
#define RRP_FREYPOLY_HPP

#include <string>
#include <vector>

#include "rrp/cyclofield.hpp"
#include "rrp/intpoly.hpp"

namespace rrp {

// Polynomial over Z[i], stored as real and imaginary integer polynomials.
struct GaussPoly {
    ZPoly re, im;

    bool operator==(const GaussPoly& o) const { return re == o.re && im == o.im; }
};

GaussPoly operator+(const GaussPoly& a, const GaussPoly& b);
GaussPoly operator-(const GaussPoly& a, const GaussPoly& b);
GaussPoly operator*(const GaussPoly& a, const GaussPoly& b);
// f(i x) and f(-i x) for integer f
GaussPoly substitute_ix(const ZPoly& f, bool negative);

// c_k = (r/(r-k)) * binom(r-k, k); c_0 = 1, r | c_k for k > 0, c_(r-1)/2 = r.
std::vector<Int> chebyshev_coeffs(int r);

// H(x) = sum_k c_k (ab)^k x^(r-2k), monic of degree r; (ab)^0 = 1 also for ab = 0.
ZPoly big_H(int r, const Int& a, const Int& b);

// (a^r + b^r)/(a + b), a + b != 0
Int phi_r(int r, const Int& a, const Int& b);

// alpha_j = sum_k (-1)^k 2^(r-2k-j) binom(r-2k, j) c_k  (0 <= j <= r)
Int shifted_chebyshev_part(int r, long j);

struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // first failing coefficient / context when !pass
};

struct IdentityReport {
    int r = 0;
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

// Exact coefficient identities for one r (see README for the list).
IdentityReport identity_suite(int r);

// disc f^- = (-1)^((r-1)/2) r^r (s^2+4)^((r-1)/2)
Rat disc_fminus(int r, const Rat& s);

struct DiscFminusShape {
    int sign;        // (-1)^((r-1)/2)
    Int r_pow_r;     // r^r
    long exponent;   // (r-1)/2, exponent on (s^2+4)
};
DiscFminusShape disc_fminus_symbolic(int r);

}  // namespace rrp

#endif
