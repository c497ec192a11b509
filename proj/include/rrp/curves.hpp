#ifndef RRP_CURVES_HPP
#define RRP_CURVES_HPP

#include <string>

#include "rrp/freypoly.hpp"
#include "rrp/intpoly.hpp"

namespace rrp {

// Odd-degree monic hyperelliptic model y^2 = f(x).
struct HyperellipticModel {
    ZPoly f;
    int genus = 0;
    std::string base = "rational-integers";
};

// y^2 = H(x) + b^r - a^r; validated inputs (gcd(a,b) = 1, a^r + b^r != 0).
HyperellipticModel kraus_curve(int r, const Int& a, const Int& b);

// Same polynomial without the coprimality check; used for residue classes
// (x, y) mod q where only nonsingularity mod q matters.
ZPoly kraus_poly(int r, const Int& a, const Int& b);

// (-1)^((r-1)/2) 2^(2(r-1)) r^r (a^r+b^r)^(r-1), cross-checked against the
// resultant-based discriminant of the model (2^(4g) disc f).
Int curve_discriminant(int r, const Int& a, const Int& b);
Int curve_discriminant_closed(int r, const Int& a, const Int& b);

struct FreySpecialization {
    int r;
    Int a, b;
    Rat t0;             // a^r/(a^r+b^r)
    Rat s0_squared;     // (a^r-b^r)^2/(ab)^r
    Rat alpha_squared;  // t0 - t0^2
    Rat two_t0_minus_1; // alpha * s0 in either square-root convention
};

FreySpecialization specialization(int r, const Int& a, const Int& b);

struct LegendreCurve {
    Rat t0;
    ZPoly integral_model;  // y^2 = x (x - (a^r+b^r)) (x - a^r)
    Rat j;                 // 2^8 (t^2-t+1)^3 / (t^2 (t-1)^2)
};

LegendreCurve legendre_companion(int r, const Int& a, const Int& b);

// Trace sign between J_r(a,b) and J_r(b,a) at a good prime of norm Qf.
int interchange_sign(const Int& Qf);

struct TwistClassInfo {
    int r;
    int sign_norm_1_mod_4 = +1;
    int sign_norm_3_mod_4 = -1;
    std::string description;
};

TwistClassInfo twist_class(int r, const Int& a, const Int& b);

}  // namespace rrp

#endif
