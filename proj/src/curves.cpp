#include "rrp/curves.hpp"

#include <stdexcept>

#include "rrp/errors.hpp"

namespace rrp {

namespace {

void validate_pair(int r, const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw std::invalid_argument("invalid-solution: gcd(a,b) != 1");
    if (ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r)) == 0)
        throw std::invalid_argument("singular-curve: a^r + b^r = 0");
}

}  // namespace

ZPoly kraus_poly(int r, const Int& a, const Int& b) {
    ZPoly f = big_H(r, a, b);
    Int cst = ipow(b, static_cast<unsigned long>(r)) - ipow(a, static_cast<unsigned long>(r));
    return f + ZPoly({std::vector<Int>{cst}});
}

HyperellipticModel kraus_curve(int r, const Int& a, const Int& b) {
    validate_pair(r, a, b);
    HyperellipticModel m;
    m.f = kraus_poly(r, a, b);
    m.genus = (r - 1) / 2;
    return m;
}

Int curve_discriminant_closed(int r, const Int& a, const Int& b) {
    int g = (r - 1) / 2;
    Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
    Int out = ipow(Int(2), static_cast<unsigned long>(2 * (r - 1))) *
              ipow(Int(r), static_cast<unsigned long>(r)) *
              ipow(s, static_cast<unsigned long>(r - 1));
    return (g & 1) ? Int(-out) : out;
}

Int curve_discriminant(int r, const Int& a, const Int& b) {
    validate_pair(r, a, b);
    int g = (r - 1) / 2;
    Int closed = curve_discriminant_closed(r, a, b);
    Int model = ipow(Int(2), static_cast<unsigned long>(4 * g)) * discriminant(kraus_poly(r, a, b));
    if (closed != model)
        throw certificate_error("curve_discriminant: closed form disagrees with the resultant-based value");
    return closed;
}

FreySpecialization specialization(int r, const Int& a, const Int& b) {
    validate_pair(r, a, b);
    if (a == 0 || b == 0) throw std::invalid_argument("specialization: requires ab != 0");
    FreySpecialization s;
    s.r = r;
    s.a = a;
    s.b = b;
    Int ar = ipow(a, static_cast<unsigned long>(r)), br = ipow(b, static_cast<unsigned long>(r));
    s.t0 = make_rat(ar, ar + br);
    s.s0_squared = make_rat((ar - br) * (ar - br), ipow(a * b, static_cast<unsigned long>(r)));
    s.alpha_squared = s.t0 - s.t0 * s.t0;
    s.two_t0_minus_1 = 2 * s.t0 - 1;
    // (2 t0 - 1)^2 = alpha^2 s0^2 binds alpha and s0 without materializing roots
    if (s.two_t0_minus_1 * s.two_t0_minus_1 != s.alpha_squared * s.s0_squared)
        throw certificate_error("specialization: alpha relation failed");
    return s;
}

LegendreCurve legendre_companion(int r, const Int& a, const Int& b) {
    validate_pair(r, a, b);
    if (a == 0 || b == 0)
        throw std::invalid_argument("degenerate-legendre: t0 lies in {0,1} when ab = 0");
    LegendreCurve L;
    Int ar = ipow(a, static_cast<unsigned long>(r)), br = ipow(b, static_cast<unsigned long>(r));
    Int u = ar + br;
    L.t0 = make_rat(ar, u);
    // scale x -> x/u, y -> y/u^(3/2): y^2 = x (x - u) (x - a^r)
    ZPoly x = ZPoly::from_longs({0, 1});
    L.integral_model = x * (x - ZPoly({std::vector<Int>{u}})) * (x - ZPoly({std::vector<Int>{ar}}));
    Rat t = L.t0;
    Rat num = qpow(t * t - t + 1, 3);
    Rat den = t * t * qpow(t - 1, 2);
    L.j = Rat(256) * num / den;
    return L;
}

int interchange_sign(const Int& Qf) {
    Int m = Qf % 4;
    if (m < 0) m += 4;
    if (m == 1) return +1;
    if (m == 3) return -1;
    throw std::invalid_argument("interchange_sign: norm must be odd");
}

TwistClassInfo twist_class(int r, const Int& a, const Int& b) {
    validate_pair(r, a, b);
    TwistClassInfo t;
    t.r = r;
    t.description =
        "swapping (a,b) twists the curve by -1: at a good prime q' of norm N, "
        "a_q'(J(b,a)) = a_q'(J(a,b)) if N = 1 mod 4 and -a_q'(J(a,b)) if N = 3 mod 4";
    return t;
}

}  // namespace rrp
