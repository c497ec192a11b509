#ifndef RRP_FROBENIUS_HPP
#define RRP_FROBENIUS_HPP

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "rrp/curves.hpp"
#include "rrp/cyclofield.hpp"
#include "rrp/finitefield.hpp"
#include "rrp/intpoly.hpp"

namespace rrp {

// Numerator of the zeta function over F_Q: 1 + c_1 T + ... + c_2g T^(2g),
// with the functional equation c_(2g-i) = Q^(g-i) c_i.
struct LPolynomial {
    std::vector<Int> c;  // size 2g+1, c[0] = 1
    Int Q;
    int genus = 0;
};

// Monic degree-g P with reverse(L)(X) = X^g P(X + Q/X); roots are the traces.
struct RealWeilPolynomial {
    std::vector<Int> c;  // size g+1, monic
    Int Q;
};

// #C(F) for y^2 = f(x) with f monic of odd degree (one point at infinity).
// Deterministic for any worker count.
Int count_points(const ZPoly& f, const FqField& F, int workers = 1);

// Counts over F_(Q^m), m = 1..g, Newton's identities, functional equation.
// When crosscheck_extra and the next field is small, the count over
// F_(Q^(g+1)) is verified against the assembled polynomial.
LPolynomial l_polynomial(const ZPoly& f, long q, int res_deg, int genus, int workers = 1,
                         bool crosscheck_extra = false);

RealWeilPolynomial real_weil(const LPolynomial& lp);

// Galois-stable set of Frobenius traces at the primes above q.
struct TraceSet {
    long q = 0;
    int f = 1;
    Int Q;
    PrimeSplitting split;
    std::vector<KElem> elements;  // distinct values
    std::vector<int> label_elem;  // per label: index into elements
    KElem rep;                    // value assigned to label 0
    LPolynomial lp;
};

TraceSet trace_set(const CycloField& K, const Int& a, const Int& b, long q, int workers = 1);

// Whether the q^(f*g) point-count enumeration fits the desk-scale limits.
bool trace_set_feasible(const CycloField& K, long q);

// a_q of an elliptic curve y^2 = cubic over F_q, and the trace over F_(q^f).
Int elliptic_aq(const ZPoly& cubic, long q, int workers = 1);
Int elliptic_trace_power(const Int& aq, long q, int f);

// Memoized trace sets keyed by (r, x, y, q); class representatives are
// canonicalized to x <= y through the interchange law.
class TraceSetCache {
public:
    TraceSet get(const CycloField& K, long x, long y, long q, int workers = 1);
    size_t size() const;

private:
    std::map<std::array<long, 4>, TraceSet> map_;
    mutable std::mutex mu_;
};

}  // namespace rrp

#endif
