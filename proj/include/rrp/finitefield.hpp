#ifndef RRP_FINITEFIELD_HPP
#define RRP_FINITEFIELD_HPP

#include <cstdint>
#include <vector>

#include "rrp/intpoly.hpp"

namespace rrp {

// F_{p^k} as F_p[x]/(modulus), modulus monic of degree k.  Elements are
// coefficient vectors of length k (ascending).  Intended for small fields:
// p < 2^20 and p^k within uint64.
class FqField {
public:
    using El = std::vector<uint32_t>;

    FqField(uint32_t p, int k);                          // canonical modulus
    FqField(uint32_t p, std::vector<uint32_t> modulus);  // explicit monic modulus

    uint32_t p() const { return p_; }
    int k() const { return k_; }
    const std::vector<uint32_t>& modulus() const { return mod_; }
    uint64_t size() const { return size_; }

    El zero() const { return El(static_cast<size_t>(k_), 0); }
    El one() const;
    El from_int(long v) const;  // image of a rational integer
    El gen() const;             // class of x
    bool is_zero(const El& a) const;

    El add(const El& a, const El& b) const;
    El sub(const El& a, const El& b) const;
    El neg(const El& a) const;
    El mul(const El& a, const El& b) const;
    El pow(const El& a, uint64_t e) const;
    El inv(const El& a) const;

    uint64_t index(const El& a) const;  // base-p digits
    El decode(uint64_t idx) const;

    // Evaluate an integer polynomial at a field element.
    El eval_zpoly(const ZPoly& f, const El& x) const;

    // Lexicographically smallest monic irreducible of degree k over F_p
    // (by the base-p integer encoding of the non-leading coefficients).
    static std::vector<uint32_t> canonical_modulus(uint32_t p, int k);

private:
    uint32_t p_;
    int k_;
    std::vector<uint32_t> mod_;  // length k+1, monic
    uint64_t size_;
};

// --- polynomial helpers over F_p (dense vectors, ascending, trimmed) ---

std::vector<uint32_t> zpoly_mod_p(const ZPoly& f, uint32_t p);
std::vector<uint32_t> pmod_mul(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b, uint32_t p);
std::vector<uint32_t> pmod_rem(std::vector<uint32_t> a, const std::vector<uint32_t>& b, uint32_t p);
std::vector<uint32_t> pmod_gcd(std::vector<uint32_t> a, std::vector<uint32_t> b, uint32_t p);
std::vector<uint32_t> pmod_powmod(const std::vector<uint32_t>& a, const Int& e, const std::vector<uint32_t>& m, uint32_t p);
bool pmod_is_irreducible(const std::vector<uint32_t>& f, uint32_t p);

// Roots of f mod p when f splits into deg(f) distinct linear factors;
// totally_split reports whether it does (roots is empty otherwise).
// Roots are returned sorted ascending.
std::vector<long> distinct_linear_roots_mod_p(const ZPoly& f, long p, bool& totally_split);

}  // namespace rrp

#endif
