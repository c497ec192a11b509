#ifndef RRP_CYCLOFIELD_HPP
#define RRP_CYCLOFIELD_HPP

#include <map>
#include <string>
#include <vector>

#include "rrp/intpoly.hpp"

namespace rrp {

// Element of K = Q(zeta_r)^+ in the power basis 1, w, ..., w^(g-1) of
// w = zeta_r + zeta_r^(-1); coordinates are exact rationals.
struct KElem {
    std::vector<Rat> c;

    bool operator==(const KElem& o) const { return c == o.c; }
    bool operator!=(const KElem& o) const { return c != o.c; }
    bool is_integral() const;
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational()
    QPoly poly() const { return QPoly(c); }
};

// Splitting data of a rational prime q in K.  Factors of h mod q are the
// canonical prime labels, sorted lexicographically by coefficient vector.
struct PrimeSplitting {
    long q = 0;
    int f = 1;        // residue degree
    int n_primes = 1; // g/f (1 for q = r)
    bool ramified = false;
    std::vector<std::vector<long>> factors;     // monic deg-f polys mod q, ascending coeffs
    std::vector<std::vector<int>> sigma_label;  // sigma_label[j-1][i] = label of sigma_j(q_i)
};

constexpr int RAMIFIED_LABEL = -1;

class CycloField {
public:
    explicit CycloField(int r);

    int r() const { return r_; }
    int g() const { return g_; }
    const ZPoly& h() const { return h_; }

    // h(x) = prod_j (x - w_j) by exact expansion in Z[zeta_r].
    static ZPoly minimal_poly(int r);

    KElem zero() const;
    KElem one() const;
    KElem from_rat(const Rat& x) const;
    KElem gen() const;  // w
    KElem from_poly(const QPoly& p) const;  // reduce mod h
    KElem from_coeffs(const std::vector<Rat>& c) const;

    KElem add(const KElem& a, const KElem& b) const;
    KElem sub(const KElem& a, const KElem& b) const;
    KElem mul(const KElem& a, const KElem& b) const;
    KElem neg(const KElem& a) const;
    KElem mul_rat(const Rat& s, const KElem& a) const;
    KElem pow(const KElem& a, unsigned long e) const;

    // Group (Z/rZ)*/{±1} indexed by representatives 1..g.
    int galois_mul(int j, int k) const;
    int galois_inverse(int j) const;
    // sigma_j(u), realized through w -> D_j(w) (Dickson, parameter 1).
    KElem galois_apply(int j, const KElem& u) const;
    const ZPoly& dickson(int j) const;  // D_j(x) mod h

    Rat norm(const KElem& u) const;   // resultant route
    Rat trace(const KElem& u) const;  // power-sum route
    Rat norm_by_product(const KElem& u) const;  // oracle: prod_j sigma_j(u)

    PrimeSplitting split_prime(long q) const;

    // Residue of u at the labeled prime: coefficient vector of length f over
    // F_q (the image of u in F_q[x]/(factor)); for RAMIFIED_LABEL (q = r) a
    // single coefficient, u evaluated at w -> 2 mod r.
    std::vector<long> reduce_mod_prime(const KElem& u, const PrimeSplitting& s, int label) const;

    // Residue degree of q in K (order of q in (Z/rZ)*/{±1}); q != r.
    int residue_degree(long q) const;

private:
    int r_, g_;
    ZPoly h_;
    QPoly hq_;
    std::vector<ZPoly> dickson_;   // index j-1, j = 1..g
    std::vector<Rat> powtrace_;    // trace(w^k), k = 0..g-1
};

}  // namespace rrp

#endif
