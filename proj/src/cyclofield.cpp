#include "rrp/cyclofield.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rrp/errors.hpp"
#include "rrp/finitefield.hpp"

namespace rrp {

namespace {

bool is_odd_prime(int r) {
    if (r < 3 || r % 2 == 0) return false;
    Int n(r);
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

// Element of Z[zeta_r]: coefficient vector of length r for zeta^0..zeta^(r-1),
// taken modulo x^r - 1 and normalized to have top coefficient 0 (the kernel of
// Z[x]/(x^r-1) -> Z[zeta_r] consists of the integer multiples of 1+x+...+x^(r-1)).
struct Cyc {
    std::vector<Int> v;
};

Cyc cyc_zero(int r) { return Cyc{std::vector<Int>(static_cast<size_t>(r))}; }

void cyc_normalize(Cyc& a) {
    Int top = a.v.back();
    if (top == 0) return;
    for (Int& x : a.v) x -= top;
}

Cyc cyc_add(const Cyc& a, const Cyc& b) {
    Cyc out = a;
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
    cyc_normalize(out);
    return out;
}

Cyc cyc_mul(const Cyc& a, const Cyc& b, int r) {
    Cyc out = cyc_zero(r);
    for (int i = 0; i < r; ++i) {
        if (a.v[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < r; ++j) {
            int k = i + j;
            if (k >= r) k -= r;
            out.v[static_cast<size_t>(k)] += a.v[static_cast<size_t>(i)] * b.v[static_cast<size_t>(j)];
        }
    }
    cyc_normalize(out);
    return out;
}

// remainder of an integer polynomial by a monic integer polynomial
ZPoly zmod_monic(const ZPoly& a, const ZPoly& m) {
    std::vector<Int> r = a.c;
    long dm = m.degree();
    for (long i = static_cast<long>(r.size()) - 1; i >= dm; --i) {
        Int t = r[static_cast<size_t>(i)];
        if (t == 0) continue;
        for (long j = 0; j <= dm; ++j) r[static_cast<size_t>(i - dm + j)] -= t * m.c[static_cast<size_t>(j)];
    }
    r.resize(static_cast<size_t>(dm));
    return ZPoly(std::move(r));
}

}  // namespace

bool KElem::is_integral() const {
    for (const Rat& x : c)
        if (x.get_den() != 1) return false;
    return true;
}

bool KElem::is_rational() const {
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) return false;
    return true;
}

Rat KElem::rational_value() const {
    if (!is_rational()) throw std::domain_error("KElem: not a rational element");
    return c.empty() ? Rat(0) : c[0];
}

ZPoly CycloField::minimal_poly(int r) {
    if (!is_odd_prime(r)) throw std::invalid_argument("minimal_poly: r must be an odd prime >= 3");
    int g = (r - 1) / 2;
    // expand prod_{j=1}^{g} (x - w_j) with coefficients in Z[zeta_r]
    std::vector<Cyc> coeff;  // ascending in x
    coeff.push_back(cyc_zero(r));
    coeff[0].v[0] = 1;  // constant polynomial 1
    for (int j = 1; j <= g; ++j) {
        Cyc wj = cyc_zero(r);
        wj.v[static_cast<size_t>(j)] += 1;
        wj.v[static_cast<size_t>(r - j)] += 1;
        cyc_normalize(wj);
        // multiply the polynomial by (x - w_j)
        std::vector<Cyc> next(coeff.size() + 1, cyc_zero(r));
        for (size_t i = 0; i < coeff.size(); ++i) {
            next[i + 1] = cyc_add(next[i + 1], coeff[i]);
            Cyc t = cyc_mul(coeff[i], wj, r);
            for (Int& x : t.v) x = -x;
            cyc_normalize(t);
            next[i] = cyc_add(next[i], t);
        }
        coeff = std::move(next);
    }
    std::vector<Int> out(coeff.size());
    for (size_t i = 0; i < coeff.size(); ++i) {
        // each coefficient must be a rational integer: (n, 0, ..., 0)
        for (size_t k = 1; k < coeff[i].v.size(); ++k)
            if (coeff[i].v[k] != 0)
                throw certificate_error("minimal_poly: expansion produced a non-rational coefficient");
        out[i] = coeff[i].v[0];
    }
    return ZPoly(std::move(out));
}

CycloField::CycloField(int r) : r_(r), g_((r - 1) / 2) {
    if (!is_odd_prime(r)) throw std::invalid_argument("CycloField: r must be an odd prime >= 3");
    h_ = minimal_poly(r);
    hq_ = QPoly::from_z(h_);

    // Dickson polynomials D_j with D_j(y + 1/y) = y^j + y^-j, reduced mod h.
    dickson_.resize(static_cast<size_t>(g_));
    ZPoly d0 = ZPoly::from_longs({2});
    ZPoly d1 = ZPoly::from_longs({0, 1});
    dickson_[0] = zmod_monic(d1, h_);
    ZPoly prev = d0, cur = d1;
    for (int j = 2; j <= g_; ++j) {
        ZPoly next = zmod_monic(ZPoly::from_longs({0, 1}) * cur - prev, h_);
        dickson_[static_cast<size_t>(j - 1)] = next;
        prev = std::move(cur);
        cur = std::move(next);
    }

    // power sums of the roots of h via Newton's identities
    powtrace_.assign(static_cast<size_t>(g_), Rat(0));
    powtrace_[0] = g_;
    for (int k = 1; k < g_; ++k) {
        // p_k + sum_{i=1}^{k-1} a_{g-i} p_{k-i} + k a_{g-k} = 0
        Rat s = Rat(static_cast<long>(k)) * Rat(h_.coeff(g_ - k));
        for (int i = 1; i < k; ++i) s += Rat(h_.coeff(g_ - i)) * powtrace_[static_cast<size_t>(k - i)];
        powtrace_[static_cast<size_t>(k)] = -s;
    }
}

KElem CycloField::zero() const { return KElem{std::vector<Rat>(static_cast<size_t>(g_))}; }

KElem CycloField::one() const { return from_rat(Rat(1)); }

KElem CycloField::from_rat(const Rat& x) const {
    KElem a = zero();
    a.c[0] = x;
    return a;
}

KElem CycloField::gen() const {
    KElem a = zero();
    if (g_ == 1) {
        // w is rational when r = 3: h = x + 1 gives w = -1
        a.c[0] = -h_.coeff(0);
    } else {
        a.c[1] = 1;
    }
    return a;
}

KElem CycloField::from_poly(const QPoly& p) const {
    QPoly red = mod_monic(p, hq_);
    std::vector<Rat> c(static_cast<size_t>(g_));
    for (int i = 0; i < g_; ++i) c[static_cast<size_t>(i)] = red.coeff(i);
    return KElem{std::move(c)};
}

KElem CycloField::from_coeffs(const std::vector<Rat>& c) const {
    if (static_cast<int>(c.size()) != g_) throw std::invalid_argument("from_coeffs: wrong length");
    return KElem{c};
}

KElem CycloField::add(const KElem& a, const KElem& b) const {
    KElem out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
    return out;
}

KElem CycloField::sub(const KElem& a, const KElem& b) const {
    KElem out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] -= b.c[i];
    return out;
}

KElem CycloField::neg(const KElem& a) const {
    KElem out = a;
    for (Rat& x : out.c) x = -x;
    return out;
}

KElem CycloField::mul_rat(const Rat& s, const KElem& a) const {
    KElem out = a;
    for (Rat& x : out.c) x *= s;
    return out;
}

KElem CycloField::mul(const KElem& a, const KElem& b) const {
    return from_poly(a.poly() * b.poly());
}

KElem CycloField::pow(const KElem& a, unsigned long e) const {
    KElem result = one();
    KElem base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

int CycloField::galois_mul(int j, int k) const {
    long m = (static_cast<long>(j) * k) % r_;
    if (m > g_) m = r_ - m;
    return static_cast<int>(m);
}

int CycloField::galois_inverse(int j) const {
    for (int k = 1; k <= g_; ++k)
        if (galois_mul(j, k) == 1) return k;
    throw std::logic_error("galois_inverse: no inverse found");
}

const ZPoly& CycloField::dickson(int j) const {
    if (j < 1 || j > g_) throw std::invalid_argument("dickson: index out of range");
    return dickson_[static_cast<size_t>(j - 1)];
}

KElem CycloField::galois_apply(int j, const KElem& u) const {
    if (j < 1 || j > g_) throw std::invalid_argument("galois_apply: index must be in 1..g");
    if (j == 1) return u;
    QPoly wj = QPoly::from_z(dickson_[static_cast<size_t>(j - 1)]);
    QPoly out;
    for (size_t i = u.c.size(); i-- > 0;) {
        out = mod_monic(out * wj, hq_);
        out = out + QPoly({std::vector<Rat>{u.c[i]}});
    }
    return from_poly(out);
}

Rat CycloField::norm(const KElem& u) const {
    QPoly p = u.poly();
    if (p.is_zero()) return Rat(0);
    return resultant_q(h_, p);
}

Rat CycloField::norm_by_product(const KElem& u) const {
    KElem acc = one();
    for (int j = 1; j <= g_; ++j) acc = mul(acc, galois_apply(j, u));
    if (!acc.is_rational()) throw certificate_error("norm_by_product: conjugate product is not rational");
    return acc.rational_value();
}

Rat CycloField::trace(const KElem& u) const {
    Rat s = 0;
    for (size_t k = 0; k < u.c.size(); ++k) s += u.c[k] * powtrace_[k];
    return s;
}

int CycloField::residue_degree(long q) const {
    if (q % r_ == 0) throw std::invalid_argument("residue_degree: q = r is ramified");
    long qm = q % r_;
    if (qm < 0) qm += r_;
    long acc = 1;
    for (int d = 1; d <= g_; ++d) {
        acc = (acc * qm) % r_;
        if (acc == 1 || acc == r_ - 1) return d;
    }
    throw std::logic_error("residue_degree: order computation failed");
}

PrimeSplitting CycloField::split_prime(long q) const {
    Int qz(q);
    if (q < 2 || mpz_probab_prime_p(qz.get_mpz_t(), 30) == 0)
        throw std::invalid_argument("split_prime: q must be prime");

    PrimeSplitting s;
    s.q = q;
    if (q == r_) {
        s.ramified = true;
        s.f = 1;
        s.n_primes = 1;
        s.factors = {{static_cast<long>((r_ - 2) % r_), 1}};  // x - 2 mod r
        s.sigma_label.assign(static_cast<size_t>(g_), std::vector<int>{0});
        return s;
    }

    // order of q in (Z/r)* and in the quotient by ±1
    long qm = q % r_;
    int full_ord = 1;
    {
        long acc = qm % r_;
        while (acc != 1) {
            acc = (acc * qm) % r_;
            ++full_ord;
        }
    }
    s.f = residue_degree(q);
    s.n_primes = g_ / s.f;

    // roots of h mod q are xi^c + xi^{-c} for a primitive r-th root of unity xi
    FqField F(static_cast<uint32_t>(q), full_ord);
    uint64_t exp = (F.size() - 1) / static_cast<uint64_t>(r_);
    FqField::El xi;
    bool found = false;
    for (uint64_t idx = 2; idx < F.size(); ++idx) {
        FqField::El lam = F.decode(idx);
        FqField::El cand = F.pow(lam, exp);
        if (!(cand == F.one())) {
            xi = cand;
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("split_prime: no primitive r-th root of unity found");

    std::vector<FqField::El> xpow(static_cast<size_t>(r_));
    xpow[0] = F.one();
    for (int i = 1; i < r_; ++i) xpow[static_cast<size_t>(i)] = F.mul(xpow[static_cast<size_t>(i - 1)], xi);

    auto theta = [&](int c) { return F.add(xpow[static_cast<size_t>(c)], xpow[static_cast<size_t>(r_ - c)]); };

    // Frobenius orbits on classes {±c}, c = 1..g
    auto rep = [&](long c) {
        long m = c % r_;
        if (m < 0) m += r_;
        return static_cast<int>(m > g_ ? r_ - m : m);
    };
    std::vector<int> cls2fac(static_cast<size_t>(g_ + 1), -1);
    struct Fac {
        std::vector<long> coeffs;
        std::vector<int> classes;
    };
    std::vector<Fac> facs;
    for (int c = 1; c <= g_; ++c) {
        if (cls2fac[static_cast<size_t>(c)] >= 0) continue;
        std::vector<int> orbit;
        int cur = c;
        do {
            orbit.push_back(cur);
            cls2fac[static_cast<size_t>(cur)] = static_cast<int>(facs.size());
            cur = rep(static_cast<long>(cur) * qm);
        } while (cur != c);
        if (static_cast<int>(orbit.size()) != s.f)
            throw std::logic_error("split_prime: Frobenius orbit size mismatch");
        // factor = prod_{c in orbit} (x - theta_c), computed over F
        std::vector<FqField::El> poly{F.one()};
        for (int cc : orbit) {
            FqField::El t = theta(cc);
            std::vector<FqField::El> next(poly.size() + 1, F.zero());
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] = F.add(next[i + 1], poly[i]);
                next[i] = F.sub(next[i], F.mul(poly[i], t));
            }
            poly = std::move(next);
        }
        Fac fac;
        fac.classes = orbit;
        for (const auto& cf : poly) {
            for (size_t d = 1; d < cf.size(); ++d)
                if (cf[d] != 0) throw certificate_error("split_prime: factor coefficient not in the prime field");
            fac.coeffs.push_back(static_cast<long>(cf[0]));
        }
        facs.push_back(std::move(fac));
    }

    // canonical order: lexicographic on the coefficient vector
    std::vector<int> order(facs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return facs[static_cast<size_t>(a)].coeffs < facs[static_cast<size_t>(b)].coeffs; });
    std::vector<int> old2new(facs.size());
    for (size_t i = 0; i < order.size(); ++i) old2new[static_cast<size_t>(order[i])] = static_cast<int>(i);

    s.factors.resize(facs.size());
    std::vector<int> repclass(facs.size());
    for (size_t i = 0; i < order.size(); ++i) {
        s.factors[i] = facs[static_cast<size_t>(order[i])].coeffs;
        repclass[i] = facs[static_cast<size_t>(order[i])].classes.front();
    }
    for (int c = 1; c <= g_; ++c) cls2fac[static_cast<size_t>(c)] = old2new[static_cast<size_t>(cls2fac[static_cast<size_t>(c)])];

    // induced label permutation: sigma_j sends the prime of class c to the
    // prime of class c * j' with j' the inverse of j in (Z/r)*/{±1}
    s.sigma_label.assign(static_cast<size_t>(g_), std::vector<int>(facs.size()));
    for (int j = 1; j <= g_; ++j) {
        int jinv = galois_inverse(j);
        for (size_t i = 0; i < facs.size(); ++i)
            s.sigma_label[static_cast<size_t>(j - 1)][i] = cls2fac[static_cast<size_t>(rep(static_cast<long>(repclass[i]) * jinv))];
    }
    return s;
}

std::vector<long> CycloField::reduce_mod_prime(const KElem& u, const PrimeSplitting& s, int label) const {
    long q = s.q;
    if (s.ramified || label == RAMIFIED_LABEL) {
        if (!s.ramified || (label != RAMIFIED_LABEL && label != 0))
            throw std::invalid_argument("reduce_mod_prime: label inconsistent with splitting");
        // w -> 2 mod r
        long acc = 0;
        for (size_t i = u.c.size(); i-- > 0;) {
            const Rat& x = u.c[i];
            Int den = x.get_den() % q;
            if (den == 0) throw unsupported_error("reduce_mod_prime: element not integral at the prime");
            Int num = x.get_num() % q;
            long numl = num.get_si();
            if (numl < 0) numl += q;
            long denl = den.get_si();
            if (denl < 0) denl += q;
            // denominator inverse mod q
            long dinv = 1, base = denl, e = q - 2;
            while (e) {
                if (e & 1) dinv = (dinv * base) % q;
                base = (base * base) % q;
                e >>= 1;
            }
            acc = (acc * 2 + numl * dinv) % q;
        }
        return {acc};
    }
    if (label < 0 || label >= static_cast<int>(s.factors.size()))
        throw std::invalid_argument("reduce_mod_prime: label out of range");
    std::vector<uint32_t> mod(s.factors[static_cast<size_t>(label)].size());
    for (size_t i = 0; i < mod.size(); ++i) mod[i] = static_cast<uint32_t>(s.factors[static_cast<size_t>(label)][i]);
    FqField F(static_cast<uint32_t>(q), mod);
    FqField::El x = F.gen();
    FqField::El out = F.zero();
    for (size_t i = u.c.size(); i-- > 0;) {
        out = F.mul(out, x);
        const Rat& cf = u.c[i];
        Int den = cf.get_den() % q;
        if (den == 0) throw unsupported_error("reduce_mod_prime: element not integral at the prime");
        long denl = den.get_si();
        if (denl < 0) denl += q;
        Int num = cf.get_num() % q;
        long numl = num.get_si();
        if (numl < 0) numl += q;
        FqField::El c = F.mul(F.from_int(numl), F.inv(F.from_int(denl)));
        out = F.add(out, c);
    }
    std::vector<long> res(out.size());
    for (size_t i = 0; i < out.size(); ++i) res[i] = static_cast<long>(out[i]);
    return res;
}

}  // namespace rrp
