#include "rrp/localdata.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rrp/errors.hpp"
#include "rrp/freypoly.hpp"

namespace rrp {

namespace {

Int mod_nonneg(const Int& a, long m) {
    Int out = a % m;
    if (out < 0) out += m;
    return out;
}

bool parity_holds(const Int& a, const Int& b) {
    return mod_nonneg(a, 2) == 0 && mod_nonneg(b, 4) == 1;
}

void validate_pair(int r, const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw std::invalid_argument("classify: gcd(a,b) != 1");
    if (ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r)) == 0)
        throw std::invalid_argument("classify: a^r + b^r = 0");
}

std::vector<long> prime_factors(Int n) {
    std::vector<long> out;
    n = abs(n);
    if (n <= 1) return out;
    for (long p = 2; Int(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) {
        if (!n.fits_slong_p()) throw std::overflow_error("prime_factors: factor too large");
        out.push_back(n.get_si());
    }
    return out;
}

}  // namespace

const char* to_string(RedType t) {
    switch (t) {
        case RedType::good: return "good";
        case RedType::multiplicative: return "multiplicative";
        case RedType::additive: return "additive";
    }
    return "?";
}

const char* to_string(InertialType t) {
    switch (t) {
        case InertialType::unramified: return "unramified";
        case InertialType::steinberg: return "steinberg";
        case InertialType::principal_series: return "principal-series";
        case InertialType::supercuspidal: return "supercuspidal";
        case InertialType::twist_of_steinberg: return "twist-of-steinberg";
        case InertialType::not_applicable: return "not-applicable";
    }
    return "?";
}

ReductionReport classify_prime(const CycloField& K, const Int& a, const Int& b, long q) {
    int r = K.r();
    validate_pair(r, a, b);
    Int qz(q);
    if (q < 2 || mpz_probab_prime_p(qz.get_mpz_t(), 30) == 0)
        throw std::invalid_argument("classify: q must be prime");
    ReductionReport rep;
    rep.q = q;
    Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));

    if (q == 2) {
        if (!parity_holds(a, b))
            throw unsupported_error("unsupported-parity: classification at 2 needs a = 0 mod 2, b = 1 mod 4");
        rep.type = RedType::additive;
        rep.conductor_exponent = 2;
        rep.inertia_order = r;
        int f2 = K.residue_degree(2);
        Int card = ipow(Int(2), static_cast<unsigned long>(f2)) - 1;
        rep.inertial = (card % r == 0) ? InertialType::principal_series : InertialType::supercuspidal;
        return rep;
    }
    if (q == r) {
        rep.type = RedType::additive;
        rep.conductor_exponent = 2;
        if (mod_nonneg(a + b, r) != 0) {
            rep.inertia_order = 4;
            rep.inertial = (r % 4 == 1) ? InertialType::principal_series : InertialType::supercuspidal;
        } else {
            rep.inertial = InertialType::twist_of_steinberg;
        }
        return rep;
    }
    if (s % q == 0) {
        rep.type = RedType::multiplicative;
        rep.conductor_exponent = 1;
        rep.inertial = InertialType::steinberg;
        return rep;
    }
    rep.type = RedType::good;
    rep.conductor_exponent = 0;
    rep.inertia_order = 1;
    rep.inertial = InertialType::unramified;
    return rep;
}

SerreLevel serre_level(int r, const Int& d, bool r_divides_a_plus_b) {
    if (d <= 0) throw std::invalid_argument("serre_level: d must be positive");
    // d must be free of r-th powers
    for (long p : prime_factors(d)) {
        Int rest = d;
        int v = 0;
        while (rest % p == 0) {
            rest /= p;
            ++v;
        }
        if (v >= r) throw std::invalid_argument("serre_level: d is not r-th-power-free");
    }
    SerreLevel lvl;
    lvl.er = r_divides_a_plus_b ? 1 : 2;
    for (long p : prime_factors(d))
        if (p != 2 && p != r) lvl.nd_primes.push_back(p);
    return lvl;
}

bool CongruenceReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

CongruenceReport semistable_congruences(int r, const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw std::invalid_argument("semistable_congruences: gcd(a,b) != 1");
    if (mod_nonneg(a + b, r) != 0)
        throw std::invalid_argument("semistable_congruences: requires r | a+b");

    CongruenceReport rep;
    rep.r = r;
    rep.a = a;
    rep.b = b;

    Int r2 = Int(r) * r;
    ZPoly H = big_H(r, a, b);
    ZPoly shifted = compose(H, ZPoly({std::vector<Int>{a - b, 1}}));  // H(x + (a-b))
    auto A = [&](long j) { return shifted.coeff(j); };

    auto push = [&](const std::string& name, bool ok) { rep.checks.push_back({name, ok}); };

    Int ar = ipow(a, static_cast<unsigned long>(r)), br = ipow(b, static_cast<unsigned long>(r));
    push("A0 = a^r - b^r", A(0) == ar - br);

    Int phi = phi_r(r, a, b);
    push("A1 = r*phi_r(a,b)", A(1) == Int(r) * phi);
    push("phi_r = r a^(r-1) mod r^2",
         mod_nonneg(phi - Int(r) * ipow(a, static_cast<unsigned long>(r - 1)), r2.get_si()) == 0);

    long mid = (r + 1) / 2;
    for (long j = 2; j < r; ++j) {
        Int alpha = shifted_chebyshev_part(r, j);
        std::ostringstream nm;
        if (j < mid) {
            // below the middle every odd 2s+1 in the closed product is prime to r
            nm << "alpha_" << j << " = 0 mod r^2";
            push(nm.str(), alpha % r2 == 0);
        } else if (j == mid) {
            bool ok = alpha == binom(static_cast<unsigned long>((3 * r - 1) / 2), static_cast<unsigned long>(mid)) &&
                      mod_nonneg(alpha - 2 * r, r2.get_si()) == 0;
            nm << "alpha_" << mid << " = binom((3r-1)/2,(r+1)/2) = 2r mod r^2";
            push(nm.str(), ok);
        } else {
            nm << "A_" << j << " = 0 mod r";
            push(nm.str(), A(j) % r == 0);
        }
        std::ostringstream nm2;
        nm2 << "A_" << j << " = a^(r-" << j << ")*alpha_" << j << " mod r^2";
        push(nm2.str(), (A(j) - ipow(a, static_cast<unsigned long>(r - j)) * alpha) % r2 == 0);
    }
    push("A_r = 1", A(r) == 1);
    return rep;
}

bool finiteness_check(int r, const Int& a, const Int& b, const Int& p, long q) {
    if (q == 2 || q == r || q < 2)
        throw unsupported_error("out-of-scope-prime: finiteness check needs q coprime to 2r");
    Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
    if (s == 0) throw std::invalid_argument("finiteness_check: a^r + b^r = 0");
    Int qz(q), rest;
    unsigned long v = mpz_remove(rest.get_mpz_t(), s.get_mpz_t(), qz.get_mpz_t());
    return Int(static_cast<long>(v)) % p == 0;
}

IrredReport irreducibility_report(const CycloField& K, const Int& a, const Int& b,
                                  const std::vector<KElem>& units) {
    int r = K.r(), g = K.g();
    IrredReport rep;

    int f2 = K.residue_degree(2);
    Int m2 = ipow(Int(2), static_cast<unsigned long>(f2)) - 1;
    rep.m = m2 * (r - 1);

    bool parity = parity_holds(a, b);
    bool r_div_ab = mod_nonneg(a + b, r) == 0;

    if (parity && m2 % r != 0) {
        rep.verdict = IrredVerdict::irreducible_all_odd_p;
        rep.criterion = "supercuspidal-at-2";
        return rep;
    }
    if (r % 4 != 1 && !r_div_ab) {
        rep.verdict = IrredVerdict::irreducible_all_odd_p;
        rep.criterion = "supercuspidal-at-r";
        return rep;
    }

    Int gz(g);
    bool g_odd_prime = (g % 2 == 1) && mpz_probab_prime_p(gz.get_mpz_t(), 30) != 0;
    if (parity && g_odd_prime && !units.empty()) {
        for (const auto& u : units) {
            Rat n = K.norm(u);
            if (!(n == 1 || n == -1)) throw certificate_error("invalid-unit: supplied element has norm != +-1");
        }
        rep.verdict = IrredVerdict::conditional;
        rep.criterion = "class-field-candidates";
        // candidate primes p: completely split in K and dividing
        // gcd_i |Norm(eps_i^(2ms) - 1)| for some 1 <= s <= floor(g/2)
        unsigned long m = rep.m.get_ui();
        for (int s = 1; s <= g / 2; ++s) {
            Int gcd_all = 0;
            for (const auto& u : units) {
                KElem pw = K.pow(u, 2 * m * static_cast<unsigned long>(s));
                Rat n = K.norm(K.sub(pw, K.one()));
                if (n.get_den() != 1) throw certificate_error("invalid-unit: non-integral unit power norm");
                Int v = abs(n.get_num());
                mpz_gcd(gcd_all.get_mpz_t(), gcd_all.get_mpz_t(), v.get_mpz_t());
            }
            if (gcd_all == 0) continue;
            // factor by trial division; record any large unfactored cofactor
            Int rest = gcd_all;
            for (long p = 2; Int(p) * p <= rest && p < 2000000; p += (p == 2 ? 1 : 2)) {
                if (rest % p == 0) {
                    while (rest % p == 0) rest /= p;
                    if (p != 2 && p != r) {
                        long pm = p % r;
                        if (pm == 1 || pm == r - 1) rep.candidate_primes.push_back(Int(p));
                    }
                }
            }
            if (rest > 1) {
                if (mpz_probab_prime_p(rest.get_mpz_t(), 30) != 0) {
                    Int pm = rest % r;
                    if (rest != 2 && rest != r && (pm == 1 || pm == r - 1)) rep.candidate_primes.push_back(rest);
                } else {
                    std::ostringstream os;
                    os << "unfactored cofactor " << rest.get_str() << " in the s=" << s << " gcd";
                    rep.unchecked_assumptions.push_back(os.str());
                }
            }
        }
        std::sort(rep.candidate_primes.begin(), rep.candidate_primes.end());
        rep.candidate_primes.erase(std::unique(rep.candidate_primes.begin(), rep.candidate_primes.end()),
                                   rep.candidate_primes.end());
        rep.unchecked_assumptions.push_back("UNCHECKED: r does not divide h_{2m}/h_m (ray class hypothesis)");
        rep.unchecked_assumptions.push_back("UNCHECKED: ray-class divisibility at the split primes (conclusion 3)");
        rep.unchecked_assumptions.push_back("ASSUMED: supplied units generate the free part of the unit group");
        return rep;
    }

    rep.verdict = IrredVerdict::inconclusive;
    rep.criterion = "no criterion applies";
    return rep;
}

}  // namespace rrp
