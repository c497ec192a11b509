#include "rrp/freypoly.hpp"

#include <sstream>
#include <stdexcept>

namespace rrp {

namespace {

bool is_odd_prime(int r) {
    if (r < 3 || r % 2 == 0) return false;
    Int n(r);
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

std::string coeff_mismatch(const ZPoly& lhs, const ZPoly& rhs) {
    long top = std::max(lhs.degree(), rhs.degree());
    for (long k = 0; k <= top; ++k)
        if (lhs.coeff(k) != rhs.coeff(k)) {
            std::ostringstream os;
            os << "coefficient of x^" << k << ": " << lhs.coeff(k).get_str() << " != " << rhs.coeff(k).get_str();
            return os.str();
        }
    return "";
}

}  // namespace

GaussPoly operator+(const GaussPoly& a, const GaussPoly& b) { return {a.re + b.re, a.im + b.im}; }
GaussPoly operator-(const GaussPoly& a, const GaussPoly& b) { return {a.re - b.re, a.im - b.im}; }

GaussPoly operator*(const GaussPoly& a, const GaussPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussPoly substitute_ix(const ZPoly& f, bool negative) {
    // coefficient of x^k picks up i^k (or (-i)^k)
    std::vector<Int> re(f.c.size(), Int(0)), im(f.c.size(), Int(0));
    for (size_t k = 0; k < f.c.size(); ++k) {
        int e = static_cast<int>(k % 4);
        if (negative) e = (4 - e) % 4;
        switch (e) {
            case 0: re[k] = f.c[k]; break;
            case 1: im[k] = f.c[k]; break;
            case 2: re[k] = -f.c[k]; break;
            case 3: im[k] = -f.c[k]; break;
        }
    }
    return {ZPoly(std::move(re)), ZPoly(std::move(im))};
}

std::vector<Int> chebyshev_coeffs(int r) {
    if (!is_odd_prime(r)) throw std::invalid_argument("chebyshev_coeffs: r must be an odd prime");
    int g = (r - 1) / 2;
    std::vector<Int> c(static_cast<size_t>(g) + 1);
    for (int k = 0; k <= g; ++k) {
        Int t = Int(r) * binom(static_cast<unsigned long>(r - k), static_cast<unsigned long>(k));
        Int out;
        Int den(r - k);
        mpz_divexact(out.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
        c[static_cast<size_t>(k)] = out;
    }
    return c;
}

ZPoly big_H(int r, const Int& a, const Int& b) {
    std::vector<Int> ck = chebyshev_coeffs(r);
    Int ab = a * b;
    std::vector<Int> c(static_cast<size_t>(r) + 1, Int(0));
    Int abk = 1;
    for (size_t k = 0; k < ck.size(); ++k) {
        c[static_cast<size_t>(r) - 2 * k] = ck[k] * abk;
        abk *= ab;
    }
    return ZPoly(std::move(c));
}

Int phi_r(int r, const Int& a, const Int& b) {
    Int s = a + b;
    if (s == 0) throw std::invalid_argument("phi_r: a + b = 0");
    Int num = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
    Int out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), s.get_mpz_t());
    return out;
}

Int shifted_chebyshev_part(int r, long j) {
    std::vector<Int> ck = chebyshev_coeffs(r);
    Int acc = 0;
    for (long k = 0; k < static_cast<long>(ck.size()); ++k) {
        long deg = r - 2 * k;  // exponent r - 2k
        if (deg < j) continue;
        Int term = binom(static_cast<unsigned long>(deg), static_cast<unsigned long>(j)) * ck[static_cast<size_t>(k)];
        term *= ipow(Int(2), static_cast<unsigned long>(deg - j));
        if (k & 1) acc -= term;
        else acc += term;
    }
    return acc;
}

bool IdentityReport::all_pass() const {
    for (const auto& ch : checks)
        if (!ch.pass) return false;
    return true;
}

IdentityReport identity_suite(int r) {
    if (!is_odd_prime(r)) throw std::invalid_argument("identity_suite: r must be an odd prime");
    IdentityReport rep;
    rep.r = r;
    int g = (r - 1) / 2;
    CycloField K(r);
    const ZPoly& h = K.h();
    std::vector<Int> ck = chebyshev_coeffs(r);

    auto push = [&](const std::string& name, const std::string& fail_detail) {
        IdentityCheck c;
        c.name = name;
        c.pass = fail_detail.empty();
        c.detail = fail_detail;
        rep.checks.push_back(std::move(c));
    };

    // x h(x^2+2) written out through the closed-form coefficients
    ZPoly xsq2 = ZPoly::from_longs({2, 0, 1});
    ZPoly H1 = ZPoly::from_longs({0, 1}) * compose(h, xsq2);
    {
        ZPoly rhs = big_H(r, 1, 1);  // ab = 1 specializes z = 1
        push("chebyshev-composition", coeff_mismatch(H1, rhs));
    }

    // d/dx [x h(x^2+2)] = (-1)^g r h(-(x^2+2))
    {
        ZPoly lhs = derivative(H1);
        ZPoly rhs = Int(r) * compose(h, ZPoly::from_longs({-2, 0, -1}));
        if (g & 1) rhs = -rhs;
        push("derivative-integral", coeff_mismatch(lhs, rhs));
    }

    // d/dx H(x,1) = r h(ix) h(-ix) over Z[i]
    {
        GaussPoly lhs{derivative(H1), ZPoly()};
        GaussPoly rhs = substitute_ix(h, false) * substitute_ix(h, true);
        rhs.re = Int(r) * rhs.re;
        rhs.im = Int(r) * rhs.im;
        std::string d = coeff_mismatch(lhs.re, rhs.re);
        if (d.empty()) d = coeff_mismatch(lhs.im, rhs.im);
        if (!d.empty()) d = "gaussian part: " + d;
        push("derivative-gaussian", d);
    }

    // evaluation at x = ±i w_j in K(i): H(i w_j, 1) = 2 i^r, H(-i w_j, 1) = -2 i^r
    {
        std::string fail;
        // elements of K(i) as pairs (re, im) of KElem
        auto kimul = [&](std::pair<KElem, KElem> A, std::pair<KElem, KElem> B) {
            return std::make_pair(K.sub(K.mul(A.first, B.first), K.mul(A.second, B.second)),
                                  K.add(K.mul(A.first, B.second), K.mul(A.second, B.first)));
        };
        // i^r = i or -i depending on r mod 4 (r odd)
        int ir_sign = (r % 4 == 1) ? 1 : -1;
        for (int j = 0; j <= g && fail.empty(); ++j) {
            KElem wj = (j == 0) ? K.from_rat(Rat(2)) : K.galois_apply(j, K.gen());
            for (int s = +1; s >= -1 && fail.empty(); s -= 2) {
                // x = s*i*w_j
                std::pair<KElem, KElem> x{K.zero(), (s > 0) ? wj : K.neg(wj)};
                std::pair<KElem, KElem> acc{K.zero(), K.zero()};
                for (long d = static_cast<long>(H1.c.size()) - 1; d >= 0; --d) {
                    acc = kimul(acc, x);
                    acc.first = K.add(acc.first, K.from_rat(Rat(H1.c[static_cast<size_t>(d)])));
                }
                // expected: s * 2 i^r = (0, s*2*ir_sign)
                KElem want_im = K.from_rat(Rat(2 * s * ir_sign));
                if (!(acc.first == K.zero() && acc.second == want_im)) {
                    std::ostringstream os;
                    os << "H(" << (s > 0 ? "+" : "-") << "i*w_" << j << ") differs from "
                       << (s > 0 ? "+" : "-") << "2 i^r";
                    fail = os.str();
                }
            }
        }
        push("evaluation", fail);
    }

    // (X^(r+1) - X^(r-1)) h(X^2 + X^-2) = X^(2r) - 1 as Laurent polynomials
    {
        ZLaurent x2 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), 2);
        ZLaurent xm2 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), -2);
        ZLaurent arg = x2 + xm2;
        ZLaurent hcomp = laurent_compose(h, arg);
        ZLaurent pref = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), r + 1) -
                        lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), r - 1);
        ZLaurent lhs = pref * hcomp;
        ZLaurent rhs = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), 2 * r) -
                       ZLaurent::from_poly(ZPoly::from_longs({1}));
        push("cyclotomic-product", lhs == rhs ? "" : "laurent coefficients differ");
    }

    // X^r [ (X - 1/X) h((X-1/X)^2 + 2) + s ] = X^(2r) + s X^r - 1 in Z[s][X, 1/X];
    // coefficients are linear in s, so the constant and s parts are compared
    // separately as Laurent polynomials over Z
    {
        ZLaurent x1 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), 1);
        ZLaurent xm1 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), -1);
        ZLaurent u = x1 - xm1;
        ZLaurent arg = u * u + ZLaurent::from_poly(ZPoly::from_longs({2}));
        ZLaurent lhs0 = lshift(u * laurent_compose(h, arg), r);
        ZLaurent lhs1 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), r);  // X^r * s
        ZLaurent rhs0 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), 2 * r) -
                        ZLaurent::from_poly(ZPoly::from_longs({1}));
        ZLaurent rhs1 = lshift(ZLaurent::from_poly(ZPoly::from_longs({1})), r);  // s X^r
        push("quotient-laurent", (lhs0 == rhs0 && lhs1 == rhs1) ? "" : "laurent coefficients differ");
    }

    // c_0 = 1, r | c_k for k > 0, c_g = r
    {
        std::string fail;
        if (ck[0] != 1) fail = "c_0 != 1";
        for (size_t k = 1; k < ck.size() && fail.empty(); ++k)
            if (ck[k] % r != 0) {
                std::ostringstream os;
                os << "r does not divide c_" << k;
                fail = os.str();
            }
        if (fail.empty() && ck.back() != r) fail = "c_(r-1)/2 != r";
        push("eisenstein", fail);
    }

    return rep;
}

Rat disc_fminus(int r, const Rat& s) {
    if (!is_odd_prime(r)) throw std::invalid_argument("disc_fminus: r must be an odd prime");
    int g = (r - 1) / 2;
    Rat out = Rat(ipow(Int(r), static_cast<unsigned long>(r))) * qpow(s * s + 4, g);
    return (g & 1) ? -out : out;
}

DiscFminusShape disc_fminus_symbolic(int r) {
    if (!is_odd_prime(r)) throw std::invalid_argument("disc_fminus_symbolic: r must be an odd prime");
    int g = (r - 1) / 2;
    return DiscFminusShape{(g & 1) ? -1 : 1, ipow(Int(r), static_cast<unsigned long>(r)), g};
}

}  // namespace rrp
