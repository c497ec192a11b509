#include "rrp/intpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rrp {

Int ipow(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

Rat qpow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (e < 0) {
        if (base == 0) throw std::domain_error("qpow: zero to negative power");
        return Rat(1) / qpow(base, -e);
    }
    Rat out;
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), static_cast<unsigned long>(e));
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), static_cast<unsigned long>(e));
    return out;  // powers of a canonical rational stay canonical
}

Int binom(unsigned long n, unsigned long k) {
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("make_rat: zero denominator");
    Rat out(num, den);
    out.canonicalize();
    return out;
}

ZPoly ZPoly::from_longs(const std::vector<long>& v) {
    std::vector<Int> c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    return ZPoly(std::move(c));
}

ZPoly ZPoly::monomial(long deg, const Int& lead) {
    if (lead == 0) return ZPoly();
    std::vector<Int> c(static_cast<size_t>(deg) + 1);
    c.back() = lead;
    return ZPoly(std::move(c));
}

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string ZPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
        const Int& a = c[static_cast<size_t>(i)];
        if (a == 0) continue;
        if (!first) os << (a > 0 ? " + " : " - ");
        else if (a < 0) os << "-";
        Int mag = abs(a);
        if (i == 0 || mag != 1) os << mag.get_str();
        if (i > 0) {
            if (mag != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.c.size()) c[i] += a.c[i];
        if (i < b.c.size()) c[i] += b.c[i];
    }
    return ZPoly(std::move(c));
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.c.size()) c[i] += a.c[i];
        if (i < b.c.size()) c[i] -= b.c[i];
    }
    return ZPoly(std::move(c));
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return ZPoly();
    std::vector<Int> c(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    }
    return ZPoly(std::move(c));
}

ZPoly operator*(const Int& s, const ZPoly& a) {
    std::vector<Int> c(a.c.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = s * a.c[i];
    return ZPoly(std::move(c));
}

ZPoly operator-(const ZPoly& a) { return Int(-1) * a; }

ZPoly zp_pow(const ZPoly& a, unsigned long e) {
    ZPoly out = ZPoly::from_longs({1});
    ZPoly base = a;
    while (e) {
        if (e & 1) out = out * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return out;
}

ZPoly derivative(const ZPoly& a) {
    if (a.degree() <= 0) return ZPoly();
    std::vector<Int> c(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) c[i - 1] = Int(static_cast<long>(i)) * a.c[i];
    return ZPoly(std::move(c));
}

Int eval(const ZPoly& a, const Int& x) {
    Int out = 0;
    for (size_t i = a.c.size(); i-- > 0;) out = out * x + a.c[i];
    return out;
}

Rat eval(const ZPoly& a, const Rat& x) {
    Rat out = 0;
    for (size_t i = a.c.size(); i-- > 0;) out = out * x + Rat(a.c[i]);
    return out;
}

ZPoly compose(const ZPoly& a, const ZPoly& b) {
    ZPoly out;
    for (size_t i = a.c.size(); i-- > 0;) out = out * b + ZPoly({std::vector<Int>{a.c[i]}});
    return out;
}

Int content(const ZPoly& a) {
    Int g = 0;
    for (const Int& x : a.c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

ZPoly pseudo_rem(const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) throw std::domain_error("pseudo_rem: division by zero polynomial");
    long da = a.degree(), db = b.degree();
    if (da < db) return a;
    ZPoly r = a;
    const Int& lb = b.lc();
    long steps = da - db + 1;
    for (long k = 0; k < steps; ++k) {
        long dr = r.degree();
        if (dr < db) {
            // multiply leftover factor so the defining identity holds exactly
            r = ipow(lb, static_cast<unsigned long>(steps - k)) * r;
            return r;
        }
        Int top = r.lc();
        ZPoly shifted = ZPoly::monomial(dr - db, top) * b;
        r = lb * r - shifted;
    }
    return r;
}

Int resultant(const ZPoly& A0, const ZPoly& B0) {
    if (A0.is_zero() || B0.is_zero()) return 0;
    if (A0.degree() == 0) return ipow(A0.lc(), static_cast<unsigned long>(B0.degree()));
    if (B0.degree() == 0) return ipow(B0.lc(), static_cast<unsigned long>(A0.degree()));

    ZPoly A = A0, B = B0;
    int sign = 1;
    if (A.degree() < B.degree()) {
        std::swap(A, B);
        if ((A.degree() & 1) && (B.degree() & 1)) sign = -sign;
    }
    // Contents split off: Res(cA, B) = c^degB Res(A,B).
    Int ca = content(A), cb = content(B);
    Int acc = ipow(ca, static_cast<unsigned long>(B.degree())) *
              ipow(cb, static_cast<unsigned long>(A.degree()));
    {
        std::vector<Int> t = A.c;
        for (Int& x : t) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), ca.get_mpz_t());
        A = ZPoly(std::move(t));
        t = B.c;
        for (Int& x : t) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), cb.get_mpz_t());
        B = ZPoly(std::move(t));
    }

    // Subresultant PRS (Cohen, Alg. 3.3.7).
    Int g = 1, h = 1;
    while (true) {
        long da = A.degree(), db = B.degree();
        long delta = da - db;
        if ((da & 1) && (db & 1)) sign = -sign;
        ZPoly R = pseudo_rem(A, B);
        if (R.is_zero()) return 0;  // common factor of positive degree
        A = B;
        {
            Int den = g * ipow(h, static_cast<unsigned long>(delta));
            std::vector<Int> t = R.c;
            for (Int& x : t) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), den.get_mpz_t());
            B = ZPoly(std::move(t));
        }
        g = A.lc();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            Int num = ipow(g, static_cast<unsigned long>(delta));
            Int den = ipow(h, static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
        if (B.degree() == 0) {
            long da2 = A.degree();
            Int num = ipow(B.lc(), static_cast<unsigned long>(da2));
            Int den = ipow(h, static_cast<unsigned long>(da2 - 1));
            Int out;
            mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            return sign > 0 ? Int(acc * out) : Int(-acc * out);
        }
    }
}

Int resultant_sylvester(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    long m = a.degree(), n = b.degree();
    if (m == 0) return ipow(a.lc(), static_cast<unsigned long>(n));
    if (n == 0) return ipow(b.lc(), static_cast<unsigned long>(m));
    long N = m + n;
    std::vector<std::vector<Int>> M(static_cast<size_t>(N), std::vector<Int>(static_cast<size_t>(N), Int(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) M[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = a.c[static_cast<size_t>(m - j)];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) M[static_cast<size_t>(n + i)][static_cast<size_t>(i + j)] = b.c[static_cast<size_t>(n - j)];

    // Bareiss fraction-free elimination.
    int sign = 1;
    Int prev = 1;
    for (long k = 0; k < N - 1; ++k) {
        if (M[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            long piv = -1;
            for (long i = k + 1; i < N; ++i)
                if (M[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(M[static_cast<size_t>(k)], M[static_cast<size_t>(piv)]);
            sign = -sign;
        }
        for (long i = k + 1; i < N; ++i) {
            for (long j = k + 1; j < N; ++j) {
                Int t = M[static_cast<size_t>(i)][static_cast<size_t>(j)] * M[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                        M[static_cast<size_t>(i)][static_cast<size_t>(k)] * M[static_cast<size_t>(k)][static_cast<size_t>(j)];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] = t;
            }
            M[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
        }
        prev = M[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    Int det = M[static_cast<size_t>(N - 1)][static_cast<size_t>(N - 1)];
    return sign > 0 ? det : Int(-det);
}

Int discriminant(const ZPoly& f) {
    long n = f.degree();
    if (n < 1) throw std::domain_error("discriminant: degree must be >= 1");
    if (n == 1) return 1;
    Int res = resultant(f, derivative(f));
    Int out;
    mpz_divexact(out.get_mpz_t(), res.get_mpz_t(), f.lc().get_mpz_t());
    long e = (n * (n - 1)) / 2;
    return (e & 1) ? Int(-out) : out;
}

QPoly QPoly::from_z(const ZPoly& a) {
    std::vector<Rat> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) c[i] = Rat(a.c[i]);
    return QPoly(std::move(c));
}

void QPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.c.size()) c[i] += a.c[i];
        if (i < b.c.size()) c[i] += b.c[i];
    }
    return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.c.size()) c[i] += a.c[i];
        if (i < b.c.size()) c[i] -= b.c[i];
    }
    return QPoly(std::move(c));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly();
    std::vector<Rat> c(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    }
    return QPoly(std::move(c));
}

QPoly operator*(const Rat& s, const QPoly& a) {
    std::vector<Rat> c(a.c.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = s * a.c[i];
    return QPoly(std::move(c));
}

Rat eval(const QPoly& a, const Rat& x) {
    Rat out = 0;
    for (size_t i = a.c.size(); i-- > 0;) out = out * x + a.c[i];
    return out;
}

void divrem_monic(const QPoly& a, const QPoly& m, QPoly& quo, QPoly& rem) {
    if (m.is_zero() || m.c.back() != 1) throw std::domain_error("divrem_monic: divisor must be monic");
    long dm = m.degree();
    std::vector<Rat> r = a.c;
    std::vector<Rat> q;
    long dr = static_cast<long>(r.size()) - 1;
    if (dr >= dm) q.assign(static_cast<size_t>(dr - dm) + 1, Rat(0));
    for (long i = dr; i >= dm; --i) {
        Rat t = r[static_cast<size_t>(i)];
        if (t == 0) continue;
        q[static_cast<size_t>(i - dm)] = t;
        for (long j = 0; j <= dm; ++j) r[static_cast<size_t>(i - dm + j)] -= t * m.c[static_cast<size_t>(j)];
    }
    quo = QPoly(std::move(q));
    r.resize(static_cast<size_t>(std::max<long>(dm, 0)));
    rem = QPoly(std::move(r));
}

QPoly mod_monic(const QPoly& a, const QPoly& m) {
    QPoly q, r;
    divrem_monic(a, m, q, r);
    return r;
}

void clear_denominators(const QPoly& a, ZPoly& n, Int& d) {
    d = 1;
    for (const Rat& x : a.c) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<Int> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) {
        Rat t = Rat(d) * a.c[i];
        c[i] = t.get_num();
    }
    n = ZPoly(std::move(c));
}

Rat resultant_q(const ZPoly& a, const QPoly& b) {
    if (b.is_zero()) return Rat(0);
    ZPoly n;
    Int d;
    clear_denominators(b, n, d);
    Int res = resultant(a, n);
    // Res(a, b) = Res(a, n/d) = d^(-deg a) Res(a, n)
    return make_rat(res, ipow(d, static_cast<unsigned long>(a.degree())));
}

void ZLaurent::normalize() {
    size_t lead = 0;
    while (lead < c.size() && c[lead] == 0) ++lead;
    if (lead > 0) {
        c.erase(c.begin(), c.begin() + static_cast<long>(lead));
        off += static_cast<long>(lead);
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) off = 0;
}

Int ZLaurent::coeff(long k) const {
    long i = k - off;
    if (i < 0 || i >= static_cast<long>(c.size())) return 0;
    return c[static_cast<size_t>(i)];
}

bool ZLaurent::operator==(const ZLaurent& o) const {
    ZLaurent a = *this, b = o;
    a.normalize();
    b.normalize();
    return a.off == b.off && a.c == b.c;
}

ZLaurent operator+(const ZLaurent& a, const ZLaurent& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    ZLaurent out;
    out.off = lo;
    out.c.assign(static_cast<size_t>(hi - lo + 1), Int(0));
    for (long k = lo; k <= hi; ++k) out.c[static_cast<size_t>(k - lo)] = a.coeff(k) + b.coeff(k);
    out.normalize();
    return out;
}

ZLaurent operator-(const ZLaurent& a, const ZLaurent& b) {
    ZLaurent nb = b;
    for (Int& x : nb.c) x = -x;
    return a + nb;
}

ZLaurent operator*(const ZLaurent& a, const ZLaurent& b) {
    if (a.is_zero() || b.is_zero()) return ZLaurent();
    ZLaurent out;
    out.off = a.off + b.off;
    out.c.assign(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    out.normalize();
    return out;
}

ZLaurent lshift(const ZLaurent& a, long k) {
    ZLaurent out = a;
    out.off += k;
    return out;
}

ZLaurent laurent_compose(const ZPoly& a, const ZLaurent& b) {
    ZLaurent out;
    for (size_t i = a.c.size(); i-- > 0;) {
        out = out * b;
        if (a.c[i] != 0) out = out + ZLaurent{{a.c[i]}, 0};
    }
    return out;
}

bool laurent_is_poly(const ZLaurent& a) {
    ZLaurent t = a;
    t.normalize();
    return t.is_zero() || t.off >= 0;
}

ZPoly laurent_to_poly(const ZLaurent& a) {
    ZLaurent t = a;
    t.normalize();
    if (t.is_zero()) return ZPoly();
    if (t.off < 0) throw std::domain_error("laurent_to_poly: negative exponents present");
    std::vector<Int> c(static_cast<size_t>(t.hi()) + 1, Int(0));
    for (size_t i = 0; i < t.c.size(); ++i) c[static_cast<size_t>(t.off) + i] = t.c[i];
    return ZPoly(std::move(c));
}

}  // namespace rrp
