#include "rrp/frobenius.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <thread>
#include <tuple>

#include "rrp/errors.hpp"

namespace rrp {

namespace {

constexpr int MAXK = 8;
constexpr uint64_t MAX_FIELD = 40000000;  // largest enumerable field

struct SmallFq {
    uint32_t p;
    int k;
    uint32_t mod[MAXK + 1];
    uint32_t negmod[MAXK];  // p - mod[j] mod p
    uint64_t magic;         // floor(2^64 / p) for Barrett reduction

    explicit SmallFq(const FqField& F) : p(F.p()), k(F.k()) {
        for (int i = 0; i <= k; ++i) mod[i] = F.modulus()[static_cast<size_t>(i)];
        for (int i = 0; i < k; ++i) negmod[i] = (p - mod[i]) % p;
        magic = ~static_cast<uint64_t>(0) / p;  // floor((2^64-1)/p) keeps qhat within 1 of x/p
    }

    // one-correction Barrett; valid for any x < 2^63
    inline uint64_t reduce(uint64_t x) const {
        uint64_t q = static_cast<uint64_t>((static_cast<unsigned __int128>(x) * magic) >> 64);
        uint64_t r = x - q * p;
        if (r >= p) r -= p;
        return r;
    }

    // c = a*b; accumulators stay below (2k-1) p^2 < 2^44
    inline void mul(const uint32_t* a, const uint32_t* b, uint32_t* c) const {
        uint64_t acc[2 * MAXK - 1] = {0};
        for (int i = 0; i < k; ++i) {
            if (a[i] == 0) continue;
            uint64_t ai = a[i];
            for (int j = 0; j < k; ++j) acc[i + j] += ai * b[j];
        }
        for (int d = 2 * k - 2; d >= k; --d) {
            uint64_t top = reduce(acc[d]);
            if (top) {
                for (int j = 0; j < k; ++j) acc[d - k + j] += top * negmod[j];
            }
        }
        for (int i = 0; i < k; ++i) c[i] = static_cast<uint32_t>(reduce(acc[i]));
    }

    inline uint64_t index(const uint32_t* a) const {
        uint64_t idx = 0;
        for (int i = k - 1; i >= 0; --i) idx = idx * p + a[i];
        return idx;
    }
};

// y^2 table: one bit per element index
std::vector<uint64_t> square_bitmap_build(const SmallFq& F, uint64_t size, int workers) {
    std::vector<uint64_t> bits(static_cast<size_t>((size + 63) / 64), 0);
    int nw = std::max(1, workers);
    std::vector<std::vector<uint64_t>> parts(static_cast<size_t>(nw), std::vector<uint64_t>());
    auto run = [&](int w) {
        std::vector<uint64_t>& mine = parts[static_cast<size_t>(w)];
        mine.assign(bits.size(), 0);
        uint64_t lo = size * static_cast<uint64_t>(w) / static_cast<uint64_t>(nw);
        uint64_t hi = size * static_cast<uint64_t>(w + 1) / static_cast<uint64_t>(nw);
        uint32_t y[MAXK] = {0};
        // seed the odometer at lo
        uint64_t t = lo;
        for (int i = 0; i < F.k; ++i) {
            y[i] = static_cast<uint32_t>(t % F.p);
            t /= F.p;
        }
        uint32_t sq[MAXK];
        for (uint64_t idx = lo; idx < hi; ++idx) {
            F.mul(y, y, sq);
            uint64_t si = F.index(sq);
            mine[si >> 6] |= (uint64_t(1) << (si & 63));
            // increment odometer
            for (int i = 0; i < F.k; ++i) {
                if (++y[i] < F.p) break;
                y[i] = 0;
            }
        }
    };
    if (nw == 1) {
        run(0);
        return parts[0];
    }
    std::vector<std::thread> th;
    for (int w = 0; w < nw; ++w) th.emplace_back(run, w);
    for (auto& t : th) t.join();
    for (int w = 0; w < nw; ++w)
        for (size_t i = 0; i < bits.size(); ++i) bits[i] |= parts[static_cast<size_t>(w)][i];
    return bits;
}

// square tables are reused heavily across residue classes; cache per field
std::mutex g_sq_mu;
std::map<std::tuple<uint32_t, int, uint64_t>, std::shared_ptr<const std::vector<uint64_t>>> g_sq_cache;

std::shared_ptr<const std::vector<uint64_t>> square_bitmap(const SmallFq& F, uint64_t size, int workers) {
    uint64_t modkey = 0;
    for (int i = F.k - 1; i >= 0; --i) modkey = modkey * F.p + F.mod[i];
    std::tuple<uint32_t, int, uint64_t> key{F.p, F.k, modkey};
    {
        std::lock_guard<std::mutex> lock(g_sq_mu);
        auto it = g_sq_cache.find(key);
        if (it != g_sq_cache.end()) return it->second;
    }
    auto built = std::make_shared<const std::vector<uint64_t>>(square_bitmap_build(F, size, workers));
    std::lock_guard<std::mutex> lock(g_sq_mu);
    if (g_sq_cache.size() > 48) g_sq_cache.clear();
    return g_sq_cache.emplace(key, built).first->second;
}

}  // namespace

Int count_points(const ZPoly& f, const FqField& F, int workers) {
    if (F.k() > MAXK) throw unsupported_error("count_points: extension degree too large");
    if (F.size() > MAX_FIELD) throw unsupported_error("count_points: field too large for enumeration");
    if (f.is_zero() || f.lc() != 1 || f.degree() % 2 == 0)
        throw std::invalid_argument("count_points: model must be monic of odd degree");
    if (f.degree() >= 2 && discriminant(f) % static_cast<long>(F.p()) == 0)
        throw std::invalid_argument("count_points: bad reduction at the field characteristic");

    SmallFq Fq(F);
    uint64_t size = F.size();
    int nw = std::max(1, std::min<int>(workers, 64));

    // even/odd split: f(x) = E(x^2) + x O(x^2) halves the multiplication count
    std::vector<uint32_t> fe, fo;
    for (size_t i = 0; i < f.c.size(); ++i) {
        Int m = f.c[i] % static_cast<long>(F.p());
        if (m < 0) m += static_cast<long>(F.p());
        uint32_t v = static_cast<uint32_t>(m.get_ui());
        if (i % 2 == 0) fe.push_back(v);
        else fo.push_back(v);
    }
    while (fe.size() > 1 && fe.back() == 0) fe.pop_back();
    while (fo.size() > 1 && fo.back() == 0) fo.pop_back();

    std::shared_ptr<const std::vector<uint64_t>> issq_ptr = square_bitmap(Fq, size, nw);
    const std::vector<uint64_t>& issq = *issq_ptr;

    std::vector<uint64_t> counts(static_cast<size_t>(nw), 0);
    auto run = [&](int w) {
        uint64_t lo = size * static_cast<uint64_t>(w) / static_cast<uint64_t>(nw);
        uint64_t hi = size * static_cast<uint64_t>(w + 1) / static_cast<uint64_t>(nw);
        uint32_t x[MAXK] = {0};
        uint64_t t = lo;
        for (int i = 0; i < Fq.k; ++i) {
            x[i] = static_cast<uint32_t>(t % Fq.p);
            t /= Fq.p;
        }
        uint64_t local = 0;
        uint32_t sq[MAXK], acc[MAXK], odd[MAXK], tmp[MAXK];
        for (uint64_t idx = lo; idx < hi; ++idx) {
            Fq.mul(x, x, sq);
            // acc = E(sq)
            for (int i = 0; i < Fq.k; ++i) acc[i] = 0;
            acc[0] = fe.back();
            for (size_t ci = fe.size() - 1; ci-- > 0;) {
                Fq.mul(acc, sq, tmp);
                for (int i = 0; i < Fq.k; ++i) acc[i] = tmp[i];
                acc[0] = (acc[0] + fe[ci]) % Fq.p;
            }
            if (!fo.empty()) {
                // odd = O(sq), then acc += x * odd
                for (int i = 0; i < Fq.k; ++i) odd[i] = 0;
                odd[0] = fo.back();
                for (size_t ci = fo.size() - 1; ci-- > 0;) {
                    Fq.mul(odd, sq, tmp);
                    for (int i = 0; i < Fq.k; ++i) odd[i] = tmp[i];
                    odd[0] = (odd[0] + fo[ci]) % Fq.p;
                }
                Fq.mul(odd, x, tmp);
                for (int i = 0; i < Fq.k; ++i) acc[i] = (acc[i] + tmp[i]) % Fq.p;
            }
            bool zero = true;
            for (int i = 0; i < Fq.k; ++i)
                if (acc[i]) {
                    zero = false;
                    break;
                }
            if (zero) {
                local += 1;
            } else {
                uint64_t fi = Fq.index(acc);
                if (issq[fi >> 6] & (uint64_t(1) << (fi & 63))) local += 2;
            }
            for (int i = 0; i < Fq.k; ++i) {
                if (++x[i] < Fq.p) break;
                x[i] = 0;
            }
        }
        counts[static_cast<size_t>(w)] = local;
    };
    if (nw == 1) {
        run(0);
    } else {
        std::vector<std::thread> th;
        for (int w = 0; w < nw; ++w) th.emplace_back(run, w);
        for (auto& t : th) t.join();
    }
    Int total = 1;  // the point at infinity of the odd-degree model
    for (int w = 0; w < nw; ++w) total += Int(static_cast<unsigned long>(counts[static_cast<size_t>(w)]));
    return total;
}

LPolynomial l_polynomial(const ZPoly& f, long q, int res_deg, int genus, int workers, bool crosscheck_extra) {
    Int Q = ipow(Int(q), static_cast<unsigned long>(res_deg));
    // power sums S_m of the 2g Frobenius eigenvalues from point counts
    std::vector<Int> S(static_cast<size_t>(genus) + 1);
    for (int m = 1; m <= genus; ++m) {
        FqField F(static_cast<uint32_t>(q), res_deg * m);
        Int Nm = count_points(f, F, workers);
        S[static_cast<size_t>(m)] = ipow(Q, static_cast<unsigned long>(m)) + 1 - Nm;
        // Weil guard: S_m^2 <= (2g)^2 Q^m
        if (S[static_cast<size_t>(m)] * S[static_cast<size_t>(m)] >
            Int(4 * genus * genus) * ipow(Q, static_cast<unsigned long>(m)))
            throw certificate_error("l_polynomial: count violates the Weil bound");
    }
    // Newton: c_k = -(1/k) sum_{i=1..k} S_i c_(k-i), c_0 = 1
    std::vector<Int> c(static_cast<size_t>(2 * genus) + 1);
    c[0] = 1;
    for (int k = 1; k <= genus; ++k) {
        Int acc = 0;
        for (int i = 1; i <= k; ++i) acc += S[static_cast<size_t>(i)] * c[static_cast<size_t>(k - i)];
        Int kk(k);
        Int out;
        if (!mpz_divisible_p(acc.get_mpz_t(), kk.get_mpz_t()))
            throw certificate_error("l_polynomial: Newton step produced a non-integer coefficient");
        mpz_divexact(out.get_mpz_t(), acc.get_mpz_t(), kk.get_mpz_t());
        c[static_cast<size_t>(k)] = -out;
    }
    for (int k = 0; k < genus; ++k)
        c[static_cast<size_t>(2 * genus - k)] = ipow(Q, static_cast<unsigned long>(genus - k)) * c[static_cast<size_t>(k)];

    LPolynomial lp{std::move(c), Q, genus};

    if (crosscheck_extra) {
        Int nextQ = ipow(Q, static_cast<unsigned long>(genus + 1));
        if (nextQ <= Int(static_cast<long>(MAX_FIELD))) {
            // predicted power sum p_(g+1) from the full coefficient list
            std::vector<Int> ps(static_cast<size_t>(genus) + 2);
            ps[0] = 2 * genus;
            for (int k = 1; k <= genus + 1; ++k) {
                Int acc = 0;
                for (int i = 1; i < k; ++i) acc += lp.c[static_cast<size_t>(i)] * ps[static_cast<size_t>(k - i)];
                acc += Int(k) * lp.c[static_cast<size_t>(k)];
                ps[static_cast<size_t>(k)] = -acc;
            }
            FqField F(static_cast<uint32_t>(q), res_deg * (genus + 1));
            Int Nm = count_points(f, F, workers);
            if (Nm != nextQ + 1 - ps[static_cast<size_t>(genus + 1)])
                throw certificate_error("l_polynomial: extra-degree count cross-check failed");
        }
    }
    return lp;
}

RealWeilPolynomial real_weil(const LPolynomial& lp) {
    int g = lp.genus;
    // reverse(L)(X) = X^2g + c_1 X^(2g-1) + ... + c_2g
    auto crev = [&](int n) { return lp.c[static_cast<size_t>(n)]; };
    std::vector<Int> b(static_cast<size_t>(g) + 1);
    b[0] = 1;
    for (int n = 1; n <= g; ++n) {
        Int acc = crev(n);
        for (int j = n - 2; j >= 0; j -= 2) {
            unsigned long t = static_cast<unsigned long>((n - j) / 2);
            acc -= b[static_cast<size_t>(j)] * binom(static_cast<unsigned long>(g - j), t) * ipow(lp.Q, t);
        }
        b[static_cast<size_t>(n)] = acc;
    }
    // remaining coefficients are determined; mismatch signals a counting bug
    for (int n = g + 1; n <= 2 * g; ++n) {
        Int acc = 0;
        for (int j = n % 2; j <= g; j += 2) {
            if (n - j < 0 || (n - j) / 2 > g - j) continue;
            unsigned long t = static_cast<unsigned long>((n - j) / 2);
            acc += b[static_cast<size_t>(j)] * binom(static_cast<unsigned long>(g - j), t) * ipow(lp.Q, t);
        }
        if (acc != crev(n)) throw certificate_error("inconsistent-lpoly: real Weil descent has no integral solution");
    }
    // store with c[0] = constant term, ascending: P(Y) = Y^g + b_1 Y^(g-1) + ...
    std::vector<Int> asc(static_cast<size_t>(g) + 1);
    for (int i = 0; i <= g; ++i) asc[static_cast<size_t>(i)] = b[static_cast<size_t>(g - i)];
    return RealWeilPolynomial{std::move(asc), lp.Q};
}

namespace {

using f128 = __float128;

f128 mpz_to_f128(const Int& n) {
    // split into 32-bit limbs to stay exact for |n| < 2^96
    bool neg = n < 0;
    Int a = abs(n);
    f128 out = 0;
    f128 scale = 1;
    while (a > 0) {
        unsigned long limb = mpz_get_ui(a.get_mpz_t()) & 0xffffffffUL;
        out += scale * static_cast<f128>(limb);
        scale *= static_cast<f128>(4294967296.0);
        a >>= 32;
    }
    return neg ? -out : out;
}

f128 eval_f128(const std::vector<f128>& c, f128 x) {
    f128 out = 0;
    for (size_t i = c.size(); i-- > 0;) out = out * x + c[i];
    return out;
}

std::vector<f128> to_f128(const ZPoly& p) {
    std::vector<f128> out(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) out[i] = mpz_to_f128(p.c[i]);
    return out;
}

f128 bisect_root(const std::vector<f128>& c, f128 lo, f128 hi) {
    f128 flo = eval_f128(c, lo);
    for (int it = 0; it < 180; ++it) {
        f128 mid = (lo + hi) / 2;
        f128 fm = eval_f128(c, mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

// all real roots of a squarefree totally-real integer polynomial, ascending;
// intervals between critical points hold at most one root each
std::vector<f128> real_roots_squarefree(const ZPoly& p) {
    long d = p.degree();
    std::vector<f128> out;
    if (d <= 0) return out;
    std::vector<f128> c = to_f128(p);
    if (d == 1) {
        out.push_back(-c[0] / c[1]);
        return out;
    }
    std::vector<f128> crit = real_roots_squarefree(derivative(p));
    // Cauchy bound
    f128 bound = 0;
    for (long i = 0; i < d; ++i) {
        f128 t = c[static_cast<size_t>(i)] / c[static_cast<size_t>(d)];
        if (t < 0) t = -t;
        if (t > bound) bound = t;
    }
    bound += 1;
    std::vector<f128> pts;
    pts.push_back(-bound);
    for (f128 x : crit)
        if (x > -bound && x < bound) pts.push_back(x);
    pts.push_back(bound);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        f128 a = pts[i], b = pts[i + 1];
        f128 fa = eval_f128(c, a), fb = eval_f128(c, b);
        if (fa == 0 || fb == 0) continue;  // squarefree keeps roots off the critical set
        if ((fa > 0) != (fb > 0)) out.push_back(bisect_root(c, a, b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// primitive gcd over Z via rational Euclid (small degrees only)
ZPoly zgcd_small(const ZPoly& a, const ZPoly& b) {
    QPoly A = QPoly::from_z(a), B = QPoly::from_z(b);
    while (!B.is_zero()) {
        Rat lead = B.c.back();
        QPoly Bm = (Rat(1) / lead) * B;
        QPoly quo, rem;
        divrem_monic(A, Bm, quo, rem);
        A = Bm;
        B = rem;
    }
    ZPoly n;
    Int d;
    clear_denominators(A, n, d);
    Int cont = content(n);
    if (cont > 1) {
        std::vector<Int> t = n.c;
        for (Int& x : t) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), cont.get_mpz_t());
        n = ZPoly(std::move(t));
    }
    if (!n.is_zero() && n.lc() < 0) n = -n;
    return n;
}

// Roots with multiplicity (ascending) of a monic integer polynomial whose root
// multiset is a Galois orbit: every distinct root has the same multiplicity.
std::vector<f128> real_roots_orbit(const ZPoly& p, int expected_total) {
    ZPoly gc = zgcd_small(p, derivative(p));
    ZPoly sq = p;
    if (gc.degree() > 0) {
        QPoly quo, rem;
        divrem_monic(QPoly::from_z(p), (Rat(1) / Rat(gc.lc())) * QPoly::from_z(gc), quo, rem);
        if (!rem.is_zero()) throw certificate_error("real_roots_orbit: squarefree division failed");
        ZPoly n;
        Int den;
        clear_denominators(quo, n, den);
        sq = n;
    }
    std::vector<f128> roots = real_roots_squarefree(sq);
    if (roots.empty() || static_cast<long>(roots.size()) != sq.degree())
        throw certificate_error("real_roots_orbit: polynomial is not totally real");
    if (expected_total % static_cast<int>(roots.size()) != 0)
        throw certificate_error("real_roots_orbit: root multiplicities are not uniform");
    int mult = expected_total / static_cast<int>(roots.size());
    std::vector<f128> out;
    for (f128 x : roots)
        for (int i = 0; i < mult; ++i) out.push_back(x);
    return out;
}

}  // namespace

bool trace_set_feasible(const CycloField& K, long q) {
    if (q == 2 || q == K.r()) return false;
    int f = K.residue_degree(q);
    int k = f * K.g();
    if (k > MAXK) return false;
    long double size = 1;
    for (int i = 0; i < k; ++i) size *= static_cast<long double>(q);
    return size <= static_cast<long double>(MAX_FIELD);
}

Int elliptic_aq(const ZPoly& cubic, long q, int workers) {
    FqField F(static_cast<uint32_t>(q), 1);
    Int N = count_points(cubic, F, workers);
    return Int(q) + 1 - N;
}

Int elliptic_trace_power(const Int& aq, long q, int f) {
    // s_m = a s_(m-1) - q s_(m-2)
    Int s0 = 2, s1 = aq;
    if (f == 0) return s0;
    for (int m = 2; m <= f; ++m) {
        Int s2 = aq * s1 - Int(q) * s0;
        s0 = s1;
        s1 = s2;
    }
    return s1;
}

TraceSet trace_set(const CycloField& K, const Int& a, const Int& b, long q, int workers) {
    int r = K.r(), g = K.g();
    Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
    if (q == 2 || q == r || s % q == 0)
        throw std::invalid_argument("trace_set: bad reduction at q");

    TraceSet ts;
    ts.q = q;
    ts.split = K.split_prime(q);
    ts.f = ts.split.f;
    ts.Q = ipow(Int(q), static_cast<unsigned long>(ts.f));

    ZPoly model = kraus_poly(r, a, b);
    // the extra-degree count is verified whenever the next field is small
    bool crosscheck = ipow(ts.Q, static_cast<unsigned long>(g + 1)) <= 200000;
    ts.lp = l_polynomial(model, q, ts.f, g, workers, crosscheck);
    RealWeilPolynomial P = real_weil(ts.lp);

    // numeric roots (with multiplicity) and numeric embeddings w_j
    std::vector<f128> roots = real_roots_orbit(ZPoly(P.c), g);
    if (static_cast<int>(roots.size()) != g)
        throw certificate_error("trace_set: real Weil polynomial does not have g real roots");

    // Weil bound on every root: x^2 <= 4Q + eps
    for (f128 x : roots) {
        f128 lim = mpz_to_f128(4 * ts.Q) + static_cast<f128>(1e-6);
        if (x * x > lim) throw certificate_error("trace_set: root violates the Weil bound");
    }

    // w_j = 2 cos(2 pi j / r) are the roots of h sorted in decreasing order
    std::vector<f128> womega = real_roots_squarefree(K.h());
    std::sort(womega.begin(), womega.end(), [](f128 x, f128 y) { return x > y; });
    if (static_cast<int>(womega.size()) != g)
        throw certificate_error("trace_set: embedding enumeration failed");

    // powers of w_j for the linear system
    std::vector<std::vector<f128>> wpow(static_cast<size_t>(g), std::vector<f128>(static_cast<size_t>(g)));
    for (int j = 0; j < g; ++j) {
        f128 acc = 1;
        for (int k = 0; k < g; ++k) {
            wpow[static_cast<size_t>(j)][static_cast<size_t>(k)] = acc;
            acc *= womega[static_cast<size_t>(j)];
        }
    }

    const Int trace_target = -P.c[static_cast<size_t>(g - 1)];  // sum of the roots

    std::vector<f128> perm = roots;  // ascending start for next_permutation over the multiset
    std::sort(perm.begin(), perm.end());
    bool found = false;
    KElem u;
    do {
        // solve sum_k x_k w_j^k = perm[j]
        std::vector<std::vector<f128>> M(static_cast<size_t>(g), std::vector<f128>(static_cast<size_t>(g) + 1));
        for (int j = 0; j < g; ++j) {
            for (int k = 0; k < g; ++k) M[static_cast<size_t>(j)][static_cast<size_t>(k)] = wpow[static_cast<size_t>(j)][static_cast<size_t>(k)];
            M[static_cast<size_t>(j)][static_cast<size_t>(g)] = perm[static_cast<size_t>(j)];
        }
        bool singular = false;
        for (int col = 0; col < g && !singular; ++col) {
            int piv = col;
            for (int rr2 = col + 1; rr2 < g; ++rr2) {
                f128 cand = M[static_cast<size_t>(rr2)][static_cast<size_t>(col)];
                f128 best = M[static_cast<size_t>(piv)][static_cast<size_t>(col)];
                if ((cand < 0 ? -cand : cand) > (best < 0 ? -best : best)) piv = rr2;
            }
            std::swap(M[static_cast<size_t>(col)], M[static_cast<size_t>(piv)]);
            f128 d = M[static_cast<size_t>(col)][static_cast<size_t>(col)];
            if (d == 0) {
                singular = true;
                break;
            }
            for (int rr2 = 0; rr2 < g; ++rr2) {
                if (rr2 == col) continue;
                f128 fct = M[static_cast<size_t>(rr2)][static_cast<size_t>(col)] / d;
                if (fct == 0) continue;
                for (int cc = col; cc <= g; ++cc)
                    M[static_cast<size_t>(rr2)][static_cast<size_t>(cc)] -= fct * M[static_cast<size_t>(col)][static_cast<size_t>(cc)];
            }
        }
        if (singular) continue;
        std::vector<Rat> coords(static_cast<size_t>(g));
        bool ok = true;
        for (int k = 0; k < g && ok; ++k) {
            f128 v = M[static_cast<size_t>(k)][static_cast<size_t>(g)] / M[static_cast<size_t>(k)][static_cast<size_t>(k)];
            // traces are integral and O_K = Z[w]: coordinates must round to integers
            long long nearest = static_cast<long long>(v >= 0 ? v + static_cast<f128>(0.5)
                                                              : v - static_cast<f128>(0.5));
            f128 offset = v - static_cast<f128>(nearest);
            if ((offset < 0 ? -offset : offset) > static_cast<f128>(1e-8)) ok = false;
            coords[static_cast<size_t>(k)] = Rat(static_cast<long>(nearest));
        }
        if (!ok) continue;
        KElem cand = K.from_coeffs(coords);
        if (K.trace(cand) != Rat(trace_target)) continue;
        // exact verification: prod_j (X^2 - sigma_j(cand) X + Q) = reverse(L)
        std::vector<KElem> prod{K.one()};
        for (int j = 1; j <= g; ++j) {
            KElem sj = K.galois_apply(j, cand);
            // multiply by X^2 - sj X + Q
            std::vector<KElem> next(prod.size() + 2, K.zero());
            for (size_t i = 0; i < prod.size(); ++i) {
                next[i + 2] = K.add(next[i + 2], prod[i]);
                next[i + 1] = K.sub(next[i + 1], K.mul(sj, prod[i]));
                next[i] = K.add(next[i], K.mul_rat(Rat(ts.Q), prod[i]));
            }
            prod = std::move(next);
        }
        bool match = true;
        for (size_t i = 0; i < prod.size() && match; ++i) {
            // coefficient of X^i must equal reverse(L) coefficient c_(2g-i)
            if (!(prod[i] == K.from_rat(Rat(ts.lp.c[2 * static_cast<size_t>(g) - i])))) match = false;
        }
        if (!match) continue;
        // consistency with the stabilizer of the first label
        bool stab_ok = true;
        for (int j = 1; j <= g && stab_ok; ++j)
            if (ts.split.sigma_label[static_cast<size_t>(j - 1)][0] == 0 && !(K.galois_apply(j, cand) == cand))
                stab_ok = false;
        if (!stab_ok) continue;
        u = cand;
        found = true;
        break;
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!found) throw certificate_error("internal-error: trace recognition failed for all assignments");

    ts.rep = u;
    ts.label_elem.assign(static_cast<size_t>(ts.split.n_primes), -1);
    for (int j = 1; j <= g; ++j) {
        KElem sj = K.galois_apply(j, u);
        int idx = -1;
        for (size_t i = 0; i < ts.elements.size(); ++i)
            if (ts.elements[i] == sj) {
                idx = static_cast<int>(i);
                break;
            }
        if (idx < 0) {
            ts.elements.push_back(sj);
            idx = static_cast<int>(ts.elements.size()) - 1;
        }
        int lab = ts.split.sigma_label[static_cast<size_t>(j - 1)][0];
        if (ts.label_elem[static_cast<size_t>(lab)] >= 0 && ts.label_elem[static_cast<size_t>(lab)] != idx)
            throw certificate_error("internal-error: inconsistent prime assignment");
        ts.label_elem[static_cast<size_t>(lab)] = idx;
    }
    for (int v : ts.label_elem)
        if (v < 0) throw certificate_error("internal-error: label without an assigned trace");
    return ts;
}

TraceSet TraceSetCache::get(const CycloField& K, long x, long y, long q, int workers) {
    long xm = x % q, ym = y % q;
    if (xm < 0) xm += q;
    if (ym < 0) ym += q;
    bool swapped = xm > ym;
    if (swapped) std::swap(xm, ym);
    std::array<long, 4> key{static_cast<long>(K.r()), xm, ym, q};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) {
            TraceSet out = it->second;
            if (swapped) {
                Int m = out.Q % 4;
                if (m == 3)
                    for (KElem& e : out.elements) e = K.neg(e);
                if (!out.elements.empty()) out.rep = out.elements[static_cast<size_t>(out.label_elem[0])];
            }
            return out;
        }
    }
    TraceSet fresh = trace_set(K, Int(xm), Int(ym), q, workers);
    {
        std::lock_guard<std::mutex> lock(mu_);
        map_.emplace(key, fresh);
    }
    if (swapped) {
        Int m = fresh.Q % 4;
        if (m == 3)
            for (KElem& e : fresh.elements) e = K.neg(e);
        if (!fresh.elements.empty()) fresh.rep = fresh.elements[static_cast<size_t>(fresh.label_elem[0])];
    }
    return fresh;
}

size_t TraceSetCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

}  // namespace rrp
