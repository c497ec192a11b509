#include "rrp/finitefield.hpp"

#include <algorithm>
#include <stdexcept>

#include "rrp/errors.hpp"

namespace rrp {

namespace {

void pm_trim(std::vector<uint32_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

uint32_t mod_inverse(uint64_t a, uint32_t p) {
    // extended Euclid; p prime, a != 0 mod p
    int64_t t = 0, newt = 1;
    int64_t r = p, newr = static_cast<int64_t>(a % p);
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw std::domain_error("mod_inverse: not invertible");
    if (t < 0) t += p;
    return static_cast<uint32_t>(t);
}

}  // namespace

std::vector<uint32_t> zpoly_mod_p(const ZPoly& f, uint32_t p) {
    std::vector<uint32_t> out(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) {
        Int m = f.c[i] % static_cast<long>(p);
        if (m < 0) m += static_cast<long>(p);
        out[i] = static_cast<uint32_t>(m.get_ui());
    }
    pm_trim(out);
    return out;
}

std::vector<uint32_t> pmod_mul(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint64_t> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            acc[i + j] += static_cast<uint64_t>(a[i]) * b[j] % p;
            if (acc[i + j] >= (uint64_t(1) << 62)) acc[i + j] %= p;
        }
    }
    std::vector<uint32_t> out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<uint32_t>(acc[i] % p);
    pm_trim(out);
    return out;
}

std::vector<uint32_t> pmod_rem(std::vector<uint32_t> a, const std::vector<uint32_t>& b, uint32_t p) {
    if (b.empty()) throw std::domain_error("pmod_rem: zero divisor");
    uint32_t binv = mod_inverse(b.back(), p);
    while (a.size() >= b.size()) {
        uint64_t top = static_cast<uint64_t>(a.back()) * binv % p;
        if (top != 0) {
            size_t shift = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) {
                uint64_t sub = top * b[j] % p;
                uint64_t cur = a[shift + j];
                a[shift + j] = static_cast<uint32_t>((cur + p - sub) % p);
            }
        }
        a.pop_back();
        pm_trim(a);
        if (a.empty()) break;
    }
    return a;
}

std::vector<uint32_t> pmod_gcd(std::vector<uint32_t> a, std::vector<uint32_t> b, uint32_t p) {
    pm_trim(a);
    pm_trim(b);
    while (!b.empty()) {
        auto r = pmod_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint32_t inv = mod_inverse(a.back(), p);
        for (auto& x : a) x = static_cast<uint32_t>(static_cast<uint64_t>(x) * inv % p);
    }
    return a;
}

std::vector<uint32_t> pmod_powmod(const std::vector<uint32_t>& a, const Int& e, const std::vector<uint32_t>& m, uint32_t p) {
    std::vector<uint32_t> result{1};
    std::vector<uint32_t> base = pmod_rem(a, m, p);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = pmod_rem(pmod_mul(result, base, p), m, p);
        k >>= 1;
        if (k > 0) base = pmod_rem(pmod_mul(base, base, p), m, p);
    }
    return result;
}

bool pmod_is_irreducible(const std::vector<uint32_t>& f, uint32_t p) {
    size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    std::vector<uint32_t> x{0, 1};
    // Rabin: x^(p^n) == x mod f, and gcd(x^(p^(n/t)) - x, f) = 1 for prime t | n
    std::vector<size_t> prime_divs;
    size_t nn = n;
    for (size_t t = 2; t * t <= nn; ++t)
        if (nn % t == 0) {
            prime_divs.push_back(t);
            while (nn % t == 0) nn /= t;
        }
    if (nn > 1) prime_divs.push_back(nn);

    for (size_t t : prime_divs) {
        Int e = ipow(Int(static_cast<long>(p)), static_cast<unsigned long>(n / t));
        auto xe = pmod_powmod(x, e, f, p);
        // xe - x
        auto d = xe;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = static_cast<uint32_t>((d[1] + p - 1) % p);
        pm_trim(d);
        auto gc = pmod_gcd(f, d, p);
        if (gc.size() != 1) return false;
    }
    Int e = ipow(Int(static_cast<long>(p)), static_cast<unsigned long>(n));
    auto xe = pmod_powmod(x, e, f, p);
    if (xe.size() < 2) xe.resize(2, 0);
    xe[1] = static_cast<uint32_t>((xe[1] + p - 1) % p);
    pm_trim(xe);
    return xe.empty();
}

std::vector<uint32_t> FqField::canonical_modulus(uint32_t p, int k) {
    if (k == 1) return {0, 1};  // x
    // enumerate non-leading coefficients by base-p integer value
    uint64_t limit = 1;
    for (int i = 0; i < k; ++i) limit *= p;
    for (uint64_t v = 0; v < limit; ++v) {
        std::vector<uint32_t> f(static_cast<size_t>(k) + 1, 0);
        uint64_t t = v;
        for (int i = 0; i < k; ++i) {
            f[static_cast<size_t>(i)] = static_cast<uint32_t>(t % p);
            t /= p;
        }
        f[static_cast<size_t>(k)] = 1;
        if (pmod_is_irreducible(f, p)) return f;
    }
    throw std::logic_error("canonical_modulus: no irreducible found");
}

FqField::FqField(uint32_t p, int k) : FqField(p, canonical_modulus(p, k)) {}

FqField::FqField(uint32_t p, std::vector<uint32_t> modulus) : p_(p), mod_(std::move(modulus)) {
    if (mod_.size() < 2 || mod_.back() != 1) throw std::invalid_argument("FqField: modulus must be monic of degree >= 1");
    k_ = static_cast<int>(mod_.size()) - 1;
    size_ = 1;
    for (int i = 0; i < k_; ++i) {
        if (size_ > (uint64_t(1) << 62) / p_) throw unsupported_error("FqField: field order exceeds 2^62");
        size_ *= p_;
    }
}

FqField::El FqField::one() const {
    El a = zero();
    a[0] = 1 % p_;
    return a;
}

FqField::El FqField::from_int(long v) const {
    El a = zero();
    long m = v % static_cast<long>(p_);
    if (m < 0) m += p_;
    a[0] = static_cast<uint32_t>(m);
    return a;
}

FqField::El FqField::gen() const {
    if (k_ == 1) {
        // class of x in F_p[x]/(x + c0) is -c0
        El a = zero();
        a[0] = (p_ - mod_[0]) % p_;
        return a;
    }
    El a = zero();
    a[1] = 1;
    return a;
}

bool FqField::is_zero(const El& a) const {
    for (uint32_t x : a)
        if (x != 0) return false;
    return true;
}

FqField::El FqField::add(const El& a, const El& b) const {
    El out(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) out[static_cast<size_t>(i)] = (a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)]) % p_;
    return out;
}

FqField::El FqField::sub(const El& a, const El& b) const {
    El out(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) out[static_cast<size_t>(i)] = (a[static_cast<size_t>(i)] + p_ - b[static_cast<size_t>(i)]) % p_;
    return out;
}

FqField::El FqField::neg(const El& a) const {
    El out(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) out[static_cast<size_t>(i)] = (p_ - a[static_cast<size_t>(i)]) % p_;
    return out;
}

FqField::El FqField::mul(const El& a, const El& b) const {
    std::vector<uint64_t> acc(static_cast<size_t>(2 * k_ - 1), 0);
    for (int i = 0; i < k_; ++i) {
        if (a[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < k_; ++j)
            acc[static_cast<size_t>(i + j)] += static_cast<uint64_t>(a[static_cast<size_t>(i)]) * b[static_cast<size_t>(j)] % p_;
    }
    // reduce degrees 2k-2 .. k by the monic modulus
    for (int d = 2 * k_ - 2; d >= k_; --d) {
        uint64_t top = acc[static_cast<size_t>(d)] % p_;
        if (top == 0) continue;
        for (int j = 0; j < k_; ++j) {
            uint64_t sub = top * mod_[static_cast<size_t>(j)] % p_;
            size_t pos = static_cast<size_t>(d - k_ + j);
            acc[pos] = (acc[pos] % p_ + p_ - sub) % p_;
        }
        acc[static_cast<size_t>(d)] = 0;
    }
    El out(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) out[static_cast<size_t>(i)] = static_cast<uint32_t>(acc[static_cast<size_t>(i)] % p_);
    return out;
}

FqField::El FqField::pow(const El& a, uint64_t e) const {
    El result = one();
    El base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

FqField::El FqField::inv(const El& a) const {
    if (is_zero(a)) throw std::domain_error("FqField::inv: zero element");
    return pow(a, size_ - 2);
}

uint64_t FqField::index(const El& a) const {
    uint64_t idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + a[static_cast<size_t>(i)];
    return idx;
}

FqField::El FqField::decode(uint64_t idx) const {
    El a(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) {
        a[static_cast<size_t>(i)] = static_cast<uint32_t>(idx % p_);
        idx /= p_;
    }
    return a;
}

FqField::El FqField::eval_zpoly(const ZPoly& f, const El& x) const {
    El out = zero();
    for (size_t i = f.c.size(); i-- > 0;) {
        out = mul(out, x);
        Int m = f.c[i] % static_cast<long>(p_);
        if (m < 0) m += static_cast<long>(p_);
        out[0] = static_cast<uint32_t>((out[0] + m.get_ui()) % p_);
    }
    return out;
}

std::vector<long> distinct_linear_roots_mod_p(const ZPoly& f, long p, bool& totally_split) {
    totally_split = false;
    std::vector<long> roots;
    if (p < 2) throw std::invalid_argument("distinct_linear_roots_mod_p: p must be prime");
    uint32_t up = static_cast<uint32_t>(p);
    auto fb = zpoly_mod_p(f, up);
    if (fb.size() != f.c.size()) return roots;  // leading coefficient vanishes mod p
    size_t deg = fb.size() - 1;

    if (static_cast<uint64_t>(p) <= 65536) {
        for (long x = 0; x < p; ++x) {
            uint64_t acc = 0;
            for (size_t i = fb.size(); i-- > 0;) acc = (acc * static_cast<uint64_t>(x) + fb[i]) % up;
            if (acc == 0) roots.push_back(x);
        }
        if (roots.size() != deg) return {};
        // distinctness is automatic from enumeration; multiplicity check:
        auto d = pmod_gcd(fb, zpoly_mod_p(derivative(f), up), up);
        if (d.size() != 1) return {};
        totally_split = true;
        return roots;
    }

    // gcd(x^p - x, f) must be f itself, squarefree
    std::vector<uint32_t> x{0, 1};
    auto xp = pmod_powmod(x, Int(p), fb, up);
    auto d = xp;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = static_cast<uint32_t>((d[1] + up - 1) % up);
    pm_trim(d);
    if (!d.empty()) return {};  // not totally split
    auto sq = pmod_gcd(fb, zpoly_mod_p(derivative(f), up), up);
    if (sq.size() != 1) return {};

    // split product of distinct linears deterministically
    std::vector<std::vector<uint32_t>> stack{fb};
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        size_t dc = cur.size() - 1;
        if (dc == 1) {
            uint32_t inv = mod_inverse(cur[1], up);
            roots.push_back(static_cast<long>((static_cast<uint64_t>(up - cur[0]) % up) * inv % up));
            continue;
        }
        bool split_done = false;
        for (long a = 0;; ++a) {
            std::vector<uint32_t> xa{static_cast<uint32_t>(a % p), 1};
            auto t = pmod_powmod(xa, Int((p - 1) / 2), cur, up);
            if (t.empty()) t = {0};
            t[0] = static_cast<uint32_t>((t[0] + up - 1) % up);
            pm_trim(t);
            auto gc = pmod_gcd(cur, t, up);
            if (gc.size() >= 2 && gc.size() < cur.size()) {
                // exact division cur / gc
                std::vector<uint32_t> quo(cur.size() - gc.size() + 1, 0);
                auto rem = cur;
                uint32_t lcinv = mod_inverse(gc.back(), up);
                while (rem.size() >= gc.size()) {
                    uint64_t topc = static_cast<uint64_t>(rem.back()) * lcinv % up;
                    size_t shift = rem.size() - gc.size();
                    quo[shift] = static_cast<uint32_t>(topc);
                    for (size_t j = 0; j < gc.size(); ++j) {
                        uint64_t sub = topc * gc[j] % up;
                        rem[shift + j] = static_cast<uint32_t>((rem[shift + j] + up - sub) % up);
                    }
                    pm_trim(rem);
                    if (rem.empty()) break;
                }
                pm_trim(quo);
                stack.push_back(gc);
                stack.push_back(quo);
                split_done = true;
                break;
            }
            if (a > 4 * p) throw std::logic_error("root splitting failed to converge");
        }
        if (!split_done) return {};
    }
    if (roots.size() != deg) return {};
    std::sort(roots.begin(), roots.end());
    totally_split = true;
    return roots;
}

}  // namespace rrp
