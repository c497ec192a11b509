#include "rrp/elimination.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "rrp/errors.hpp"
#include "rrp/finitefield.hpp"

namespace rrp {

namespace {

GaloisSubset check_subset(const CycloField& K, const GaloisSubset& S) {
    if (S.empty()) throw std::invalid_argument("galois subset must be nonempty");
    GaloisSubset out = S;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (int j : out)
        if (j < 1 || j > K.g()) throw std::invalid_argument("galois subset index out of range");
    return out;
}

// arithmetic in K_g = Q[x]/(minpoly)
QPoly kg_mul(const QPoly& a, const QPoly& b, const QPoly& m) { return mod_monic(a * b, m); }

// image of a K-element under omega_embedding
QPoly k_to_kg(const KElem& u, const QPoly& emb, const QPoly& m) {
    QPoly out;
    for (size_t i = u.c.size(); i-- > 0;) {
        out = mod_monic(out * emb, m);
        out = out + QPoly({std::vector<Rat>{u.c[i]}});
    }
    out.trim();
    return out;
}

Int norm_int(const ZPoly& minpoly, const QPoly& elem, const std::string& what) {
    if (elem.is_zero()) return 0;
    Rat n = resultant_q(minpoly, elem);
    if (n.get_den() != 1) throw certificate_error(what + ": norm of an eigenvalue difference is not an integer");
    return n.get_num();
}

Int gcd_int(const Int& a, const Int& b) {
    Int out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

const QPoly& eigenvalue_at(const NewformFixture& fx, long q, int label) {
    auto it = fx.eigen.find(EigenKey{q, label});
    if (it == fx.eigen.end()) {
        std::ostringstream os;
        os << "missing eigenvalue for fixture '" << fx.label << "' at q=" << q << " label=" << label;
        throw std::invalid_argument(os.str());
    }
    return it->second;
}

bool subfield_shortcut_applies(const NewformFixture& fx, const TraceSet& ts, const CycloField& K) {
    return fx.subfield && fx.galois_stable && !fx.base_change_subfield_degree &&
           ts.split.n_primes == 1 && ts.f == K.g();
}

// per-trace-set factor of the N/B bounds
Int orbit_factor(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S,
                 const TraceSet& ts, int variant) {
    if (subfield_shortcut_applies(fx, ts, K)) {
        // inert prime, Galois-stable non-base-change constituent: norm from E_g
        const auto& sf = *fx.subfield;
        auto it = sf.eigen.find(EigenKey{q, 0});
        if (it == sf.eigen.end())
            throw std::invalid_argument("subfield eigenvalue missing at the inert prime q=" + std::to_string(q));
        QPoly em = QPoly::from_z(sf.minpoly);
        QPoly a = mod_monic(it->second, em);
        Int acc = 1;
        for (const KElem& u : ts.elements) {
            if (!u.is_rational())
                throw certificate_error("inert trace set contains a non-rational element");
            QPoly uq({std::vector<Rat>{u.rational_value()}});
            QPoly expr;
            if (variant == 1) expr = uq - a;
            else if (variant == 2) expr = kg_mul(uq, uq, em) - kg_mul(a, a, em);
            else expr = uq + a;
            acc *= abs(norm_int(sf.minpoly, expr, "bound (E_g)"));
            if (acc == 0) break;
        }
        return acc;
    }

    QPoly minpoly = QPoly::from_z(fx.field_minpoly);
    QPoly emb = mod_monic(fx.omega_embedding, minpoly);
    Int acc = 1;
    for (const KElem& u : ts.elements) {
        Int g = 0;
        for (int j : S) {
            int lab = ts.split.sigma_label[static_cast<size_t>(j - 1)][0];
            QPoly a = mod_monic(eigenvalue_at(fx, q, lab), minpoly);
            QPoly su = k_to_kg(K.galois_apply(j, u), emb, minpoly);
            QPoly expr;
            if (variant == 1) expr = su - a;
            else if (variant == 2) expr = kg_mul(su, su, minpoly) - kg_mul(a, a, minpoly);
            else expr = su + a;
            Int n = abs(norm_int(fx.field_minpoly, expr, "bound"));
            g = gcd_int(g, n);
            if (g == 1) break;
        }
        acc *= g;
        if (acc == 0) break;
    }
    return acc;
}

std::vector<Int> factor_small(Int n, std::vector<std::string>& notes) {
    std::vector<Int> out;
    n = abs(n);
    if (n <= 1) return out;
    for (long p = 2; Int(p) * p <= n && p < 2000000; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(Int(p));
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
            out.push_back(n);
        } else {
            notes.push_back("unfactored survivor cofactor " + n.get_str());
        }
    }
    return out;
}

}  // namespace

GaloisSubset full_galois(const CycloField& K) {
    GaloisSubset S(static_cast<size_t>(K.g()));
    for (int j = 1; j <= K.g(); ++j) S[static_cast<size_t>(j - 1)] = j;
    return S;
}

Int bound_N(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S, const TraceSet& ts) {
    GaloisSubset sub = check_subset(K, S);
    if (ts.q != q) throw std::invalid_argument("bound_N: trace set belongs to a different prime");
    return orbit_factor(fx, K, q, sub, ts, 1);
}

Int bound_M(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S) {
    GaloisSubset sub = check_subset(K, S);
    PrimeSplitting split = K.split_prime(q);
    Int Qf = ipow(Int(q), static_cast<unsigned long>(split.f));
    QPoly minpoly = QPoly::from_z(fx.field_minpoly);
    Rat target = Rat((Qf + 1) * (Qf + 1));
    Int g = 0;
    for (int j : sub) {
        int lab = split.sigma_label[static_cast<size_t>(j - 1)][0];
        QPoly a = mod_monic(eigenvalue_at(fx, q, lab), minpoly);
        QPoly expr = kg_mul(a, a, minpoly) - QPoly({std::vector<Rat>{target}});
        g = gcd_int(g, abs(norm_int(fx.field_minpoly, expr, "bound_M")));
        if (g == 1) break;
    }
    return g;
}

BoundBResult bound_B(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S,
                     const Int& d, TwistMode mode, TraceSetCache& cache, int workers) {
    GaloisSubset sub = check_subset(K, S);
    int r = K.r();
    if (q == 2 || q == r || d % q == 0)
        throw std::invalid_argument("bound_B: q must not divide 2rd");

    int f = K.residue_degree(q);
    Int Qf = ipow(Int(q), static_cast<unsigned long>(f));
    int variant;
    if (Qf % 4 == 3) variant = 2;
    else if (mode == TwistMode::chi_r && Qf % r == r - 1) variant = 3;
    else variant = 1;

    BoundBResult res;
    res.variant = variant;
    res.M = bound_M(fx, K, q, sub);
    res.value = res.M;

    std::vector<std::pair<long, long>> classes;
    for (long x = 0; x < q; ++x)
        for (long y = x; y < q; ++y) {
            Int pw = ipow(Int(x), static_cast<unsigned long>(r)) + ipow(Int(y), static_cast<unsigned long>(r));
            if (pw % q == 0) continue;
            classes.push_back({x, y});
        }

    // fill the shared memo store in parallel over residue classes, then fold
    // the product sequentially so the result is scheduling-independent
    int nw = std::max(1, workers);
    if (nw > 1 && classes.size() > 1) {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= classes.size()) break;
                cache.get(K, classes[i].first, classes[i].second, q, 1);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto [x, y] : classes) {
        TraceSet ts = cache.get(K, x, y, q, workers);
        Int factor = orbit_factor(fx, K, q, sub, ts, variant);
        res.class_factors.push_back({{x, y}, factor});
        res.value *= factor;
    }
    return res;
}

BoundReport survivors(const std::vector<NewformFixture>& fxs, const CycloField& K,
                      const std::vector<long>& q_list, const GaloisSubset& S, const Int& d,
                      TwistMode mode, TraceSetCache& cache, int workers,
                      std::optional<SurvivorConfig> config) {
    SurvivorConfig cfg;
    if (config) cfg = *config;
    if (cfg.small_primes.empty()) cfg.small_primes = {Int(2), Int(3), Int(K.r())};

    BoundReport rep;
    for (const auto& fx : fxs) {
        FixtureSurvivors fs;
        fs.label = fx.label;
        Int agg = 0;
        bool any_nonzero = false;
        for (long q : q_list) {
            BoundBResult b = bound_B(fx, K, q, S, d, mode, cache, workers);
            fs.B_per_q[q] = b.value;
            fs.M_per_q[q] = b.M;
            if (b.value != 0) {
                agg = any_nonzero ? gcd_int(agg, b.value) : abs(b.value);
                any_nonzero = true;
            } else {
                fs.notes.push_back("B = 0 at q=" + std::to_string(q) + ": all exponents survive via this prime");
            }
        }
        if (!any_nonzero) {
            fs.all_primes = true;
            fs.notes.push_back("CM-obstruction: every bound vanished, no exponent is eliminated");
        } else {
            fs.survivors = factor_small(agg, fs.notes);
            fs.eliminated = true;
            for (const Int& p : fs.survivors) {
                bool small = false;
                for (const Int& sp : cfg.small_primes)
                    if (p == sp) small = true;
                if (!small) fs.eliminated = false;
            }
        }
        rep.fixtures.push_back(std::move(fs));
    }
    return rep;
}

RefinedReport refined_eliminate(const NewformFixture& fx, const CycloField& K, const Int& p, long q,
                                RefinedCase mode, const Int& d, TraceSetCache& cache, int workers) {
    int r = K.r();
    if (d == 0) throw std::invalid_argument("refined_eliminate: d must be nonzero");
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw std::invalid_argument("refined_eliminate: p must be prime");
    if (p == 2 || p == r || Int(2) * r * d * q % p == 0)
        throw std::invalid_argument("refined_eliminate: p must not divide 2rd q");
    if (!p.fits_slong_p()) throw unsupported_error("refined_eliminate: p too large for residue enumeration");
    long pl = p.get_si();

    RefinedReport rep;
    rep.p = p;
    rep.q = q;

    bool split_ok = false;
    rep.minpoly_roots = distinct_linear_roots_mod_p(fx.field_minpoly, pl, split_ok);
    if (!split_ok) throw unsupported_error("refined_eliminate: p is not totally split in K_g");
    bool hsplit = false;
    rep.h_roots = distinct_linear_roots_mod_p(K.h(), pl, hsplit);
    if (!hsplit)
        throw certificate_error("refined_eliminate: p splits in K_g but h does not split mod p (embedding certificate violated)");

    auto eval_qpoly_mod = [&](const QPoly& poly, long x) -> long {
        long acc = 0;
        for (size_t i = poly.c.size(); i-- > 0;) {
            const Rat& cf = poly.c[i];
            Int den = cf.get_den() % pl;
            if (den == 0) throw certificate_error("refined_eliminate: coefficient denominator not invertible mod p");
            Int num = cf.get_num() % pl;
            long denl = den.get_si();
            if (denl < 0) denl += pl;
            long numl = num.get_si();
            if (numl < 0) numl += pl;
            long dinv = 1, base = denl % pl, e = pl - 2;
            while (e) {
                if (e & 1) dinv = static_cast<long>((__int128)dinv * base % pl);
                base = static_cast<long>((__int128)base * base % pl);
                e >>= 1;
            }
            acc = static_cast<long>(((__int128)acc * x + (__int128)numl * dinv) % pl);
        }
        return acc;
    };

    // pair P_j with the p_i whose root is omega_embedding(rho_j) mod p
    std::vector<int> pair_of(rep.minpoly_roots.size(), -1);
    for (size_t j = 0; j < rep.minpoly_roots.size(); ++j) {
        long val = eval_qpoly_mod(fx.omega_embedding, rep.minpoly_roots[j]);
        for (size_t i = 0; i < rep.h_roots.size(); ++i)
            if (rep.h_roots[i] == val) pair_of[j] = static_cast<int>(i);
        if (pair_of[j] < 0)
            throw certificate_error("refined_eliminate: residue pairing mismatch (omega image is not a root of h mod p)");
    }

    PrimeSplitting split = K.split_prime(q);
    Int Qf = ipow(Int(q), static_cast<unsigned long>(split.f));
    int variant;  // 1 plain, 2 squared, 3 sign-flipped
    switch (mode) {
        case RefinedCase::plain:
            variant = (Qf % 4 == 1) ? 1 : 2;
            break;
        case RefinedCase::both_twists:
            variant = (Qf % 4 == 1 && Qf % r == 1) ? 1 : 2;
            break;
        case RefinedCase::chi_r:
        default:
            if (Qf % 4 == 3) variant = 2;
            else if (Qf % r == r - 1) variant = 3;
            else variant = 1;
            break;
    }
    rep.variant = variant;

    size_t npairs = rep.minpoly_roots.size();
    std::vector<RefinedPairOutcome> pairs(npairs);
    for (size_t j = 0; j < npairs; ++j) {
        pairs[j].j = static_cast<int>(j);
        pairs[j].i = pair_of[j];
    }

    // multiplicative screen: classes with q | x^r + y^r force level raising
    long target = Int((Qf + 1) % pl).get_si();
    for (size_t j = 0; j < npairs; ++j) {
        bool screen_pass = true;
        std::string wit;
        for (int lab = 0; lab < split.n_primes && screen_pass; ++lab) {
            long a = eval_qpoly_mod(eigenvalue_at(fx, q, lab), rep.minpoly_roots[j]);
            if (static_cast<long>((__int128)a * a % pl) != static_cast<long>((__int128)target * target % pl)) {
                screen_pass = false;
                std::ostringstream os;
                os << "level-raising congruence fails at label " << lab;
                wit = os.str();
            }
        }
        if (screen_pass) {
            pairs[j].accepted = true;
            pairs[j].witness = "multiplicative classes pass the level-raising screen";
        } else if (pairs[j].witness.empty()) {
            pairs[j].witness = wit;
        }
    }

    for (long x = 0; x < q; ++x) {
        for (long y = x; y < q; ++y) {
            Int pw = ipow(Int(x), static_cast<unsigned long>(r)) + ipow(Int(y), static_cast<unsigned long>(r));
            if (pw % q == 0) continue;
            TraceSet ts = cache.get(K, x, y, q, workers);
            for (size_t ui = 0; ui < ts.elements.size(); ++ui) {
                for (size_t j = 0; j < npairs; ++j) {
                    if (pairs[j].accepted) continue;
                    int i = pair_of[j];
                    bool all_match = true;
                    int fail_sigma = 0;
                    for (int sj = 1; sj <= K.g() && all_match; ++sj) {
                        KElem su = K.galois_apply(sj, ts.elements[ui]);
                        long lhs = eval_qpoly_mod(su.poly(), rep.h_roots[static_cast<size_t>(i)]);
                        int lab = split.sigma_label[static_cast<size_t>(sj - 1)][0];
                        long rhs = eval_qpoly_mod(eigenvalue_at(fx, q, lab), rep.minpoly_roots[j]);
                        bool match;
                        if (variant == 1) match = (lhs == rhs);
                        else if (variant == 2)
                            match = (static_cast<long>((__int128)lhs * lhs % pl) ==
                                     static_cast<long>((__int128)rhs * rhs % pl));
                        else match = ((lhs + rhs) % pl == 0);
                        if (!match) {
                            all_match = false;
                            fail_sigma = sj;
                        }
                    }
                    if (all_match) {
                        pairs[j].accepted = true;
                        std::ostringstream os;
                        os << "accepted by class (" << x << "," << y << ") trace element " << ui;
                        pairs[j].witness = os.str();
                    } else if (pairs[j].witness.empty()) {
                        std::ostringstream os;
                        os << "first refutation at class (" << x << "," << y << ") via sigma_" << fail_sigma;
                        pairs[j].witness = os.str();
                    }
                }
            }
        }
    }

    rep.pairs = pairs;
    rep.reject = true;
    for (const auto& pr : pairs)
        if (pr.accepted) rep.reject = false;
    return rep;
}

}  // namespace rrp
