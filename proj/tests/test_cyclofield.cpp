#include <random>

#include "doctest.h"
#include "rrp/cyclofield.hpp"
#include "rrp/errors.hpp"
#include "rrp/finitefield.hpp"

using namespace rrp;

TEST_SUITE_BEGIN("cyclofield");

TEST_CASE("minimal polynomials for small r") {
    CHECK(CycloField::minimal_poly(3) == ZPoly::from_longs({1, 1}));        // x+1
    CHECK(CycloField::minimal_poly(5) == ZPoly::from_longs({-1, 1, 1}));    // x^2+x-1
    CHECK(CycloField::minimal_poly(7) == ZPoly::from_longs({-1, -2, 1, 1}));
    CHECK_THROWS_AS(CycloField::minimal_poly(9), std::invalid_argument);
    CHECK_THROWS_AS(CycloField::minimal_poly(2), std::invalid_argument);
}

TEST_CASE("x h(x^2+2) matches the curve polynomials for r=3,5") {
    for (int r : {3, 5}) {
        ZPoly h = CycloField::minimal_poly(r);
        ZPoly lhs = ZPoly::from_longs({0, 1}) * compose(h, ZPoly::from_longs({2, 0, 1}));
        if (r == 3) CHECK(lhs == ZPoly::from_longs({0, 3, 0, 1}));
        if (r == 5) CHECK(lhs == ZPoly::from_longs({0, 5, 0, 5, 0, 1}));
    }
}

TEST_CASE("h = (x-2)^g mod r for every r <= 23") {
    for (int r : {3, 5, 7, 11, 13, 17, 19, 23}) {
        CycloField K(r);
        ZPoly target = zp_pow(ZPoly::from_longs({-2, 1}), static_cast<unsigned long>(K.g()));
        ZPoly diff = K.h() - target;
        for (const Int& c : diff.c) CHECK(c % r == 0);
    }
}

TEST_CASE("eisenstein shape of h(x^2+2)") {
    for (int r : {3, 5, 7, 11, 13}) {
        CycloField K(r);
        ZPoly comp = compose(K.h(), ZPoly::from_longs({2, 0, 1}));
        CHECK(comp.coeff(0) == r);
        for (long i = 0; i < comp.degree(); ++i) CHECK(comp.coeff(i) % r == 0);
        CHECK(comp.lc() == 1);
    }
}

TEST_CASE("galois action: sigma_2(w) = w^2 - 2 for r=5 and group law") {
    CycloField K(5);
    KElem w = K.gen();
    KElem img = K.galois_apply(2, w);
    CHECK(img == K.sub(K.mul(w, w), K.from_rat(Rat(2))));
    // h(sigma_2(w)) = 0
    KElem acc = K.zero();
    for (long i = K.h().degree(); i >= 0; --i) {
        acc = K.mul(acc, img);
        acc = K.add(acc, K.from_rat(Rat(K.h().coeff(i))));
    }
    CHECK(acc == K.zero());
    // 2*2 = 4 = -1 in (Z/5)*, so sigma_2 has order 2
    CHECK(K.galois_mul(2, 2) == 1);
    CHECK(K.galois_apply(2, img) == w);
}

TEST_CASE("galois action is a group action on random elements") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coeff(-5, 5);
    for (int r : {7, 11, 13}) {
        CycloField K(r);
        for (int it = 0; it < 10; ++it) {
            std::vector<Rat> c(static_cast<size_t>(K.g()));
            for (auto& x : c) x = coeff(rng);
            KElem u = K.from_coeffs(c);
            for (int j = 1; j <= K.g(); ++j)
                for (int k = 1; k <= K.g(); ++k)
                    CHECK(K.galois_apply(j, K.galois_apply(k, u)) == K.galois_apply(K.galois_mul(j, k), u));
        }
    }
}

TEST_CASE("identity automorphism") {
    CycloField K(11);
    KElem u = K.from_coeffs({Rat(1), Rat(-2), Rat(3), Rat(0), Rat(5)});
    CHECK(K.galois_apply(1, u) == u);
}

TEST_CASE("norm and trace basics") {
    CycloField K(5);
    CHECK(K.norm(K.one()) == 1);
    CHECK(K.trace(K.one()) == K.g());
    KElem w = K.gen();
    CHECK(K.norm(w) == -1);
    CHECK(K.trace(w) == -1);
    CHECK(K.norm(K.zero()) == 0);
}

TEST_CASE("norm multiplicative, trace additive, galois invariant (random)") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int r : {5, 7, 11}) {
        CycloField K(r);
        for (int it = 0; it < 8; ++it) {
            std::vector<Rat> c1(static_cast<size_t>(K.g())), c2(static_cast<size_t>(K.g()));
            for (auto& x : c1) x = coeff(rng);
            for (auto& x : c2) x = coeff(rng);
            KElem u = K.from_coeffs(c1), v = K.from_coeffs(c2);
            CHECK(K.norm(K.mul(u, v)) == K.norm(u) * K.norm(v));
            CHECK(K.trace(K.add(u, v)) == K.trace(u) + K.trace(v));
            CHECK(K.norm(u) == K.norm_by_product(u));
            for (int j = 1; j <= K.g(); ++j) {
                CHECK(K.norm(K.galois_apply(j, u)) == K.norm(u));
                CHECK(K.trace(K.galois_apply(j, u)) == K.trace(u));
            }
        }
    }
}

TEST_CASE("prime splitting shapes") {
    CycloField K11(11);
    auto s = K11.split_prime(23);
    CHECK(s.f == 1);
    CHECK(s.n_primes == 5);
    CHECK(s.factors.size() == 5);

    auto s2 = K11.split_prime(2);
    CHECK(s2.f == 5);
    CHECK(s2.n_primes == 1);
    // residue field F_32; 31 not divisible by 11 feeds the irreducibility criterion
    CHECK((ipow(Int(2), 5) - 1) % 11 != 0);

    CycloField K5(5);
    auto s3 = K5.split_prime(3);
    CHECK(s3.f == 2);
    CHECK(s3.n_primes == 1);

    auto sr = K5.split_prime(5);
    CHECK(sr.ramified);
    CHECK(sr.factors.size() == 1);
}

TEST_CASE("splitting factors multiply back to h mod q and have equal degrees") {
    for (int r : {5, 7, 11, 13}) {
        CycloField K(r);
        for (long q : {2L, 3L, 7L, 23L, 29L}) {
            if (q == r) continue;
            auto s = K.split_prime(q);
            long degsum = 0;
            std::vector<uint32_t> prod{1};
            for (const auto& f : s.factors) {
                CHECK(static_cast<int>(f.size()) - 1 == s.f);
                degsum += static_cast<long>(f.size()) - 1;
                std::vector<uint32_t> ff(f.size());
                for (size_t i = 0; i < f.size(); ++i) ff[i] = static_cast<uint32_t>(f[i]);
                prod = pmod_mul(prod, ff, static_cast<uint32_t>(q));
            }
            CHECK(degsum == K.g());
            CHECK(prod == zpoly_mod_p(K.h(), static_cast<uint32_t>(q)));
        }
    }
}

TEST_CASE("galois permutation of labels is well-defined and matches field computation") {
    for (int r : {5, 7, 11}) {
        CycloField K(r);
        for (long q : {3L, 11L, 23L, 29L}) {
            if (q == r) continue;
            auto s = K.split_prime(q);
            for (int j = 1; j <= K.g(); ++j) {
                int jinv = K.galois_inverse(j);
                for (int lab = 0; lab < s.n_primes; ++lab) {
                    // root of factor lab in F_q[x]/(factor): the class of x
                    std::vector<uint32_t> mod(s.factors[static_cast<size_t>(lab)].size());
                    for (size_t i = 0; i < mod.size(); ++i) mod[i] = static_cast<uint32_t>(s.factors[static_cast<size_t>(lab)][i]);
                    FqField F(static_cast<uint32_t>(q), mod);
                    FqField::El root = F.gen();
                    FqField::El img = F.eval_zpoly(K.dickson(jinv), root);
                    // img must be a root of exactly one factor
                    int hits = 0, which = -1;
                    for (int k = 0; k < s.n_primes; ++k) {
                        ZPoly fk = ZPoly::from_longs(s.factors[static_cast<size_t>(k)]);
                        if (F.is_zero(F.eval_zpoly(fk, img))) {
                            ++hits;
                            which = k;
                        }
                    }
                    CHECK(hits == 1);
                    CHECK(which == s.sigma_label[static_cast<size_t>(j - 1)][static_cast<size_t>(lab)]);
                }
            }
            // the action is transitive across labels
            std::vector<bool> seen(static_cast<size_t>(s.n_primes), false);
            for (int j = 1; j <= K.g(); ++j) seen[static_cast<size_t>(s.sigma_label[static_cast<size_t>(j - 1)][0])] = true;
            for (bool hit : seen) CHECK(hit);
        }
    }
}

TEST_CASE("reduction mod primes") {
    CycloField K7(7);
    auto sr = K7.split_prime(7);
    // w -> 2 at the ramified prime
    auto red = K7.reduce_mod_prime(K7.gen(), sr, RAMIFIED_LABEL);
    CHECK(red == std::vector<long>{2});

    CycloField K11(11);
    auto s = K11.split_prime(23);
    for (int lab = 0; lab < s.n_primes; ++lab) {
        auto v = K11.reduce_mod_prime(K11.gen(), s, lab);
        CHECK(v.size() == 1);
        // the image is a root of the right factor: factor is x - v
        CHECK((v[0] + s.factors[static_cast<size_t>(lab)][0]) % 23 == 0);
    }

    // denominators must be invertible
    CycloField K5(5);
    auto s5 = K5.split_prime(3);
    KElem half = K5.from_rat(Rat(1, 3));
    CHECK_THROWS_AS(K5.reduce_mod_prime(half, s5, 0), unsupported_error);
    CHECK(K5.reduce_mod_prime(K5.from_rat(Rat(1, 2)), s5, 0)[0] == 2);  // 1/2 = 2 mod 3
}

TEST_CASE("residue degree is the order in the quotient group") {
    CycloField K(11);
    CHECK(K.residue_degree(23) == 1);
    CHECK(K.residue_degree(2) == 5);
    CycloField K5(5);
    CHECK(K5.residue_degree(3) == 2);
    CHECK(K5.residue_degree(11) == 1);
}

TEST_SUITE_END();
