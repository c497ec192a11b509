#ifndef RRP_ELIMINATION_HPP
#define RRP_ELIMINATION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrp/fixtures.hpp"
#include "rrp/frobenius.hpp"

namespace rrp {

// Nonempty subset of Gal(K/Q), as indices j in 1..g.
using GaloisSubset = std::vector<int>;

GaloisSubset full_galois(const CycloField& K);

enum class TwistMode { plain, chi_r };
enum class RefinedCase { plain, both_twists, chi_r };

// prod_{u in T_q} gcd_{s in S} |Norm(s(u) - a_(s(q)))|; the norm is taken over
// K_g, or over E_g at inert primes when the subfield shortcut applies.
Int bound_N(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S, const TraceSet& ts);

// gcd_{s in S} |Norm(a_(s(q))^2 - (N(q)+1)^2)|
Int bound_M(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S);

struct BoundBResult {
    Int value;
    Int M;
    int variant = 0;  // 1 = plain, 2 = squared, 3 = sign-flipped
    std::vector<std::pair<std::pair<long, long>, Int>> class_factors;
};

// M * prod over residue classes 0 <= x <= y < q with q not dividing x^r+y^r of
// the per-class gcd-of-norms factor; the variant is picked from
// (q^f mod 4, q^f mod r, twist mode).
BoundBResult bound_B(const NewformFixture& fx, const CycloField& K, long q, const GaloisSubset& S,
                     const Int& d, TwistMode mode, TraceSetCache& cache, int workers = 1);

struct FixtureSurvivors {
    std::string label;
    bool all_primes = false;  // every bound vanished (CM obstruction)
    std::vector<Int> survivors;
    bool eliminated = false;  // survivors within the configured small-prime set
    std::map<long, Int> B_per_q;
    std::map<long, Int> M_per_q;
    std::vector<std::string> notes;
};

struct BoundReport {
    std::vector<FixtureSurvivors> fixtures;
};

struct SurvivorConfig {
    std::vector<Int> small_primes;  // presentation-only filter, default {2, 3, r}
};

BoundReport survivors(const std::vector<NewformFixture>& fxs, const CycloField& K,
                      const std::vector<long>& q_list, const GaloisSubset& S, const Int& d,
                      TwistMode mode, TraceSetCache& cache, int workers = 1,
                      std::optional<SurvivorConfig> config = std::nullopt);

struct RefinedPairOutcome {
    int i = 0, j = 0;  // indices of the paired residue maps (p_i in K, P_j in K_g)
    bool accepted = false;
    std::string witness;  // accepting class / rejecting sigma and label
};

struct RefinedReport {
    Int p;
    long q = 0;
    bool reject = false;  // true when every consistent pair is refuted
    int variant = 0;
    std::vector<RefinedPairOutcome> pairs;
    std::vector<long> h_roots;        // roots of h mod p, ascending
    std::vector<long> minpoly_roots;  // roots of field_minpoly mod p, ascending
};

// Mod-p congruence testing per prime of K_g above p (p totally split in K_g).
RefinedReport refined_eliminate(const NewformFixture& fx, const CycloField& K, const Int& p, long q,
                                RefinedCase mode, const Int& d, TraceSetCache& cache, int workers = 1);

}  // namespace rrp

#endif
