#ifndef RRP_LOCALDATA_HPP
#define RRP_LOCALDATA_HPP

#include <optional>
#include <string>
#include <vector>

#include "rrp/cyclofield.hpp"
#include "rrp/intpoly.hpp"

namespace rrp {

enum class RedType { good, multiplicative, additive };

enum class InertialType {
    unramified,
    steinberg,
    principal_series,
    supercuspidal,
    twist_of_steinberg,
    not_applicable
};

const char* to_string(RedType t);
const char* to_string(InertialType t);

struct ReductionReport {
    long q = 0;
    RedType type = RedType::good;
    int conductor_exponent = 0;
    std::optional<long> inertia_order;  // empty = unknown / infinite
    InertialType inertial = InertialType::unramified;
};

// Reduction/conductor data of J_r(a,b) over K at the rational prime q.
// For q = 2 the parity a = 0 mod 2, b = 1 mod 4 is required.
ReductionReport classify_prime(const CycloField& K, const Int& a, const Int& b, long q);

struct SerreLevel {
    int e2 = 2;                   // exponent at every prime above 2
    int er = 2;                   // exponent at the unique prime above r (1 on the twisted pathway)
    std::vector<long> nd_primes;  // rational primes dividing d, coprime to 2r
};

SerreLevel serre_level(int r, const Int& d, bool r_divides_a_plus_b);

struct CongruenceCheck {
    std::string name;
    bool pass = false;
};

struct CongruenceReport {
    int r = 0;
    Int a, b;
    std::vector<CongruenceCheck> checks;
    bool all_pass() const;
};

// Shifted-model coefficient congruences for r | a+b (coefficients of H(x + (a-b))).
CongruenceReport semistable_congruences(int r, const Int& a, const Int& b);

// v_q(a^r + b^r) = 0 mod p; requires q coprime to 2r.
bool finiteness_check(int r, const Int& a, const Int& b, const Int& p, long q);

enum class IrredVerdict { irreducible_all_odd_p, conditional, inconclusive };

struct IrredReport {
    IrredVerdict verdict = IrredVerdict::inconclusive;
    std::string criterion;
    Int m = 0;  // (2^f2 - 1)(r - 1)
    std::vector<Int> candidate_primes;
    std::vector<std::string> unchecked_assumptions;
};

// Irreducibility criteria for the mod-p representations; units (when the
// class-field pathway is needed) are caller-supplied and verified to have
// norm +-1.
IrredReport irreducibility_report(const CycloField& K, const Int& a, const Int& b,
                                  const std::vector<KElem>& units);

}  // namespace rrp

#endif
