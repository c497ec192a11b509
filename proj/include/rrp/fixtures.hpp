#ifndef RRP_FIXTURES_HPP
#define RRP_FIXTURES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrp/cyclofield.hpp"
#include "rrp/frobenius.hpp"
#include "rrp/intpoly.hpp"
#include "rrp/localdata.hpp"

namespace rrp {

struct EigenKey {
    long q = 0;
    int label = 0;
    bool operator<(const EigenKey& o) const { return q != o.q ? q < o.q : label < o.label; }
    bool operator==(const EigenKey& o) const { return q == o.q && label == o.label; }
};

// Optional subfield data for the inert-prime norm shortcut: E_g with
// [E_g : Q] = [K_g : K] and eigenvalues rewritten in E_g coordinates.
struct SubfieldEg {
    ZPoly minpoly;
    std::map<EigenKey, QPoly> eigen;
};

struct NewformFixture {
    std::string label;
    int r = 0;
    SerreLevel level;
    ZPoly field_minpoly;      // monic integral, defines K_g
    QPoly omega_embedding;    // image of w in the K_g power basis
    std::map<EigenKey, QPoly> eigen;  // a_(q,label) as K_g coordinate vectors
    bool cm = false;
    bool galois_stable = false;
    std::optional<int> base_change_subfield_degree;
    std::optional<SubfieldEg> subfield;

    long degree() const { return field_minpoly.degree(); }
};

struct FixtureLoadOptions {
    bool trust_irreducible = false;  // accept field_minpoly without a mod-p witness
};

// Verifies all fixture invariants (monic squarefree certified-irreducible
// field polynomial, K-embedding certificate, degree divisible by g, canonical
// label ranges); throws certificate_error naming the violated invariant.
void validate_fixture(const NewformFixture& fx, const CycloField& K, const FixtureLoadOptions& opt = {});

std::vector<NewformFixture> load_fixtures(const std::string& path, const CycloField& K,
                                          const FixtureLoadOptions& opt = {});
void save_fixtures(const std::string& path, const std::vector<NewformFixture>& fxs);

// Fixture of the CM form attached to the trivial solution (0,1): K_g = K,
// eigenvalues from the trace sets of y^2 = x^r + 1.
NewformFixture cm_fixture(const CycloField& K, const std::vector<long>& q_list, int workers = 1);

}  // namespace rrp

#endif
