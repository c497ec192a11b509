#include "rrp/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rrp/errors.hpp"
#include "rrp/finitefield.hpp"

namespace rrp {

namespace {

using nlohmann::json;

Rat parse_rat(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (!j.is_string()) throw certificate_error("fixture schema: numbers must be decimal strings");
    std::string s = j.get<std::string>();
    Rat out;
    if (mpq_set_str(out.get_mpq_t(), s.c_str(), 10) != 0)
        throw certificate_error("fixture schema: malformed number '" + s + "'");
    out.canonicalize();
    return out;
}

Int parse_int(const json& j) {
    Rat r = parse_rat(j);
    if (r.get_den() != 1) throw certificate_error("fixture schema: expected an integer, found a fraction");
    return r.get_num();
}

QPoly parse_qpoly(const json& j) {
    if (!j.is_array()) throw certificate_error("fixture schema: polynomial must be an array");
    std::vector<Rat> c;
    for (const auto& e : j) c.push_back(parse_rat(e));
    return QPoly(std::move(c));
}

ZPoly parse_zpoly(const json& j) {
    if (!j.is_array()) throw certificate_error("fixture schema: polynomial must be an array");
    std::vector<Int> c;
    for (const auto& e : j) c.push_back(parse_int(e));
    return ZPoly(std::move(c));
}

json int_str(const Int& v) { return v.get_str(); }

json qpoly_json(const QPoly& p) {
    json out = json::array();
    for (const Rat& x : p.c) {
        if (x.get_den() == 1) out.push_back(x.get_num().get_str());
        else out.push_back(x.get_num().get_str() + "/" + x.get_den().get_str());
    }
    return out;
}

json zpoly_json(const ZPoly& p) {
    json out = json::array();
    for (const Int& x : p.c) out.push_back(int_str(x));
    return out;
}

std::map<EigenKey, QPoly> parse_eigen(const json& j) {
    std::map<EigenKey, QPoly> out;
    if (!j.is_array()) throw certificate_error("fixture schema: eigenvalues must be an array");
    for (const auto& e : j) {
        EigenKey key;
        key.q = static_cast<long>(parse_int(e.at("q")).get_si());
        key.label = static_cast<int>(parse_int(e.at("label")).get_si());
        out[key] = parse_qpoly(e.at("coeffs"));
    }
    return out;
}

json eigen_json(const std::map<EigenKey, QPoly>& eigen) {
    json out = json::array();
    for (const auto& [key, val] : eigen) {
        json e;
        e["q"] = key.q;
        e["label"] = key.label;
        e["coeffs"] = qpoly_json(val);
        out.push_back(e);
    }
    return out;
}

// mod-p irreducibility witness certifies irreducibility over Q
bool has_irreducibility_witness(const ZPoly& f) {
    static const long witnesses[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                     43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (long p : witnesses) {
        if (f.lc() % p == 0) continue;
        auto fb = zpoly_mod_p(f, static_cast<uint32_t>(p));
        if (static_cast<long>(fb.size()) - 1 != f.degree()) continue;
        if (pmod_is_irreducible(fb, static_cast<uint32_t>(p))) return true;
    }
    return false;
}

}  // namespace

void validate_fixture(const NewformFixture& fx, const CycloField& K, const FixtureLoadOptions& opt) {
    if (fx.r != K.r()) throw certificate_error("fixture '" + fx.label + "': declared r differs from the field");
    const ZPoly& f = fx.field_minpoly;
    if (f.degree() < 1 || f.lc() != 1)
        throw certificate_error("fixture '" + fx.label + "': field_minpoly must be monic of positive degree");
    if (f.degree() % K.g() != 0)
        throw certificate_error("fixture '" + fx.label + "': degree of K_g is not divisible by g");
    if (resultant(f, derivative(f)) == 0)
        throw certificate_error("fixture '" + fx.label + "': field_minpoly is not squarefree");
    if (!opt.trust_irreducible && !has_irreducibility_witness(f))
        throw certificate_error("fixture '" + fx.label +
                                "': no small-prime irreducibility witness for field_minpoly (pass the trust flag to override)");

    // K embeds: h(omega_embedding) = 0 mod field_minpoly
    QPoly fm = QPoly::from_z(f);
    QPoly emb = mod_monic(fx.omega_embedding, fm);
    QPoly acc;
    for (long i = K.h().degree(); i >= 0; --i) {
        acc = mod_monic(acc * emb, fm);
        acc = acc + QPoly({std::vector<Rat>{Rat(K.h().coeff(i))}});
    }
    acc.trim();
    if (!acc.is_zero())
        throw certificate_error("fixture '" + fx.label + "': omega_embedding is not a root of h (K does not embed)");

    // eigenvalue keys must use canonical labels for the declared r
    std::map<long, int> nprimes;
    for (const auto& [key, val] : fx.eigen) {
        if (key.q <= 2 || key.q == K.r())
            throw certificate_error("fixture '" + fx.label + "': eigenvalue at an unsupported prime");
        auto it = nprimes.find(key.q);
        if (it == nprimes.end()) it = nprimes.emplace(key.q, K.split_prime(key.q).n_primes).first;
        if (key.label < 0 || key.label >= it->second)
            throw certificate_error("fixture '" + fx.label + "': eigenvalue label does not match the canonical labels");
        if (val.degree() >= f.degree())
            throw certificate_error("fixture '" + fx.label + "': eigenvalue coordinates exceed the field degree");
    }

    if (fx.subfield) {
        const ZPoly& em = fx.subfield->minpoly;
        if (em.degree() < 1 || em.lc() != 1)
            throw certificate_error("fixture '" + fx.label + "': subfield minpoly must be monic");
        if (em.degree() * K.g() != f.degree())
            throw certificate_error("fixture '" + fx.label + "': subfield degree must be deg(K_g)/g");
    }
}

std::vector<NewformFixture> load_fixtures(const std::string& path, const CycloField& K,
                                          const FixtureLoadOptions& opt) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_fixtures: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("load_fixtures: JSON parse error: ") + e.what());
    }
    std::vector<NewformFixture> out;
    if (!doc.contains("fixtures") || !doc["fixtures"].is_array())
        throw certificate_error("fixture schema: missing 'fixtures' array");
    for (const auto& e : doc["fixtures"]) {
        NewformFixture fx;
        fx.label = e.value("label", "");
        fx.r = e.at("r").get<int>();
        if (e.contains("level")) {
            fx.level.e2 = e["level"].value("e2", 2);
            fx.level.er = e["level"].value("er", 2);
            if (e["level"].contains("nd_primes"))
                for (const auto& p : e["level"]["nd_primes"]) fx.level.nd_primes.push_back(p.get<long>());
        }
        fx.field_minpoly = parse_zpoly(e.at("field_minpoly"));
        fx.omega_embedding = parse_qpoly(e.at("omega_embedding"));
        fx.eigen = parse_eigen(e.at("eigenvalues"));
        if (e.contains("flags")) {
            fx.cm = e["flags"].value("cm", false);
            fx.galois_stable = e["flags"].value("galois_stable", false);
        }
        if (e.contains("base_change_subfield_degree") && !e["base_change_subfield_degree"].is_null())
            fx.base_change_subfield_degree = e["base_change_subfield_degree"].get<int>();
        if (e.contains("subfield_Eg") && !e["subfield_Eg"].is_null()) {
            SubfieldEg sf;
            sf.minpoly = parse_zpoly(e["subfield_Eg"].at("minpoly"));
            sf.eigen = parse_eigen(e["subfield_Eg"].at("eigenvalues"));
            fx.subfield = std::move(sf);
        }
        validate_fixture(fx, K, opt);
        out.push_back(std::move(fx));
    }
    return out;
}

void save_fixtures(const std::string& path, const std::vector<NewformFixture>& fxs) {
    json doc;
    doc["fixtures"] = json::array();
    for (const auto& fx : fxs) {
        json e;
        e["label"] = fx.label;
        e["r"] = fx.r;
        e["level"] = {{"e2", fx.level.e2}, {"er", fx.level.er}, {"nd_primes", fx.level.nd_primes}};
        e["field_minpoly"] = zpoly_json(fx.field_minpoly);
        e["omega_embedding"] = qpoly_json(fx.omega_embedding);
        e["eigenvalues"] = eigen_json(fx.eigen);
        e["flags"] = {{"cm", fx.cm}, {"galois_stable", fx.galois_stable}};
        if (fx.base_change_subfield_degree) e["base_change_subfield_degree"] = *fx.base_change_subfield_degree;
        if (fx.subfield) {
            e["subfield_Eg"] = {{"minpoly", zpoly_json(fx.subfield->minpoly)},
                                {"eigenvalues", eigen_json(fx.subfield->eigen)}};
        }
        doc["fixtures"].push_back(e);
    }
    std::ofstream outp(path);
    if (!outp) throw std::invalid_argument("save_fixtures: cannot write " + path);
    outp << doc.dump(1) << "\n";
}

NewformFixture cm_fixture(const CycloField& K, const std::vector<long>& q_list, int workers) {
    NewformFixture fx;
    std::ostringstream lab;
    lab << "cm-trivial-solution-r" << K.r();
    fx.label = lab.str();
    fx.r = K.r();
    fx.level.e2 = 2;
    fx.level.er = 2;
    fx.field_minpoly = K.h();
    // identity embedding w -> w (reduced mod h; for r = 3 this is the scalar -1)
    fx.omega_embedding = K.gen().poly();
    fx.cm = true;
    for (long q : q_list) {
        if (q == 2 || q == K.r() || q < 2)
            throw std::invalid_argument("cm_fixture: q must be coprime to 2r");
        TraceSet ts = trace_set(K, Int(0), Int(1), q, workers);
        for (int lab2 = 0; lab2 < ts.split.n_primes; ++lab2)
            fx.eigen[EigenKey{q, lab2}] = ts.elements[static_cast<size_t>(ts.label_elem[static_cast<size_t>(lab2)])].poly();
    }
    return fx;
}

}  // namespace rrp
