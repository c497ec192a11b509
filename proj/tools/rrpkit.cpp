// rrpkit: exact-arithmetic toolkit for Fermat equations of signature (r,r,p)
// built on the Frey hyperelliptic curves y^2 = H_r(x; a,b) + b^r - a^r.

#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrp/curves.hpp"
#include "rrp/cyclofield.hpp"
#include "rrp/elimination.hpp"
#include "rrp/errors.hpp"
#include "rrp/fixtures.hpp"
#include "rrp/freypoly.hpp"
#include "rrp/frobenius.hpp"
#include "rrp/localdata.hpp"

using nlohmann::json;
using namespace rrp;

namespace {

constexpr const char* RRPKIT_VERSION = "1.0.0";

std::string timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json artifact_shell(const std::string& command, const json& config) {
    json a;
    a["tool"] = "rrpkit";
    a["version"] = RRPKIT_VERSION;
    a["command"] = command;
    a["config"] = config;
    a["generated_at"] = timestamp();  // excluded from reproducibility comparisons
    return a;
}

void emit(const json& artifact, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << artifact.dump(1) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write " + out_path);
        out << artifact.dump(1) << "\n";
        std::cout << "artifact written to " << out_path << std::endl;
    }
}

json zpoly_json(const ZPoly& p) {
    json out = json::array();
    for (const Int& c : p.c) out.push_back(c.get_str());
    return out;
}

json kelem_json(const KElem& e) {
    json out = json::array();
    for (const Rat& c : e.c) {
        if (c.get_den() == 1) out.push_back(c.get_num().get_str());
        else out.push_back(c.get_num().get_str() + "/" + c.get_den().get_str());
    }
    return out;
}

GaloisSubset parse_subset(const std::string& s, const CycloField& K) {
    if (s.empty() || s == "full") return full_galois(K);
    GaloisSubset out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

// semicolon-separated list of subset strategies, e.g. "full;1;1,2"
std::vector<std::pair<std::string, GaloisSubset>> parse_strategies(const std::string& s, const CycloField& K) {
    std::vector<std::pair<std::string, GaloisSubset>> out;
    std::stringstream ss(s.empty() ? std::string("full") : s);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) out.push_back({tok, parse_subset(tok, K)});
    if (out.empty()) out.push_back({"full", full_galois(K)});
    return out;
}

std::vector<long> parse_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
    return out;
}

json trace_set_json(const TraceSet& ts) {
    json t;
    t["q"] = ts.q;
    t["f"] = ts.f;
    t["Q"] = ts.Q.get_str();
    t["l_polynomial"] = zpoly_json(ZPoly(ts.lp.c));
    t["prime_labels"] = json::array();
    for (const auto& f : ts.split.factors) t["prime_labels"].push_back(f);
    t["elements"] = json::array();
    for (const KElem& e : ts.elements) t["elements"].push_back(kelem_json(e));
    t["assignment"] = json::array();
    for (size_t lab = 0; lab < ts.label_elem.size(); ++lab)
        t["assignment"].push_back({{"label", lab}, {"element", ts.label_elem[lab]}});
    return t;
}

int run_verify(int r_max, const std::string& out_path) {
    json config{{"r_max", r_max}};
    json art = artifact_shell("verify", config);
    json results = json::array();
    bool all = true;
    for (int r = 3; r <= r_max; ++r) {
        if (r % 2 == 0) continue;
        Int rz(r);
        if (mpz_probab_prime_p(rz.get_mpz_t(), 30) == 0) continue;
        IdentityReport rep = identity_suite(r);
        json jr{{"r", r}, {"pass", rep.all_pass()}};
        jr["checks"] = json::array();
        for (const auto& c : rep.checks) {
            jr["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
            if (!c.pass) all = false;
        }
        std::cout << "r=" << r << (rep.all_pass() ? "  all identities hold" : "  FAILURE") << std::endl;
        results.push_back(jr);
    }
    art["results"] = results;
    art["all_pass"] = all;
    emit(art, out_path);
    if (!all) throw certificate_error("identity suite failed");
    return 0;
}

int run_curve(int r, const std::string& a_s, const std::string& b_s, const std::string& out_path) {
    Int a(a_s), b(b_s);
    json config{{"r", r}, {"a", a_s}, {"b", b_s}};
    json art = artifact_shell("curve", config);
    auto model = kraus_curve(r, a, b);
    Int disc = curve_discriminant(r, a, b);
    std::cout << "C_" << r << "(" << a << "," << b << "): y^2 = " << model.f.str() << "\n";
    std::cout << "genus " << model.genus << ", discriminant " << disc << std::endl;
    json res;
    res["model"] = zpoly_json(model.f);
    res["model_pretty"] = model.f.str();
    res["genus"] = model.genus;
    res["discriminant"] = disc.get_str();
    if (a != 0 && b != 0) {
        auto sp = specialization(r, a, b);
        auto L = legendre_companion(r, a, b);
        res["t0"] = sp.t0.get_num().get_str() + "/" + sp.t0.get_den().get_str();
        res["legendre_j"] = L.j.get_num().get_str() + "/" + L.j.get_den().get_str();
        res["legendre_model"] = zpoly_json(L.integral_model);
        std::cout << "t0 = " << sp.t0 << ", j(L(t0)) = " << L.j << std::endl;
    }
    art["results"] = res;
    emit(art, out_path);
    return 0;
}

int run_classify(int r, const std::string& a_s, const std::string& b_s, const std::string& d_s,
                 const std::string& units_path, const std::string& out_path) {
    Int a(a_s), b(b_s), d(d_s);
    json config{{"r", r}, {"a", a_s}, {"b", b_s}, {"d", d_s}, {"units", units_path}};
    json art = artifact_shell("classify", config);
    CycloField K(r);

    std::vector<KElem> units;
    if (!units_path.empty()) {
        std::ifstream in(units_path);
        if (!in) throw std::invalid_argument("cannot open units file " + units_path);
        json uj;
        in >> uj;
        for (const auto& uvec : uj) {
            std::vector<Rat> c;
            for (const auto& x : uvec) {
                if (x.is_number_integer()) c.push_back(Rat(static_cast<long>(x.get<long long>())));
                else c.push_back(Rat(x.get<std::string>()));
            }
            c.resize(static_cast<size_t>(K.g()), Rat(0));
            units.push_back(K.from_coeffs(c));
        }
    }

    // primes to classify: 2, r, and the odd primes dividing a^r + b^r
    Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
    std::vector<long> primes{2, static_cast<long>(r)};
    {
        Int rest = abs(s);
        while (rest % 2 == 0) rest /= 2;
        while (rest % r == 0) rest /= r;
        for (long p = 3; Int(p) * p <= rest; p += 2)
            if (rest % p == 0) {
                primes.push_back(p);
                while (rest % p == 0) rest /= p;
            }
        if (rest > 1) {
            if (!rest.fits_slong_p()) throw unsupported_error("classify: prime factor of a^r+b^r too large");
            primes.push_back(rest.get_si());
        }
    }

    json rows = json::array();
    std::cout << "q\ttype\texponent\tinertial\tinertia order\n";
    for (long q : primes) {
        auto rep = classify_prime(K, a, b, q);
        json row{{"q", q},
                 {"type", to_string(rep.type)},
                 {"conductor_exponent", rep.conductor_exponent},
                 {"inertial_type", to_string(rep.inertial)}};
        if (rep.inertia_order) row["inertia_order"] = *rep.inertia_order;
        else row["inertia_order"] = "unknown";
        rows.push_back(row);
        std::cout << q << "\t" << to_string(rep.type) << "\t" << rep.conductor_exponent << "\t"
                  << to_string(rep.inertial) << "\t"
                  << (rep.inertia_order ? std::to_string(*rep.inertia_order) : std::string("?")) << "\n";
    }

    bool r_div = ((a + b) % r) == 0;
    auto lvl = serre_level(r, d, r_div);
    json jl{{"e2", lvl.e2}, {"er", lvl.er}, {"nd_primes", lvl.nd_primes}};
    std::cout << "serre level: q_2^" << lvl.e2 << " * q_r^" << lvl.er << " * n_d with n_d primes [";
    for (size_t i = 0; i < lvl.nd_primes.size(); ++i) std::cout << (i ? "," : "") << lvl.nd_primes[i];
    std::cout << "]" << std::endl;

    auto irr = irreducibility_report(K, a, b, units);
    json ji;
    ji["verdict"] = irr.verdict == IrredVerdict::irreducible_all_odd_p
                        ? "irreducible-all-odd-p"
                        : (irr.verdict == IrredVerdict::conditional ? "conditional" : "inconclusive");
    ji["criterion"] = irr.criterion;
    ji["m"] = irr.m.get_str();
    ji["candidate_primes"] = json::array();
    for (const Int& p : irr.candidate_primes) ji["candidate_primes"].push_back(p.get_str());
    ji["unchecked_assumptions"] = irr.unchecked_assumptions;
    std::cout << "irreducibility: " << ji["verdict"].get<std::string>() << " (" << irr.criterion << ")"
              << std::endl;

    art["results"] = {{"local_data", rows}, {"serre_level", jl}, {"irreducibility", ji}};
    emit(art, out_path);
    return 0;
}

int run_traces(int r, const std::string& a_s, const std::string& b_s, long q, long q_max, int workers,
               const std::string& out_path) {
    Int a(a_s), b(b_s);
    json config{{"r", r}, {"a", a_s}, {"b", b_s}, {"workers", workers}};
    if (q > 0) config["q"] = q;
    if (q_max > 0) config["q_max"] = q_max;
    json art = artifact_shell("traces", config);
    CycloField K(r);
    json sets = json::array();
    std::vector<long> qs;
    if (q > 0) qs.push_back(q);
    if (q_max > 0) {
        Int s = ipow(a, static_cast<unsigned long>(r)) + ipow(b, static_cast<unsigned long>(r));
        for (long qq = 3; qq <= q_max; ++qq) {
            Int qz(qq);
            if (mpz_probab_prime_p(qz.get_mpz_t(), 30) == 0) continue;
            if (qq == r || s % qq == 0 || !trace_set_feasible(K, qq)) continue;
            qs.push_back(qq);
        }
    }
    if (qs.empty()) throw std::invalid_argument("traces: provide --q or --q-max");
    for (long qq : qs) {
        TraceSet ts = trace_set(K, a, b, qq, workers);
        sets.push_back(trace_set_json(ts));
        std::cout << "q=" << qq << " f=" << ts.f << " #T_q=" << ts.elements.size() << "\n";
    }
    art["results"] = sets;
    emit(art, out_path);
    return 0;
}

int run_cm_fixture(int r, const std::string& q_list, int workers, const std::string& out_path) {
    json config{{"r", r}, {"q_list", q_list}, {"workers", workers}};
    json art = artifact_shell("cm-fixture", config);
    CycloField K(r);
    auto qs = parse_list(q_list);
    NewformFixture fx = cm_fixture(K, qs, workers);
    std::string path = out_path.empty() ? ("cm-fixture-r" + std::to_string(r) + ".json") : out_path;
    save_fixtures(path, {fx});
    art["results"] = {{"fixture_path", path}, {"label", fx.label}, {"eigenvalue_count", fx.eigen.size()}};
    std::cout << art.dump(1) << std::endl;
    std::cout << "CM fixture with eigenvalues at " << qs.size() << " primes written to " << path << std::endl;
    return 0;
}

int run_eliminate(int r, const std::string& d_s, const std::string& fixtures_path, const std::string& q_list,
                  const std::string& subset, const std::string& twist, const std::string& a_s,
                  const std::string& b_s, bool trust_irr, bool n_only, int workers,
                  const std::string& out_path) {
    Int d(d_s);
    json config{{"r", r},          {"d", d_s},       {"fixtures", fixtures_path}, {"q_list", q_list},
                {"subset", subset}, {"twist", twist}, {"workers", workers}};
    json art = artifact_shell("eliminate", config);
    CycloField K(r);
    FixtureLoadOptions opt;
    opt.trust_irreducible = trust_irr;
    auto fxs = load_fixtures(fixtures_path, K, opt);
    auto qs = parse_list(q_list);
    auto strategies = parse_strategies(subset, K);
    TwistMode mode = (twist == "chi_r") ? TwistMode::chi_r : TwistMode::plain;
    TraceSetCache cache;  // shared across strategies: trace sets are subset-independent

    json jstrat = json::array();
    for (const auto& [sname, S] : strategies) {
        json jf = json::array();
        BoundReport rep;
        if (n_only) {
            if (a_s.empty() || b_s.empty())
                throw std::invalid_argument("--n-only needs --a and --b");
            for (const auto& fx : fxs) {
                FixtureSurvivors fs;
                fs.label = fx.label;
                for (long qq : qs) fs.M_per_q[qq] = bound_M(fx, K, qq, S);
                fs.notes.push_back("N/M-only run: residue-class B bounds skipped");
                rep.fixtures.push_back(std::move(fs));
            }
        } else {
            rep = survivors(fxs, K, qs, S, d, mode, cache, workers);
        }
        for (const auto& fs : rep.fixtures) {
            json e;
            e["label"] = fs.label;
            e["cm_obstruction"] = fs.all_primes;
            e["eliminated_up_to_small_primes"] = fs.eliminated;
            e["survivors"] = json::array();
            for (const Int& p : fs.survivors) e["survivors"].push_back(p.get_str());
            e["B"] = json::object();
            e["M"] = json::object();
            for (const auto& [qq, B] : fs.B_per_q) e["B"][std::to_string(qq)] = B.get_str();
            for (const auto& [qq, M] : fs.M_per_q) e["M"][std::to_string(qq)] = M.get_str();
            e["notes"] = fs.notes;
            jf.push_back(e);

            std::cout << "[" << sname << "] fixture " << fs.label << ":";
            if (n_only) {
                std::cout << " N/M bounds only\n";
                for (const auto& [qq, M] : fs.M_per_q) std::cout << "  M_" << qq << " = " << M.get_str() << "\n";
                continue;
            }
            if (fs.all_primes) {
                std::cout << " CM obstruction (all bounds vanish)";
            } else {
                std::cout << " survivors {";
                for (size_t i = 0; i < fs.survivors.size(); ++i)
                    std::cout << (i ? "," : "") << fs.survivors[i].get_str();
                std::cout << "}" << (fs.eliminated ? " (within the small-prime set)" : "");
            }
            std::cout << "\n";
            for (const auto& [qq, B] : fs.B_per_q) std::cout << "  B_" << qq << " = " << B.get_str() << "\n";
        }
        // solution-dependent N bounds when a residue pair is supplied
        json jn = json::array();
        if (!a_s.empty() && !b_s.empty()) {
            Int a(a_s), b(b_s);
            art["config"]["a"] = a_s;
            art["config"]["b"] = b_s;
            for (const auto& fx : fxs) {
                json e;
                e["label"] = fx.label;
                e["N"] = json::object();
                for (long qq : qs) {
                    TraceSet ts = cache.get(K, a.get_si(), b.get_si(), qq, workers);
                    Int n = bound_N(fx, K, qq, S, ts);
                    e["N"][std::to_string(qq)] = n.get_str();
                    std::cout << "[" << sname << "] fixture " << fx.label << ": N_" << qq << "(a=" << a_s
                              << ",b=" << b_s << ") = " << n.get_str() << "\n";
                }
                jn.push_back(e);
            }
        }
        json strat;
        strat["subset"] = sname;
        strat["fixtures"] = jf;
        if (!jn.empty()) strat["N"] = jn;
        jstrat.push_back(strat);
    }
    art["results"] = jstrat;
    emit(art, out_path);
    return 0;
}

int run_refined(int r, const std::string& d_s, const std::string& fixtures_path, const std::string& p_s,
                long q, const std::string& case_mode, const std::string& fixture_label, bool trust_irr,
                int workers, const std::string& out_path) {
    Int d(d_s), p(p_s);
    json config{{"r", r}, {"d", d_s},          {"fixtures", fixtures_path},        {"p", p_s},
                {"q", q}, {"case", case_mode}, {"fixture_label", fixture_label}};
    json art = artifact_shell("refined", config);
    CycloField K(r);
    FixtureLoadOptions opt;
    opt.trust_irreducible = trust_irr;
    auto fxs = load_fixtures(fixtures_path, K, opt);
    RefinedCase mode = RefinedCase::plain;
    if (case_mode == "both_twists") mode = RefinedCase::both_twists;
    else if (case_mode == "chi_r") mode = RefinedCase::chi_r;
    TraceSetCache cache;

    json results = json::array();
    for (const auto& fx : fxs) {
        if (!fixture_label.empty() && fx.label != fixture_label) continue;
        RefinedReport rep = refined_eliminate(fx, K, p, q, mode, d, cache, workers);
        json e;
        e["label"] = fx.label;
        e["reject"] = rep.reject;
        e["variant"] = rep.variant;
        e["h_roots"] = rep.h_roots;
        e["minpoly_roots"] = rep.minpoly_roots;
        e["pairs"] = json::array();
        for (const auto& pr : rep.pairs)
            e["pairs"].push_back({{"i", pr.i}, {"j", pr.j}, {"accepted", pr.accepted}, {"witness", pr.witness}});
        results.push_back(e);
        std::cout << "fixture " << fx.label << ": p=" << p_s << " "
                  << (rep.reject ? "REJECTED (no residue pair is consistent)" : "accepted at some residue pair")
                  << std::endl;
    }
    art["results"] = results;
    emit(art, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for Fermat equations of signature (r,r,p)"};
    app.require_subcommand(1);

    int r = 5, r_max = 31, workers = 1;
    long q = 0, q_max = 0;
    std::string a_s, b_s, d_s = "1", p_s, out_path, units_path, fixtures_path, q_list;
    std::string subset = "full", twist = "plain", case_mode = "plain", fixture_label;
    bool trust_irr = false, n_only = false;

    auto* verify = app.add_subcommand("verify", "run the exact polynomial identity suite over an r-range");
    verify->add_option("--r-max", r_max, "largest prime r to check");
    verify->add_option("--out", out_path, "artifact path");

    auto* curve = app.add_subcommand("curve", "print the Frey curve model, discriminant and companions");
    curve->add_option("--r", r)->required();
    curve->add_option("--a", a_s)->required();
    curve->add_option("--b", b_s)->required();
    curve->add_option("--out", out_path);

    auto* classify = app.add_subcommand("classify", "per-prime reduction table, Serre level, irreducibility");
    classify->add_option("--r", r)->required();
    classify->add_option("--a", a_s)->required();
    classify->add_option("--b", b_s)->required();
    classify->add_option("--d", d_s);
    classify->add_option("--units", units_path, "JSON list of unit coefficient vectors");
    classify->add_option("--out", out_path);

    auto* traces = app.add_subcommand("traces", "Frobenius trace sets with prime labels");
    traces->add_option("--r", r)->required();
    traces->add_option("--a", a_s)->required();
    traces->add_option("--b", b_s)->required();
    traces->add_option("--q", q, "single auxiliary prime");
    traces->add_option("--q-max", q_max, "all feasible good primes up to this bound");
    traces->add_option("--workers", workers);
    traces->add_option("--out", out_path);

    auto* cmfx = app.add_subcommand("cm-fixture", "write the CM fixture of the trivial solution");
    cmfx->add_option("--r", r)->required();
    cmfx->add_option("--q-list", q_list)->required();
    cmfx->add_option("--workers", workers);
    cmfx->add_option("--out", out_path);

    auto* elim = app.add_subcommand("eliminate", "newform elimination bounds N/M/B and survivors");
    elim->add_option("--r", r)->required();
    elim->add_option("--d", d_s);
    elim->add_option("--fixtures", fixtures_path)->required();
    elim->add_option("--q-list", q_list)->required();
    elim->add_option("--subset", subset, "strategies like 'full' or '1,2' (batch with ';')");
    elim->add_option("--twist", twist)->check(CLI::IsMember({"plain", "chi_r"}));
    elim->add_option("--a", a_s, "residue class for solution-dependent N bounds");
    elim->add_option("--b", b_s);
    elim->add_flag("--trust-irreducible", trust_irr);
    elim->add_flag("--n-only", n_only, "skip the residue-class B bounds (needs --a/--b)");
    elim->add_option("--workers", workers);
    elim->add_option("--out", out_path);

    auto* refined = app.add_subcommand("refined", "refined mod-p elimination per prime above p");
    refined->add_option("--r", r)->required();
    refined->add_option("--d", d_s);
    refined->add_option("--fixtures", fixtures_path)->required();
    refined->add_option("--p", p_s)->required();
    refined->add_option("--q", q)->required();
    refined->add_option("--case", case_mode)->check(CLI::IsMember({"plain", "both_twists", "chi_r"}));
    refined->add_option("--fixture-label", fixture_label, "restrict to one fixture");
    refined->add_flag("--trust-irreducible", trust_irr);
    refined->add_option("--workers", workers);
    refined->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) return run_verify(r_max, out_path);
        if (curve->parsed()) return run_curve(r, a_s, b_s, out_path);
        if (classify->parsed()) return run_classify(r, a_s, b_s, d_s, units_path, out_path);
        if (traces->parsed()) return run_traces(r, a_s, b_s, q, q_max, workers, out_path);
        if (cmfx->parsed()) return run_cm_fixture(r, q_list, workers, out_path);
        if (elim->parsed())
            return run_eliminate(r, d_s, fixtures_path, q_list, subset, twist, a_s, b_s, trust_irr, n_only,
                                 workers, out_path);
        if (refined->parsed())
            return run_refined(r, d_s, fixtures_path, p_s, q, case_mode, fixture_label, trust_irr, workers,
                               out_path);
    } catch (const certificate_error& e) {
        std::cerr << "certificate failure: " << e.what() << std::endl;
        return 2;
    } catch (const unsupported_error& e) {
        std::cerr << "unsupported input: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
