// nilbal: homology invariants of finitely presented and polycyclic-tower
// groups, balance verdicts, and the classification sweeps.

#include "nilbal/classify.hpp"
#include "nilbal/errors.hpp"
#include "nilbal/io.hpp"
#include "nilbal/parallel.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

using namespace nilbal;

namespace {

struct Range {
    long long lo = 0, hi = -1;
};

Range parse_range(const std::string& s) {
    Range r;
    auto pos = s.find("..");
    if (pos == std::string::npos) {
        r.lo = r.hi = std::stoll(s);
    } else {
        r.lo = std::stoll(s.substr(0, pos));
        r.hi = std::stoll(s.substr(pos + 2));
    }
    return r;
}

std::string render_ring_elem(const FreeRingElem& e, const std::vector<std::string>& names) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [w, c] : e.terms()) {
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Int a = abs(c);
        std::string ws = w.empty() ? "1" : render(w, names);
        if (a == 1) os << ws;
        else os << a << "*" << ws;
        first = false;
    }
    return os.str();
}

int exit_code_error(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-degree homology invariants of nilpotent groups"};
    app.require_subcommand(1);

    bool json_out = false;
    int jobs = default_jobs();
    long long max_cosets = 1'000'000;
    int bar_limit = 48;
    std::vector<long long> primes;
    app.add_flag("--json", json_out, "machine-readable output");
    app.add_option("--jobs", jobs, "worker threads for sweeps");
    app.add_option("--max-cosets", max_cosets, "coset enumeration limit");
    app.add_option("--bar-limit", bar_limit, "bar-complex order limit");
    app.add_option("-p,--prime", primes, "coefficient prime (repeatable)");

    // ---- betti ----
    auto* cmd_betti = app.add_subcommand("betti", "Betti numbers and balance verdict");
    std::string betti_path;
    bool assert_balanced = false;
    std::map<std::string, long long> tower_params;
    cmd_betti->add_option("input", betti_path, "a .grp or .tower file")->required();
    cmd_betti->add_flag("--assert-balanced", assert_balanced,
                        "exit 2 on a not-homologically-balanced verdict");
    for (const char* name : {"q", "k", "f", "l", "m", "n", "a"}) {
        cmd_betti
            ->add_option_function<long long>(
                std::string("--") + name,
                [&tower_params, name](long long v) { tower_params[name] = v; },
                std::string("tower parameter ${") + name + "}")
            ->expected(1);
    }

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "run a theorem verifier sweep");
    std::string theorem;
    long long bound = 64;
    long long kmax = 16;
    int trials = 1000;
    std::string out_path;
    cmd_verify->add_option("theorem", theorem, "h1 | cycboth | partial3 | euler | catalog")
        ->required();
    cmd_verify->add_option("--bound", bound, "group order bound for sweeps");
    cmd_verify->add_option("--kmax", kmax, "largest k in the partial3 grid");
    cmd_verify->add_option("--trials", trials, "randomized trials for euler");
    cmd_verify->add_option("--out", out_path, "write the JSON-lines report here");

    // ---- enum ----
    auto* cmd_enum = app.add_subcommand("enum", "enumerate a parametrized family");
    std::string family;
    std::string m_range = "1..1", n_range = "1..1", r_range = "1..1", s_range = "0..0",
                t_range = "0..0", k_range = "1..1", a_range = "1..1";
    long long enum_p = 3;
    cmd_enum->add_option("family", family, "semidirect | metacyclic | q8k")->required();
    cmd_enum->add_option("--m", m_range, "range for m, e.g. 1..20");
    cmd_enum->add_option("--n", n_range, "range for n, e.g. -5..5");
    cmd_enum->add_option("--p", enum_p, "prime p for metacyclic");
    cmd_enum->add_option("--r", r_range, "range for r");
    cmd_enum->add_option("--s", s_range, "range for s");
    cmd_enum->add_option("--t", t_range, "range for t");
    cmd_enum->add_option("--k", k_range, "range for k");
    cmd_enum->add_option("--a", a_range, "range for a");

    // ---- coset-enum ----
    auto* cmd_coset = app.add_subcommand("coset-enum", "certify the order of a presented group");
    std::string coset_path;
    cmd_coset->add_option("input", coset_path, "a .grp file")->required();

    // ---- abelianize ----
    auto* cmd_ab = app.add_subcommand("abelianize", "invariant factors of G^ab");
    std::string ab_path;
    cmd_ab->add_option("input", ab_path, "a .grp file")->required();

    // ---- fox ----
    auto* cmd_fox = app.add_subcommand("fox", "Fox derivatives of the relators");
    std::string fox_path, fox_gen;
    cmd_fox->add_option("input", fox_path, "a .grp file")->required();
    cmd_fox->add_option("--gen", fox_gen, "restrict to one generator");

    // allow the global flags (-p, --json, ...) after a subcommand name
    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_betti) {
            BettiReport rep;
            if (betti_path.size() > 6 && betti_path.substr(betti_path.size() - 6) == ".tower") {
                PcTower t = load_tower_file(betti_path, tower_params);
                BettiOptions opt;
                opt.primes = primes;
                rep = betti(t, opt);
            } else {
                Presentation p = load_grp_file(betti_path);
                // .grp inputs must present a finite group
                FiniteGroup g = coset_enumerate(p, max_cosets);
                rep.hirsch = 0;
                rep.beta1_q = 0;
                rep.beta2_q = 0;
                rep.nilpotent = is_nilpotent(g);
                std::set<long long> ps(primes.begin(), primes.end());
                if (ps.empty()) {
                    long long o = g.order();
                    for (long long q = 2; q <= o; ++q)
                        if (o % q == 0) {
                            ps.insert(q);
                            while (o % q == 0) o /= q;
                        }
                }
                BarOptions bo;
                bo.size_limit = bar_limit;
                bo.want_reps = false;
                for (long long pr : ps) {
                    BarHomology bh(g, pr, bo);
                    rep.per_prime.push_back({pr, bh.dim(1), bh.dim(2)});
                }
                if (g.order() <= 32) rep.integral_h2 = integral_h2_bar(g, 32);
                rep.verdict = BettiReport::BalancedConsistent;
                for (auto& [pr, b1, b2] : rep.per_prime)
                    if (b2 > b1) {
                        rep.verdict = BettiReport::NotHomologicallyBalanced;
                        rep.witness_prime = pr;
                        break;
                    }
            }
            std::cout << (json_out ? betti_report_json(rep) + "\n" : betti_report_text(rep));
            if (assert_balanced && rep.verdict == BettiReport::NotHomologicallyBalanced)
                return 2;
            return 0;
        }

        if (*cmd_verify) {
            SweepReport rep;
            SweepOptions opt;
            opt.bound = bound;
            opt.jobs = jobs;
            if (theorem == "h1") rep = verify_theorem_h1(opt);
            else if (theorem == "cycboth") {
                if (bound > 32) opt.bound = 32;
                rep = verify_cycboth(opt);
            } else if (theorem == "partial3") rep = verify_partial3(kmax);
            else if (theorem == "euler") {
                std::vector<long long> ps = primes.empty()
                                                ? std::vector<long long>{2, 3, 5}
                                                : primes;
                rep = verify_euler(trials, ps);
            } else if (theorem == "catalog") rep = verify_catalog(max_cosets);
            else throw ParameterInvalid("unknown theorem '" + theorem + "'");

            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                out = &file;
            }
            for (auto& r : rep.records) *out << sweep_record_json(r) << "\n";
            std::cerr << sweep_report_summary(rep);
            return rep.failures == 0 ? 0 : 2;
        }

        if (*cmd_enum) {
            Range rm = parse_range(m_range), rn = parse_range(n_range), rr = parse_range(r_range),
                  rs = parse_range(s_range), rt = parse_range(t_range), rk = parse_range(k_range),
                  ra = parse_range(a_range);
            std::vector<EnumRecord> recs;
            if (family == "semidirect")
                recs = enum_semidirect(rm.lo, rm.hi, rn.lo, rn.hi, max_cosets);
            else if (family == "metacyclic")
                recs = enum_metacyclic(enum_p, rr.lo, rr.hi, rs.lo, rs.hi, rt.lo, rt.hi,
                                       max_cosets);
            else if (family == "q8k")
                recs = enum_q8k(rk.lo, rk.hi, ra.lo, ra.hi, max_cosets);
            else throw ParameterInvalid("unknown family '" + family + "'");
            for (auto& r : recs) {
                if (json_out) std::cout << enum_record_json(r) << "\n";
                else
                    std::cout << r.family << " " << r.params << ": order "
                              << (r.order ? std::to_string(*r.order) : std::string("inf"))
                              << ", ab " << r.abelianization << ", "
                              << (r.nilpotent ? "nilpotent" : "not nilpotent") << ", "
                              << r.balance << "\n";
            }
            return 0;
        }

        if (*cmd_coset) {
            Presentation p = load_grp_file(coset_path);
            long long order = coset_enumerate_order(p, max_cosets);
            std::cout << (p.name().empty() ? "group" : p.name()) << ": order " << order
                      << "\n";
            return 0;
        }

        if (*cmd_ab) {
            Presentation p = load_grp_file(ab_path);
            std::cout << abelianize(p).str() << "\n";
            return 0;
        }

        if (*cmd_fox) {
            Presentation p = load_grp_file(fox_path);
            std::vector<int> gens;
            if (!fox_gen.empty()) {
                int g = p.gen_index(fox_gen);
                if (g < 0) throw ParameterInvalid("unknown generator " + fox_gen);
                gens.push_back(g);
            } else {
                for (int g = 0; g < p.ngens(); ++g) gens.push_back(g);
            }
            for (int i = 0; i < p.nrels(); ++i)
                for (int g : gens) {
                    FreeRingElem d = fox_derivative(p.relators()[i], g);
                    std::cout << "d(" << render(p.relators()[i], p.generator_names())
                              << ")/d(" << p.generator_names()[g]
                              << ") = " << render_ring_elem(d, p.generator_names()) << "\n";
                }
            return 0;
        }
    } catch (const std::exception& e) {
        return exit_code_error(e);
    }
    return 0;
}
