#include "nilbal/io.hpp"

#include "nilbal/errors.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nilbal {

namespace {

using nlohmann::json;

std::string substitute(std::string s, const std::map<std::string, long long>& params) {
    for (;;) {
        auto pos = s.find("${");
        if (pos == std::string::npos) return s;
        auto end = s.find('}', pos);
        if (end == std::string::npos) throw ParameterInvalid("unterminated ${...}");
        std::string key = s.substr(pos + 2, end - pos - 2);
        auto it = params.find(key);
        if (it == params.end())
            throw ParameterInvalid("unresolved parameter '" + key + "' (pass --" + key + ")");
        s = s.substr(0, pos) + std::to_string(it->second) + s.substr(end + 1);
    }
}

long long int_field(const json& j, const std::map<std::string, long long>& params) {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_string()) {
        std::string s = substitute(j.get<std::string>(), params);
        return std::stoll(s);
    }
    throw ParameterInvalid("expected an integer or an integer-valued string");
}

} // namespace

PcTower parse_tower_json(const std::string& text,
                         const std::map<std::string, long long>& params) {
    json j = json::parse(text);
    if (!j.contains("base")) throw ParameterInvalid("tower needs a \"base\"");
    long long order = int_field(j["base"].contains("order") ? j["base"]["order"] : json(0), params);
    std::string base_name = j["base"].value("name", std::string("z"));
    PcTower t(order, base_name);
    if (j.contains("levels")) {
        for (auto& lv : j["levels"]) {
            std::string name = lv.at("name").get<std::string>();
            // parse conj words against the generators known so far
            std::vector<std::string> names;
            for (int i = 0; i < t.ngens(); ++i) names.push_back(t.gen_name(i));
            std::vector<Monomial> imgs;
            for (int i = 0; i < t.ngens(); ++i) {
                std::string key = t.gen_name(i);
                std::string wtext;
                if (lv.contains("conj") && lv["conj"].contains(key))
                    wtext = substitute(lv["conj"][key].get<std::string>(), params);
                else
                    wtext = key;          // default: commutes
                // reuse the presentation parser on a synthetic wrapper
                std::ostringstream os;
                os << "< ";
                for (size_t g = 0; g < names.size(); ++g)
                    os << names[g] << (g + 1 < names.size() ? ", " : " ");
                os << "| " << wtext << " >";
                Presentation p = parse_presentation(os.str());
                imgs.push_back(t.collect(p.relators()[0]));
            }
            t.add_level(name, imgs);
        }
    }
    return t;
}

PcTower load_tower_file(const std::string& path,
                        const std::map<std::string, long long>& params) {
    std::ifstream in(path);
    if (!in) throw ParameterInvalid("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tower_json(ss.str(), params);
}

Presentation load_grp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterInvalid("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

std::string betti_report_json(const BettiReport& r) {
    json j;
    j["beta0_Q"] = r.beta0_q;
    j["beta1_Q"] = r.beta1_q;
    j["beta2_Q"] = r.beta2_q;
    json per = json::array();
    for (auto& [p, b1, b2] : r.per_prime)
        per.push_back({{"p", p}, {"beta1", b1}, {"beta2", b2}});
    j["per_prime"] = per;
    if (r.integral_h2) j["integral_H2"] = r.integral_h2->str();
    j["hirsch"] = r.hirsch;
    j["nilpotent"] = r.nilpotent;
    switch (r.verdict) {
        case BettiReport::BalancedConsistent: j["verdict"] = "balanced-consistent"; break;
        case BettiReport::NotHomologicallyBalanced:
            j["verdict"] = "not-homologically-balanced";
            j["witness_prime"] = r.witness_prime;
            break;
        default: j["verdict"] = "undetermined";
    }
    if (!r.wang_checks.empty()) {
        json w = json::array();
        for (auto& c : r.wang_checks)
            w.push_back({{"p", c.p}, {"defect", c.lhs}, {"cok", c.rhs}, {"ok", c.ok}});
        j["wang_checks"] = w;
    }
    return j.dump();
}

std::string betti_report_text(const BettiReport& r) {
    std::ostringstream os;
    os << "beta1(Q) = " << r.beta1_q << ", beta2(Q) = " << r.beta2_q << "\n";
    for (auto& [p, b1, b2] : r.per_prime)
        os << "beta1(F" << p << ") = " << b1 << ", beta2(F" << p << ") = " << b2 << "\n";
    if (r.integral_h2) os << "H2(G;Z) = " << r.integral_h2->str() << "\n";
    os << "hirsch length " << r.hirsch << ", "
       << (r.nilpotent ? "nilpotent" : "not nilpotent") << "\n";
    os << "verdict: ";
    switch (r.verdict) {
        case BettiReport::BalancedConsistent: os << "balanced-consistent"; break;
        case BettiReport::NotHomologicallyBalanced:
            os << "not-homologically-balanced (witness p = " << r.witness_prime << ")";
            break;
        default: os << "undetermined";
    }
    os << "\n";
    return os.str();
}

std::string sweep_record_json(const SweepRecord& r) {
    json j;
    j["group_id"] = r.group_id;
    j["params"] = r.params;
    j["p"] = r.p;
    j["beta1"] = r.beta1;
    j["beta2"] = r.beta2;
    j["verdict"] = r.verdict;
    j["witness"] = r.witness;
    j["failure"] = r.failure;
    if (!r.note.empty()) j["note"] = r.note;
    return j.dump();
}

std::string sweep_report_summary(const SweepReport& r) {
    std::ostringstream os;
    os << "sweep " << r.name << ": " << r.checked << " checks, " << r.failures
       << " failures";
    if (!r.skipped.empty()) {
        os << "; skipped by the enumeration guard: ";
        for (size_t i = 0; i < r.skipped.size(); ++i)
            os << r.skipped[i] << (i + 1 < r.skipped.size() ? ", " : "");
    }
    os << "\n";
    return os.str();
}

std::string enum_record_json(const EnumRecord& r) {
    json j;
    j["family"] = r.family;
    j["params"] = r.params;
    if (r.order) j["order"] = *r.order;
    j["abelianization"] = r.abelianization;
    j["nilpotent"] = r.nilpotent;
    j["balance"] = r.balance;
    return j.dump();
}

} // namespace nilbal
