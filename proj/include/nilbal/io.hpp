#pragma once

// File formats: .grp presentations, .tower JSON descriptions (with ${name}
// integer substitution), and JSON rendering of reports.

#include "nilbal/classify.hpp"
#include "nilbal/presentation.hpp"
#include "nilbal/resolution.hpp"
#include "nilbal/tower.hpp"

#include <map>
#include <string>

namespace nilbal {

// {"base": {"order": k, "name": "z"},
//  "levels": [{"name": "y", "conj": {"z": "z^5"}}, ...]}
// Words use the .grp syntax over the generator names introduced so far.
// Integer fields and word exponents may reference ${param} substitutions.
PcTower parse_tower_json(const std::string& text,
                         const std::map<std::string, long long>& params = {});

PcTower load_tower_file(const std::string& path,
                        const std::map<std::string, long long>& params = {});

Presentation load_grp_file(const std::string& path);

std::string betti_report_json(const BettiReport& r);
std::string betti_report_text(const BettiReport& r);
std::string sweep_record_json(const SweepRecord& r);
std::string sweep_report_summary(const SweepReport& r);
std::string enum_record_json(const EnumRecord& r);

} // namespace nilbal
