#pragma once

// Machine-readable output. Subsets and coordinates are 1-based in every
// serialized form, matching the usual u in {1..s} notation.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnet/gains.hpp"
#include "dnet/quality.hpp"
#include "dnet/scramble.hpp"
#include "dnet/suites.hpp"

namespace dnet {

nlohmann::json subset_to_json(const std::vector<int>& u);
std::vector<int> subset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QualityReport& r);
nlohmann::json to_json(const GainReport& r);
nlohmann::json to_json(const RqmcEstimate& e);
nlohmann::json to_json(const GainIdentityReport& r);
nlohmann::json to_json(const SubsetIndex& idx);
nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const std::vector<SuiteResult>& results);
GainReport gain_report_from_json(const nlohmann::json& j);

// Quality report plus the maximal gain and its bound.
nlohmann::json analyze(const GeneratorSet& g, const QualityOptions& opts = {});

// Header "u,k,log2_gain,rank"; u and k are ';'-separated within a field.
void write_gain_csv(const GainReport& r, std::ostream& out);

// Named integrands: "prod", "const:<c>", "haar:<u>:<k>" with u and k comma lists (u 1-based).
Integrand parse_integrand(const std::string& spec, int dims);

// Parses "1,2;3" into 0-based subsets.
std::vector<std::vector<int>> parse_subset_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace dnet
