#pragma once

#include "selinf/chains.hpp"
#include "selinf/diversity.hpp"
#include "selinf/lft.hpp"
#include "selinf/metrics.hpp"
#include "selinf/model.hpp"
#include "selinf/quadtests.hpp"

#include <json.hpp>

#include <string>

namespace selinf::json_io {

using Json = nlohmann::ordered_json;

struct ParsedDocument {
    SelectiveSystem system;  // bijective form (rearranged when a diagram was given)
    bool had_diagram = false;
    Diagram diagram;
    std::string format_version;
};

// All parsers throw std::invalid_argument with a location-bearing message.
ParsedDocument parse_system(const Json& doc);
ParsedDocument load_system_file(const std::string& path);

Json serialize_system(const SelectiveSystem& sys);

metrics::MetricSpec parse_metric(const Json& doc);
Json serialize_metric(const metrics::MetricSpec& spec);

diversity::Partition parse_partition(const Json& doc);
Json serialize_partition(const diversity::Partition& partition);

Json prob_to_json(const Prob& p);

Json chain_violation_to_json(const chains::ChainViolation& v);
Json cosphericity_violation_to_json(const quadtests::CosphericityViolation& v);
Json diversity_violation_to_json(const diversity::DiversityViolation& v);
Json ms_report_to_json(const MarginalSelectivityReport& report);
Json lft_verdict_to_json(const lft::Verdict& verdict, bool dump_witness);

}  // namespace selinf::json_io
