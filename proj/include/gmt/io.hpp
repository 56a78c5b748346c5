#pragma once

#include "gmt/heisenberg.hpp"
#include "gmt/jets.hpp"
#include "gmt/measure.hpp"
#include "gmt/metric.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace gmt {

using Json = nlohmann::json;

/// Metric oracle for a serialized target tag; cc targets need a vector field system and are
/// rejected here.
MetricOracle metric_for_kind(PointKind kind);

/// {k, h, indices: [[int]], values: [[real]], target: tag}
Json to_json(const SampledMap& f);
SampledMap sampled_map_from_json(const Json& j);

Json to_json(const Stratification& s);
Json to_json(const Cover& c);
/// [z..., t]
Json to_json(const HPoint& p);
HPoint hpoint_from_json(const Json& j);

/// CSV text with header r,value,ball_count.
std::string content_series_csv(const std::vector<ContentEstimate>& series);
/// CSV text with header scale,max_ratio.
std::string profile_csv(const std::vector<ProfileRow>& profile);

void write_text(const std::string& path, const std::string& text);

}  // namespace gmt
