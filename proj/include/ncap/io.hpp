#pragma once

#include <string>

#include "json.hpp"
#include "ncap/capacity.hpp"
#include "ncap/newtonian.hpp"
#include "ncap/region.hpp"
#include "ncap/space.hpp"

namespace ncap {

/// Space file: {nodes: [{id, measure, pos?}], edges: [{a, b, length, weight?}],
/// meta: {h?, dim?}}. Missing edge weights default to 1.
nlohmann::json space_to_json(const MetricMeasureGraph& g);
MetricMeasureGraph space_from_json(const nlohmann::json& j);

MetricMeasureGraph read_space(const std::string& path);
void write_space(const MetricMeasureGraph& g, const std::string& path);

/// Accepts an inline JSON predicate (text starting with '{') or a path to a
/// file holding one.
Region parse_region(const std::string& inline_or_path);

/// Functions serialize as arrays aligned with node / edge order.
nlohmann::json function_to_json(const DiscreteFunction& u);
DiscreteFunction function_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const EdgeFunction& g);

/// {value, converged, iterations, kkt, energy_history_length, flags:
/// {A_touches_boundary}, echo}; +inf values serialize as the string "inf".
nlohmann::json capacity_to_json(const CapacityResult& r);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ncap
