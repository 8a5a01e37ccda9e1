#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "gforecast/baseline.hpp"
#include "gforecast/predictors.hpp"
#include "gforecast/selection.hpp"
#include "gforecast/series.hpp"

namespace gforecast {

inline constexpr int kSchemaVersion = 1;

/// Raised by every from_json path; the message carries the JSON pointer of
/// the offending field.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json innovation_to_json(const InnovationSpec& s);
InnovationSpec innovation_from_json(const nlohmann::json& j,
                                    const std::string& path = "$.innovation");

nlohmann::json process_to_json(const ProcessSpec& s);
ProcessSpec process_from_json(const nlohmann::json& j,
                              const std::string& path = "$.process");

nlohmann::json model_to_json(const ModelSpec& m);
ModelSpec model_from_json(const nlohmann::json& j,
                          const std::string& path = "$.model");

nlohmann::json catalog_to_json(const ModelCatalog& c);
ModelCatalog catalog_from_json(const nlohmann::json& j,
                               const std::string& path = "$.catalog");

nlohmann::json param_point_to_json(const ParamPoint& theta);
ParamPoint param_point_from_json(const nlohmann::json& j,
                                 const std::string& path = "$");

nlohmann::json grid_to_json(const TemperatureGrid& g);
nlohmann::json selection_result_to_json(const SelectionResult& r);
nlohmann::json baseline_to_json(const BaselineFit& f);
nlohmann::json evaluation_to_json(const EvaluationReport& e);

/// Series CSV: one `# {json}` provenance comment, a `value` header line and
/// one observation per line, round-trippable to the last bit.
void write_series_csv(const std::string& file, const TimeSeries& series);
TimeSeries read_series_csv(const std::string& file);

std::string format_double(double v);  // %.17g, bit round-trippable
void write_text_file(const std::string& file, const std::string& content);
std::string read_text_file(const std::string& file);
nlohmann::json read_json_file(const std::string& file);
void write_json_file(const std::string& file, const nlohmann::json& j);

}  // namespace gforecast
