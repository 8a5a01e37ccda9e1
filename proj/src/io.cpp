#include "gforecast/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gforecast {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object())
    throw SchemaError(path + ": expected an object");
  auto it = j.find(name);
  if (it == j.end())
    throw SchemaError(path + "." + name + ": missing required field");
  return *it;
}

double number_field(const json& j, const char* name, const std::string& path) {
  const json& v = field(j, name, path);
  if (!v.is_number())
    throw SchemaError(path + "." + name + ": expected a number");
  return v.get<double>();
}

int int_field(const json& j, const char* name, const std::string& path) {
  const json& v = field(j, name, path);
  if (!v.is_number_integer())
    throw SchemaError(path + "." + name + ": expected an integer");
  return v.get<int>();
}

std::string string_field(const json& j, const char* name,
                         const std::string& path) {
  const json& v = field(j, name, path);
  if (!v.is_string())
    throw SchemaError(path + "." + name + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array_field(const json& j, const char* name,
                                       const std::string& path) {
  const json& v = field(j, name, path);
  if (!v.is_array())
    throw SchemaError(path + "." + name + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw SchemaError(path + "." + name + "[" + std::to_string(i) +
                        "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

json innovation_to_json(const InnovationSpec& s) {
  switch (s.kind) {
    case InnovationSpec::Kind::kGaussian:
      return json{{"type", "gaussian"}, {"sigma", s.sigma}};
    case InnovationSpec::Kind::kMixtureDiracExp:
      return json{{"type", "mixture_dirac_exp"}, {"rate", s.rate}};
    case InnovationSpec::Kind::kBernoulli:
      return json{{"type", "bernoulli"}, {"prob", s.prob}, {"scale", s.scale}};
  }
  throw std::logic_error("innovation_to_json: unknown kind");
}

InnovationSpec innovation_from_json(const json& j, const std::string& path) {
  const std::string type = string_field(j, "type", path);
  try {
    if (type == "gaussian")
      return InnovationSpec::gaussian(number_field(j, "sigma", path));
    if (type == "mixture_dirac_exp")
      return InnovationSpec::mixture_dirac_exp(number_field(j, "rate", path));
    if (type == "bernoulli")
      return InnovationSpec::bernoulli(number_field(j, "prob", path),
                                       number_field(j, "scale", path));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
  throw SchemaError(path + ".type: unknown innovation type '" + type + "'");
}

json process_to_json(const ProcessSpec& s) {
  switch (s.kind) {
    case ProcessSpec::Kind::kAr:
      return json{{"type", "ar"},
                  {"coeffs", s.coeffs},
                  {"intercept", s.intercept},
                  {"innovation", innovation_to_json(s.innovation)}};
    case ProcessSpec::Kind::kMaTruncated:
      return json{{"type", "ma_truncated"},
                  {"coeffs", s.coeffs},
                  {"innovation", innovation_to_json(s.innovation)}};
    case ProcessSpec::Kind::kAdditiveAr: {
      json comps = json::array();
      for (const auto& c : s.components) comps.push_back(json{{"poly", c.coeffs}});
      return json{{"type", "additive_ar"},
                  {"components", comps},
                  {"noise_sigma", s.noise_sigma}};
    }
    case ProcessSpec::Kind::kDoublingMap:
      return json{{"type", "doubling_map"}};
  }
  throw std::logic_error("process_to_json: unknown kind");
}

ProcessSpec process_from_json(const json& j, const std::string& path) {
  const std::string type = string_field(j, "type", path);
  try {
    if (type == "ar") {
      auto coeffs = number_array_field(j, "coeffs", path);
      const double intercept = number_field(j, "intercept", path);
      auto innovation = innovation_from_json(field(j, "innovation", path),
                                             path + ".innovation");
      return ProcessSpec::ar(std::move(coeffs), intercept, innovation);
    }
    if (type == "ma_truncated") {
      auto coeffs = number_array_field(j, "coeffs", path);
      auto innovation = innovation_from_json(field(j, "innovation", path),
                                             path + ".innovation");
      return ProcessSpec::ma_truncated(std::move(coeffs), innovation);
    }
    if (type == "additive_ar") {
      const json& comps = field(j, "components", path);
      if (!comps.is_array())
        throw SchemaError(path + ".components: expected an array");
      std::vector<PolyComponent> components;
      for (size_t i = 0; i < comps.size(); ++i) {
        components.push_back(PolyComponent{number_array_field(
            comps[i], "poly", path + ".components[" + std::to_string(i) + "]")});
      }
      return ProcessSpec::additive_ar(std::move(components),
                                      number_field(j, "noise_sigma", path));
    }
    if (type == "doubling_map") return ProcessSpec::doubling_map();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
  throw SchemaError(path + ".type: unknown process type '" + type + "'");
}

json model_to_json(const ModelSpec& m) {
  json j{{"family", family_name(m.family)},
         {"p", m.p},
         {"ell", m.ell},
         {"radius", m.radius},
         {"lip_cap", m.lip_cap}};
  if (m.d >= 1.0) j["d"] = m.d;
  return j;
}

ModelSpec model_from_json(const json& j, const std::string& path) {
  try {
    ModelSpec m;
    m.family = family_from_name(string_field(j, "family", path));
    m.p = int_field(j, "p", path);
    m.ell = int_field(j, "ell", path);
    m.radius = number_field(j, "radius", path);
    m.lip_cap = number_field(j, "lip_cap", path);
    if (j.contains("d")) m.d = number_field(j, "d", path);
    m.validate();
    return m;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

json catalog_to_json(const ModelCatalog& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(model_to_json(m));
  return json{{"schema_version", kSchemaVersion},
              {"n", c.n},
              {"lip_cap", c.lip_cap},
              {"models", models}};
}

ModelCatalog catalog_from_json(const json& j, const std::string& path) {
  const json& models = field(j, "models", path);
  if (!models.is_array() || models.empty())
    throw SchemaError(path + ".models: expected a non-empty array");
  ModelCatalog c;
  c.n = int_field(j, "n", path);
  c.lip_cap = number_field(j, "lip_cap", path);
  for (size_t i = 0; i < models.size(); ++i)
    c.models.push_back(model_from_json(
        models[i], path + ".models[" + std::to_string(i) + "]"));
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return c;
}

json param_point_to_json(const ParamPoint& theta) {
  std::vector<double> coords(theta.coords.data(),
                             theta.coords.data() + theta.coords.size());
  return json{{"schema_version", kSchemaVersion},
              {"model", model_to_json(theta.model)},
              {"coords", coords}};
}

ParamPoint param_point_from_json(const json& j, const std::string& path) {
  const ModelSpec m = model_from_json(field(j, "model", path), path + ".model");
  const std::vector<double> coords = number_array_field(j, "coords", path);
  Eigen::VectorXd v(static_cast<int>(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i) v(static_cast<int>(i)) = coords[i];
  try {
    return ParamPoint(m, std::move(v));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

json grid_to_json(const TemperatureGrid& g) {
  return json{{"schema_version", kSchemaVersion},
              {"values", g.values},
              {"g_multipliers", g.g_multipliers},
              {"c_check", g.c_check},
              {"c_hat", g.c_hat},
              {"interval", json::array({g.lo, g.hi})},
              {"degenerate", g.degenerate}};
}

json selection_result_to_json(const SelectionResult& r) {
  json table = json::array();
  for (const auto& cv : r.table) {
    table.push_back(json{{"p", cv.p},
                         {"ell", cv.ell},
                         {"lambda", cv.lambda},
                         {"soft_min", cv.soft_min_part},
                         {"weight_part", cv.weight_part},
                         {"variance_part", cv.variance_part},
                         {"value", cv.value},
                         {"se_log", cv.se_log},
                         {"grid_degenerate", cv.grid_degenerate}});
  }
  return json{
      {"schema_version", kSchemaVersion},
      {"mode", r.mode == CriterionMode::kPractical ? "practical" : "theoretical"},
      {"K", r.K},
      {"p_hat", r.p_hat},
      {"ell_hat", r.ell_hat},
      {"lambda_hat", r.lambda_hat},
      {"theta_hat", param_point_to_json(r.theta_hat)},
      {"draw_accepts", r.draw_accepts},
      {"draw_proposals", r.draw_proposals},
      {"draw_exhausted", r.draw_exhausted},
      {"margin", r.margin},
      {"margin_se", r.margin_se},
      {"margin_warning", r.margin_warning},
      {"table", table}};
}

json baseline_to_json(const BaselineFit& f) {
  return json{{"schema_version", kSchemaVersion},
              {"p_aic", f.p_aic},
              {"coeffs", f.coeffs},
              {"rss", f.rss},
              {"aic_table", f.aic_table},
              {"p_max", f.p_max},
              {"n_common", f.n_common}};
}

json evaluation_to_json(const EvaluationReport& e) {
  return json{{"schema_version", kSchemaVersion},
              {"err1", e.err1},
              {"err2", e.err2},
              {"p_used", e.p_used},
              {"n_eval", e.n_eval}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_series_csv(const std::string& file, const TimeSeries& series) {
  json meta{{"schema_version", kSchemaVersion},
            {"process", process_to_json(series.origin)},
            {"seed", series.seed},
            {"burn_in", series.burn_in}};
  std::ostringstream os;
  os << "# " << meta.dump() << "\n";
  os << "value\n";
  for (double v : series.values) os << format_double(v) << "\n";
  write_text_file(file, os.str());
}

TimeSeries read_series_csv(const std::string& file) {
  std::istringstream is(read_text_file(file));
  std::string line;
  TimeSeries out;
  bool have_meta = false;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const size_t start = line.find('{');
      if (start == std::string::npos) continue;
      const json meta = json::parse(line.substr(start));
      out.origin = process_from_json(field(meta, "process", "$"), "$.process");
      out.seed = field(meta, "seed", "$").get<std::uint64_t>();
      out.burn_in = field(meta, "burn_in", "$").get<int>();
      have_meta = true;
      continue;
    }
    if (!have_header) {
      if (line != "value")
        throw SchemaError(file + ": expected a 'value' header line");
      have_header = true;
      continue;
    }
    out.values.push_back(std::stod(line));
  }
  if (!have_meta)
    throw SchemaError(file + ": missing '# {...}' provenance comment");
  if (out.values.size() < 4)
    throw SchemaError(file + ": series must hold at least 4 values");
  return out;
}

void write_text_file(const std::string& file, const std::string& content) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + file);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + file);
}

std::string read_text_file(const std::string& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + file);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

json read_json_file(const std::string& file) {
  try {
    return json::parse(read_text_file(file));
  } catch (const json::parse_error& e) {
    throw SchemaError(file + ": " + e.what());
  }
}

void write_json_file(const std::string& file, const json& j) {
  write_text_file(file, j.dump(2) + "\n");
}

}  // namespace gforecast
