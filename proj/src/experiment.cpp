#include "gforecast/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "gforecast/io.hpp"
#include "gforecast/parallel.hpp"

namespace gforecast {

using nlohmann::json;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void ExperimentConfig::validate() const {
  process.validate();
  require(repetitions >= 1, "config: repetitions must be >= 1");
  require(catalog.p_min >= 1 && catalog.p_max >= catalog.p_min,
          "config: bad catalog memory range");
  require(!catalog.ells.empty(), "config: catalog needs at least one ell");
  require(n_train >= 2 * catalog.p_max, "config: n_train must be >= 2 p_max");
  require(skip >= catalog.p_max, "config: skip must be >= the largest memory");
  require(n_eval > skip, "config: n_eval must exceed skip");
  require(mc_samples >= 2, "config: mc_samples must be >= 2");
  require(K > 0.0, "config: K must be > 0");
  build_catalog();  // throws on structural problems
}

ModelCatalog ExperimentConfig::build_catalog() const {
  std::vector<ModelSpec> models;
  for (int p = catalog.p_min; p <= catalog.p_max; ++p) {
    for (int ell : catalog.ells) {
      switch (catalog.family) {
        case Family::kLinear:
          models.push_back(ModelSpec::linear(p, catalog.radius));
          break;
        case Family::kNeural:
          models.push_back(ModelSpec::neural(p, ell, catalog.radius));
          break;
        case Family::kFourier:
          models.push_back(ModelSpec::fourier(p, ell, catalog.radius));
          break;
      }
    }
  }
  return ModelCatalog::build(std::move(models), n_train);
}

SelectionOptions ExperimentConfig::selection_options() const {
  SelectionOptions opts;
  opts.criterion = grid_preset == GridPreset::kPaper51
                       ? CriterionMode::kPractical
                       : CriterionMode::kTheoretical;
  opts.grid = grid_preset;
  opts.K = K;
  opts.mc_samples = mc_samples;
  opts.max_proposals = mc_samples;
  return opts;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::optional<std::string>& series_dir) {
  config.validate();
  const ModelCatalog catalog = config.build_catalog();
  const SelectionOptions opts = config.selection_options();

  struct RepOutcome {
    RepRow gibbs;
    RepRow aic;
  };
  std::vector<RepOutcome> outcomes(static_cast<size_t>(config.repetitions));

  parallel_for(config.repetitions, [&](int rep) {
    const std::uint64_t r = static_cast<std::uint64_t>(rep);
    const std::uint64_t train_seed =
        derive_key(config.master_seed, "rep", r, "train");
    const std::uint64_t eval_seed =
        derive_key(config.master_seed, "rep", r, "eval");
    const std::uint64_t select_seed =
        derive_key(config.master_seed, "rep", r, "select");

    const TimeSeries train = simulate(config.process, config.n_train, train_seed);
    const TimeSeries eval = simulate(config.process, config.n_eval, eval_seed);

    const SelectionResult sel = select(catalog, train, opts, select_seed);
    const EvaluationReport gibbs_err =
        holdout_errors(sel.theta_hat, eval, config.skip);

    const BaselineFit aic = aic_select(train, config.catalog.p_max);
    const EvaluationReport aic_err = evaluate_baseline(aic, eval, config.skip);

    outcomes[static_cast<size_t>(rep)] = RepOutcome{
        RepRow{rep, "gibbs", gibbs_err.err1, gibbs_err.err2, sel.p_hat,
               sel.lambda_hat, train_seed},
        RepRow{rep, "aic", aic_err.err1, aic_err.err2, aic.p_aic, 0.0,
               train_seed}};

    if (series_dir) {
      write_series_csv(*series_dir + "/rep" + std::to_string(rep) + "_train.csv",
                       train);
      write_series_csv(*series_dir + "/rep" + std::to_string(rep) + "_eval.csv",
                       eval);
    }
  });

  ExperimentReport report;
  report.config = config;
  for (const auto& o : outcomes) {
    report.rows.push_back(o.gibbs);
    report.rows.push_back(o.aic);
  }
  report.summary = summarize(report.rows);
  return report;
}

std::vector<MethodSummary> summarize(const std::vector<RepRow>& rows) {
  std::vector<MethodSummary> out;
  for (const std::string method : {"gibbs", "aic"}) {
    std::vector<double> e1, e2;
    for (const auto& r : rows) {
      if (r.method != method) continue;
      e1.push_back(r.err1);
      e2.push_back(r.err2);
    }
    if (e1.empty()) continue;
    MethodSummary s;
    s.method = method;
    s.err1_median = median(e1);
    s.err1_mean = mean(e1);
    s.err1_sd = e1.size() >= 2 ? sample_sd(e1) : 0.0;
    s.err2_median = median(e2);
    s.err2_mean = mean(e2);
    s.err2_sd = e2.size() >= 2 ? sample_sd(e2) : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::pair<std::string, ExperimentConfig>> bench_table1_configs(
    int repetitions, std::uint64_t master_seed, int mc_samples) {
  const std::vector<double> ar_coeffs = {0.2, 0.3, 0.2};
  auto base = [&](InnovationSpec innovation) {
    ExperimentConfig c;
    c.process = ProcessSpec::ar(ar_coeffs, 0.0, innovation);
    c.repetitions = repetitions;
    c.master_seed = master_seed;
    c.mc_samples = mc_samples;
    return c;
  };
  return {
      {"gaussian_sigma1", base(InnovationSpec::gaussian(1.0))},
      {"gaussian_sigma_sqrt3", base(InnovationSpec::gaussian(std::sqrt(3.0)))},
      {"gaussian_sigma3", base(InnovationSpec::gaussian(3.0))},
      {"mixture_exp1", base(InnovationSpec::mixture_dirac_exp(1.0))},
      {"mixture_exp_inv_sqrt12",
       base(InnovationSpec::mixture_dirac_exp(1.0 / std::sqrt(12.0)))},
  };
}

json config_to_json(const ExperimentConfig& c) {
  json ells = json::array();
  for (int e : c.catalog.ells) ells.push_back(e);
  return json{
      {"schema_version", kSchemaVersion},
      {"process", process_to_json(c.process)},
      {"n_train", c.n_train},
      {"n_eval", c.n_eval},
      {"skip", c.skip},
      {"catalog",
       json{{"family", family_name(c.catalog.family)},
            {"p_min", c.catalog.p_min},
            {"p_max", c.catalog.p_max},
            {"ells", ells},
            {"radius", c.catalog.radius}}},
      {"grid_preset",
       c.grid_preset == GridPreset::kPaper51 ? "paper_5_1" : "theoretical"},
      {"K", c.K},
      {"mc_samples", c.mc_samples},
      {"repetitions", c.repetitions},
      {"master_seed", c.master_seed}};
}

ExperimentConfig config_from_json(const json& j, const std::string& path) {
  auto get_int = [&](const char* name, int fallback) {
    return j.contains(name) ? j.at(name).get<int>() : fallback;
  };
  ExperimentConfig c;
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  if (!j.contains("process"))
    throw SchemaError(path + ".process: missing required field");
  c.process = process_from_json(j.at("process"), path + ".process");
  c.n_train = get_int("n_train", c.n_train);
  c.n_eval = get_int("n_eval", c.n_eval);
  c.skip = get_int("skip", c.skip);
  if (j.contains("catalog")) {
    const json& cat = j.at("catalog");
    const std::string cpath = path + ".catalog";
    if (!cat.is_object()) throw SchemaError(cpath + ": expected an object");
    if (cat.contains("family"))
      c.catalog.family = family_from_name(cat.at("family").get<std::string>());
    if (cat.contains("p_min")) c.catalog.p_min = cat.at("p_min").get<int>();
    if (cat.contains("p_max")) c.catalog.p_max = cat.at("p_max").get<int>();
    if (cat.contains("radius")) c.catalog.radius = cat.at("radius").get<double>();
    if (cat.contains("ells")) {
      c.catalog.ells.clear();
      for (const auto& e : cat.at("ells")) c.catalog.ells.push_back(e.get<int>());
    }
  }
  if (j.contains("grid_preset")) {
    const std::string preset = j.at("grid_preset").get<std::string>();
    if (preset == "paper_5_1") c.grid_preset = GridPreset::kPaper51;
    else if (preset == "theoretical") c.grid_preset = GridPreset::kTheoretical;
    else throw SchemaError(path + ".grid_preset: unknown preset '" + preset + "'");
  }
  if (j.contains("K")) c.K = j.at("K").get<double>();
  c.mc_samples = get_int("mc_samples", c.mc_samples);
  c.repetitions = get_int("repetitions", c.repetitions);
  if (j.contains("master_seed"))
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return c;
}

json report_to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"rep", row.rep},
                        {"method", row.method},
                        {"err1", row.err1},
                        {"err2", row.err2},
                        {"p_hat", row.p_hat},
                        {"lambda_hat", row.lambda_hat},
                        {"seed", row.seed}});
  }
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back(json{{"method", s.method},
                           {"err1_median", s.err1_median},
                           {"err1_mean", s.err1_mean},
                           {"err1_sd", s.err1_sd},
                           {"err2_median", s.err2_median},
                           {"err2_mean", s.err2_mean},
                           {"err2_sd", s.err2_sd}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"config", config_to_json(r.config)},
              {"rows", rows},
              {"summary", summary}};
}

std::string report_rows_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "rep,method,err1,err2,p_hat,lambda_hat,seed\n";
  for (const auto& row : r.rows) {
    os << row.rep << ',' << row.method << ',' << format_double(row.err1) << ','
       << format_double(row.err2) << ',' << row.p_hat << ','
       << format_double(row.lambda_hat) << ',' << row.seed << "\n";
  }
  return os.str();
}

std::string report_summary_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "method,err1_median,err1_mean,err1_sd,err2_median,err2_mean,err2_sd\n";
  for (const auto& s : r.summary) {
    os << s.method << ',' << format_double(s.err1_median) << ','
       << format_double(s.err1_mean) << ',' << format_double(s.err1_sd) << ','
       << format_double(s.err2_median) << ',' << format_double(s.err2_mean)
       << ',' << format_double(s.err2_sd) << "\n";
  }
  return os.str();
}

}  // namespace gforecast
