#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "gforecast/experiment.hpp"
#include "gforecast/io.hpp"

using namespace gforecast;
using nlohmann::json;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.process = ProcessSpec::ar({0.2, 0.3, 0.2}, 0.0, InnovationSpec::gaussian(1.0));
  c.n_train = 120;
  c.n_eval = 120;
  c.skip = 4;
  c.catalog.p_max = 4;
  c.mc_samples = 300;
  c.repetitions = 3;
  c.master_seed = 5;
  return c;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("json round trips preserve specs bit for bit") {
  const auto proc =
      ProcessSpec::ar({0.2, 0.3, 0.2}, 0.125, InnovationSpec::mixture_dirac_exp(0.75));
  const ProcessSpec back = process_from_json(process_to_json(proc), "$");
  CHECK(back.coeffs == proc.coeffs);
  CHECK(back.intercept == proc.intercept);
  CHECK(back.innovation.rate == proc.innovation.rate);

  const ModelCatalog cat = ModelCatalog::linear_range(1, 4, 1.0, 500);
  const ModelCatalog cat2 = catalog_from_json(catalog_to_json(cat), "$");
  CHECK(cat2.models.size() == cat.models.size());
  CHECK(cat2.lip_cap == cat.lip_cap);

  Eigen::VectorXd coords(3);
  coords << 0.1, -0.2, 0.3;
  const ParamPoint theta(ModelSpec::linear(2, 1.0), coords);
  const ParamPoint theta2 = param_point_from_json(param_point_to_json(theta), "$");
  for (int j = 0; j < 3; ++j) CHECK(theta2.coords(j) == theta.coords(j));
}

TEST_CASE("schema errors carry field paths") {
  CHECK_THROWS_WITH_AS(process_from_json(json{{"type", "ar"}}, "$.process"),
                       doctest::Contains("$.process.coeffs"), SchemaError);
  CHECK_THROWS_WITH_AS(innovation_from_json(json{{"type", "laplace"}}, "$.innovation"),
                       doctest::Contains("unknown innovation"), SchemaError);
  CHECK_THROWS_WITH_AS(
      process_from_json(json{{"type", "ar"},
                             {"coeffs", json::array({1.5})},
                             {"intercept", 0.0},
                             {"innovation", json{{"type", "gaussian"}, {"sigma", 1.0}}}},
                        "$.process"),
      doctest::Contains("root modulus"), SchemaError);
  CHECK_THROWS_AS(config_from_json(json::object(), "$"), SchemaError);
}

TEST_CASE("series csv round trip is exact") {
  const auto spec = ProcessSpec::ar({0.5}, 0.25, InnovationSpec::gaussian(2.0));
  const TimeSeries s = simulate(spec, 64, 16, 123456789);
  const std::string path = tmp_path("gf_series_roundtrip.csv");
  write_series_csv(path, s);
  const TimeSeries r = read_series_csv(path);
  REQUIRE(r.values.size() == s.values.size());
  for (size_t i = 0; i < s.values.size(); ++i) CHECK(r.values[i] == s.values[i]);
  CHECK(r.seed == s.seed);
  CHECK(r.burn_in == s.burn_in);
  CHECK(r.origin.coeffs == s.origin.coeffs);
  std::remove(path.c_str());
}

TEST_CASE("experiment report: summaries recompute from rows exactly") {
  const ExperimentReport rep = run_experiment(tiny_config());
  CHECK(rep.rows.size() == 6);  // gibbs + aic per repetition
  const auto again = summarize(rep.rows);
  REQUIRE(again.size() == rep.summary.size());
  for (size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].err1_median == rep.summary[i].err1_median);
    CHECK(again[i].err1_mean == rep.summary[i].err1_mean);
    CHECK(again[i].err2_sd == rep.summary[i].err2_sd);
  }
  // Manual median for one method at 1e-12.
  std::vector<double> gibbs_err1;
  for (const auto& row : rep.rows)
    if (row.method == "gibbs") gibbs_err1.push_back(row.err1);
  CHECK(median(gibbs_err1) ==
        doctest::Approx(rep.summary[0].err1_median).epsilon(1e-12));
}

TEST_CASE("experiment is deterministic and seed derivation never collides") {
  const ExperimentConfig c = tiny_config();
  const ExperimentReport a = run_experiment(c);
  const ExperimentReport b = run_experiment(c);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].err1 == b.rows[i].err1);
    CHECK(a.rows[i].err2 == b.rows[i].err2);
    CHECK(a.rows[i].p_hat == b.rows[i].p_hat);
    CHECK(a.rows[i].lambda_hat == b.rows[i].lambda_hat);
  }
  const std::string ja = report_to_json(a).dump(2);
  const std::string jb = report_to_json(b).dump(2);
  CHECK(ja == jb);
  const std::string ca = report_rows_csv(a);
  CHECK(ca == report_rows_csv(b));

  std::set<std::uint64_t> seeds;
  for (int rep = 0; rep < 64; ++rep)
    for (const char* stage : {"train", "eval", "select"})
      seeds.insert(derive_key(c.master_seed, "rep", static_cast<std::uint64_t>(rep), stage));
  CHECK(seeds.size() == 64 * 3);
}

TEST_CASE("config json honors defaults and validates") {
  const json j{{"process", process_to_json(tiny_config().process)}};
  const ExperimentConfig c = config_from_json(j, "$");
  CHECK(c.n_train == 500);
  CHECK(c.catalog.p_max == 8);
  CHECK(c.K == doctest::Approx(0.1));
  CHECK(c.grid_preset == GridPreset::kPaper51);
  const json round = config_to_json(c);
  const ExperimentConfig c2 = config_from_json(round, "$");
  CHECK(c2.mc_samples == c.mc_samples);
  CHECK(c2.master_seed == c.master_seed);

  json bad = round;
  bad["repetitions"] = 0;
  CHECK_THROWS_AS(config_from_json(bad, "$"), SchemaError);
}

TEST_CASE("bench configurations cover the table rows") {
  const auto configs = bench_table1_configs(20, 1, 10000);
  REQUIRE(configs.size() == 5);
  CHECK(configs[0].first == "gaussian_sigma1");
  CHECK(configs[2].second.process.innovation.sigma == doctest::Approx(3.0));
  CHECK(configs[3].second.process.innovation.rate == doctest::Approx(1.0));
  CHECK(configs[4].second.process.innovation.rate ==
        doctest::Approx(1.0 / std::sqrt(12.0)));
  for (const auto& [label, cfg] : configs) {
    CHECK(cfg.repetitions == 20);
    CHECK(cfg.n_train == 500);
    CHECK(cfg.skip == 8);
    CHECK(cfg.catalog.p_max == 8);
    CHECK_NOTHROW(cfg.validate());
  }
}
