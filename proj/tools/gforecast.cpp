// Command line front end: simulate | select | evaluate | grid | run |
// bench-table1. All randomness flows from one seed (flag > GIBBS_FORECAST_SEED
// env > config), so any command rerun with the same seed writes byte-identical
// outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "gforecast/experiment.hpp"
#include "gforecast/io.hpp"
#include "gforecast/selection.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gforecast;

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GIBBS_FORECAST_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  return std::strtoull(raw, nullptr, 10);
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value,
                           std::uint64_t fallback) {
  if (seed_opt->count() > 0) return flag_value;
  if (auto env = env_seed()) return *env;
  return fallback;
}

void emit_cell_diagnostics(const SelectionResult& res, bool verbose) {
  if (!verbose) return;
  for (const auto& cv : res.table) {
    json line{{"event", "criterion_cell"}, {"p", cv.p},          {"ell", cv.ell},
              {"lambda", cv.lambda},       {"value", cv.value},  {"se_log", cv.se_log},
              {"grid_degenerate", cv.grid_degenerate}};
    std::cerr << line.dump() << "\n";
  }
  json draw{{"event", "gibbs_draw"},
            {"accepts", res.draw_accepts},
            {"proposals", res.draw_proposals},
            {"acceptance_rate",
             res.draw_proposals > 0
                 ? static_cast<double>(res.draw_accepts) /
                       static_cast<double>(res.draw_proposals)
                 : 0.0},
            {"exhausted", res.draw_exhausted}};
  std::cerr << draw.dump() << "\n";
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_json_file(out_dir + "/report.json", report_to_json(report));
  write_text_file(out_dir + "/report.csv", report_rows_csv(report));
  write_text_file(out_dir + "/report_summary.csv", report_summary_csv(report));
}

void print_summary(const std::string& label, const ExperimentReport& report) {
  std::cout << "== " << label << " ==\n";
  std::cout << "method  err1_median err1_mean err1_sd   err2_median err2_mean err2_sd\n";
  for (const auto& s : report.summary) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-7s %-11.3f %-9.3f %-9.3f %-11.3f %-9.3f %-9.3f",
                  s.method.c_str(), s.err1_median, s.err1_mean, s.err1_sd,
                  s.err2_median, s.err2_mean, s.err2_sd);
    std::cout << buf << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-selection forecasting for weakly dependent time series"};
  app.require_subcommand(1);

  // simulate ----------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "simulate a series from a process spec");
  std::string sim_process, sim_out = "series.csv";
  int sim_n = 500, sim_burn = -1;
  std::uint64_t sim_seed = 1;
  sim->add_option("--process", sim_process, "process spec JSON file")->required();
  sim->add_option("-n,--n", sim_n, "series length");
  sim->add_option("--burn-in", sim_burn, "burn-in steps (default 10(p0+1))");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "simulation seed");
  sim->add_option("--out", sim_out, "output CSV path");

  // select ------------------------------------------------------------------
  auto* sel = app.add_subcommand("select", "run the two-step selection on a series");
  std::string sel_series, sel_catalog, sel_out = "selection.json",
              sel_table_csv, sel_mode = "practical", sel_preset = "paper-5.1";
  double sel_K = 0.1;
  int sel_mc = 10000;
  std::uint64_t sel_seed = 1;
  bool sel_verbose = false;
  int sel_pmax = 8;
  double sel_radius = 1.0;
  sel->add_option("--series", sel_series, "series CSV file")->required();
  sel->add_option("--catalog", sel_catalog, "catalog JSON (default: linear p=1..p-max)");
  sel->add_option("--p-max", sel_pmax, "linear catalog maximum memory");
  sel->add_option("--radius", sel_radius, "linear catalog l1 radius");
  sel->add_option("--mode", sel_mode, "criterion: practical | theoretical");
  sel->add_option("--grid", sel_preset, "grid preset: paper-5.1 | theoretical");
  sel->add_option("--K", sel_K, "practical criterion scale (preset 'theoretical-K' = sqrt(2) log^{3/2} n)");
  sel->add_option("--mc-samples", sel_mc, "Monte-Carlo draws per criterion cell");
  auto* sel_seed_opt = sel->add_option("--seed", sel_seed, "selection seed");
  sel->add_option("--out", sel_out, "result JSON path");
  sel->add_option("--table-csv", sel_table_csv, "also write the criterion table as CSV");
  sel->add_flag("--verbose", sel_verbose, "emit per-cell diagnostics as JSON lines");

  // evaluate ----------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "score a parameter point on a series");
  std::string ev_theta, ev_series, ev_out;
  int ev_skip = 8;
  ev->add_option("--theta", ev_theta, "parameter point JSON file")->required();
  ev->add_option("--series", ev_series, "evaluation series CSV")->required();
  ev->add_option("--skip", ev_skip, "initial observations to skip");
  ev->add_option("--out", ev_out, "write the report JSON here instead of stdout");

  // grid --------------------------------------------------------------------
  auto* gr = app.add_subcommand("grid", "print a model's temperature grid");
  std::string gr_family = "linear";
  int gr_p = 1, gr_ell = 1, gr_n = 500;
  double gr_radius = 1.0, gr_lip_of_risk = 1.0, gr_d = 0.0;
  gr->add_option("--family", gr_family, "linear | neural | fourier");
  gr->add_option("--p", gr_p, "memory")->required();
  gr->add_option("--ell", gr_ell, "size index");
  gr->add_option("--radius", gr_radius, "constraint radius");
  gr->add_option("--n", gr_n, "sample size");
  gr->add_option("--lip-of-risk", gr_lip_of_risk,
                 "risk Lipschitz constant feeding the complexity estimate");
  gr->add_option("--d", gr_d, "override the complexity estimate directly");

  // run ---------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string run_config, run_out = "out";
  std::uint64_t run_seed = 0;
  int run_mc = 0;
  bool run_keep = false;
  run->add_option("--config", run_config, "experiment config JSON")->required();
  auto* run_seed_opt = run->add_option("--seed", run_seed, "override master seed");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--mc-samples", run_mc, "override Monte-Carlo draws");
  run->add_flag("--keep-series", run_keep, "retain per-repetition series CSVs");

  // bench-table1 --------------------------------------------------------------
  auto* bench = app.add_subcommand(
      "bench-table1", "run the four reference configurations and summarize");
  std::string bench_out = "bench";
  int bench_reps = 20, bench_mc = 10000;
  std::uint64_t bench_seed = 1;
  bool bench_keep = false;
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--reps", bench_reps, "repetitions per configuration");
  bench->add_option("--mc-samples", bench_mc, "Monte-Carlo draws per cell");
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "master seed");
  bench->add_flag("--keep-series", bench_keep, "retain per-repetition series CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const json pj = read_json_file(sim_process);
      const ProcessSpec spec = process_from_json(pj, "$");
      const std::uint64_t seed = resolve_seed(sim_seed_opt, sim_seed, 1);
      const TimeSeries series =
          sim_burn >= 0 ? simulate(spec, sim_n, sim_burn, seed)
                        : simulate(spec, sim_n, seed);
      write_series_csv(sim_out, series);
      std::cout << "wrote " << series.n() << " observations to " << sim_out << "\n";
    } else if (*sel) {
      const TimeSeries series = read_series_csv(sel_series);
      ModelCatalog catalog =
          sel_catalog.empty()
              ? ModelCatalog::linear_range(1, sel_pmax, sel_radius,
                                           series.n())
              : catalog_from_json(read_json_file(sel_catalog), "$");
      SelectionOptions opts;
      if (sel_mode == "practical") opts.criterion = CriterionMode::kPractical;
      else if (sel_mode == "theoretical") opts.criterion = CriterionMode::kTheoretical;
      else throw std::invalid_argument("--mode must be practical or theoretical");
      if (sel_preset == "paper-5.1") opts.grid = GridPreset::kPaper51;
      else if (sel_preset == "theoretical") opts.grid = GridPreset::kTheoretical;
      else throw std::invalid_argument("--grid must be paper-5.1 or theoretical");
      opts.K = sel_K;
      opts.mc_samples = sel_mc;
      opts.max_proposals = sel_mc;
      const std::uint64_t seed = resolve_seed(sel_seed_opt, sel_seed, 1);
      const SelectionResult res = select(catalog, series, opts, seed);
      emit_cell_diagnostics(res, sel_verbose);
      if (res.margin_warning) {
        std::cerr << "warning: winning margin " << res.margin
                  << " is below twice the combined Monte-Carlo se "
                  << res.margin_se << "; the argmin may flip across seeds\n";
      }
      write_json_file(sel_out, selection_result_to_json(res));
      if (!sel_table_csv.empty()) {
        std::ostringstream os;
        os << "p,ell,lambda,soft_min,weight_part,variance_part,value,se_log,grid_degenerate\n";
        for (const auto& cv : res.table) {
          os << cv.p << ',' << cv.ell << ',' << format_double(cv.lambda) << ','
             << format_double(cv.soft_min_part) << ','
             << format_double(cv.weight_part) << ','
             << format_double(cv.variance_part) << ','
             << format_double(cv.value) << ',' << format_double(cv.se_log)
             << ',' << (cv.grid_degenerate ? 1 : 0) << "\n";
        }
        write_text_file(sel_table_csv, os.str());
      }
      std::cout << "selected p=" << res.p_hat << " ell=" << res.ell_hat
                << " lambda=" << res.lambda_hat << " -> " << sel_out << "\n";
    } else if (*ev) {
      const ParamPoint theta =
          param_point_from_json(read_json_file(ev_theta), "$");
      const TimeSeries series = read_series_csv(ev_series);
      const EvaluationReport rep = holdout_errors(theta, series, ev_skip);
      const json out = evaluation_to_json(rep);
      if (ev_out.empty()) std::cout << out.dump(2) << "\n";
      else write_json_file(ev_out, out);
    } else if (*gr) {
      ModelSpec m;
      const Family family = family_from_name(gr_family);
      switch (family) {
        case Family::kLinear: m = ModelSpec::linear(gr_p, gr_radius); break;
        case Family::kNeural: m = ModelSpec::neural(gr_p, gr_ell, gr_radius); break;
        case Family::kFourier: m = ModelSpec::fourier(gr_p, gr_ell, gr_radius); break;
      }
      m.d = gr_d > 0.0 ? gr_d : complexity_bound(m, gr_lip_of_risk, 0.0);
      const TemperatureGrid g = build_grid(m, gr_n, default_g_multipliers());
      std::cout << grid_to_json(g).dump(2) << "\n";
    } else if (*run) {
      ExperimentConfig config =
          config_from_json(read_json_file(run_config), "$");
      if (run_seed_opt->count() > 0) config.master_seed = run_seed;
      else if (auto env = env_seed()) config.master_seed = *env;
      if (run_mc > 0) config.mc_samples = run_mc;
      config.validate();
      std::optional<std::string> series_dir;
      if (run_keep) {
        series_dir = run_out + "/series";
        fs::create_directories(*series_dir);
      }
      const ExperimentReport report = run_experiment(config, series_dir);
      write_report(report, run_out);
      print_summary("experiment", report);
    } else if (*bench) {
      const std::uint64_t seed = resolve_seed(bench_seed_opt, bench_seed, 1);
      for (const auto& [label, config] :
           bench_table1_configs(bench_reps, seed, bench_mc)) {
        const std::string dir = bench_out + "/" + label;
        std::optional<std::string> series_dir;
        if (bench_keep) {
          series_dir = dir + "/series";
          fs::create_directories(*series_dir);
        } else {
          fs::create_directories(dir);
        }
        const ExperimentReport report = run_experiment(config, series_dir);
        write_report(report, dir);
        print_summary(label, report);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
