#include "gforecast/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gforecast/parallel.hpp"

namespace gforecast {

namespace {

constexpr double kTwoE = 2.0 * std::numbers::e;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double cube(double x) { return x * x * x; }

}  // namespace

TemperatureGrid TemperatureGrid::fixed(std::vector<double> values) {
  require(!values.empty(), "temperature grid: empty value list");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  TemperatureGrid g;
  g.values = std::move(values);
  g.lo = g.values.front();
  g.hi = g.values.back();
  return g;
}

std::vector<double> default_g_multipliers() {
  std::vector<double> g;
  double v = 1.0;
  for (int i = 0; i < 16; ++i) {
    g.push_back(v);
    v *= 2.0;
  }
  return g;
}

std::vector<double> paper_grid_values() {
  std::vector<double> g;
  for (double v = 2.0; v <= 1024.0; v *= 2.0) g.push_back(v);
  return g;
}

TemperatureGrid build_grid(const ModelSpec& m, int n,
                           std::span<const double> g_multipliers) {
  m.validate();
  require(m.d >= 1.0, "build_grid: model complexity d not populated");
  require(!g_multipliers.empty(), "build_grid: need at least one multiplier");
  const double L = m.lip_cap;
  const double n_min = std::ceil(8.0 * std::numbers::e * (1.0 + L));
  if (static_cast<double>(n) < n_min) {
    std::ostringstream os;
    os << "build_grid: n = " << n << " below the required 8e(1+L) = " << n_min;
    throw std::invalid_argument(os.str());
  }
  for (size_t i = 1; i < g_multipliers.size(); ++i)
    require(g_multipliers[i] > g_multipliers[i - 1],
            "build_grid: multipliers must be strictly increasing");

  const double dn = m.d * static_cast<double>(n);
  const double base = std::sqrt(dn) * std::log(dn) /
                      ((1.0 + L) * std::pow(std::log(static_cast<double>(n)), 1.5));
  TemperatureGrid g;
  g.g_multipliers.assign(g_multipliers.begin(), g_multipliers.end());
  g.c_check = g_multipliers.front();
  g.c_hat = g_multipliers.back();
  g.lo = kTwoE;
  g.hi = static_cast<double>(n) / (4.0 * (1.0 + L));
  for (double gi : g_multipliers) {
    const double v = gi * base;
    if (v >= g.lo && v <= g.hi) g.values.push_back(v);
  }
  std::sort(g.values.begin(), g.values.end());
  g.values.erase(std::unique(g.values.begin(), g.values.end()), g.values.end());
  if (g.values.empty()) {
    g.values.push_back(std::clamp(base, g.lo, g.hi));
    g.degenerate = true;
  }
  return g;
}

double theoretical_K(int n) {
  return std::numbers::sqrt2 * std::pow(std::log(static_cast<double>(n)), 1.5);
}

CriterionValue criterion_theoretical(const ModelSpec& m, double lambda,
                                     const PartitionEstimate& pe, int n,
                                     int m_p) {
  require(lambda > 0.0, "criterion: lambda must be > 0");
  require(m.p < n, "criterion: p must be smaller than n");
  require(m_p >= 1, "criterion: m_p must be >= 1");
  CriterionValue cv;
  cv.p = m.p;
  cv.ell = m.ell;
  cv.lambda = lambda;
  cv.soft_min_part = -pe.log_z / lambda;
  cv.weight_part =
      std::log(static_cast<double>(n) * static_cast<double>(n / 2) *
               static_cast<double>(m_p)) /
      lambda;
  const double ratio = 1.0 - static_cast<double>(m.p) / static_cast<double>(n);
  cv.variance_part = lambda * (1.0 + m.lip_cap) * (1.0 + m.lip_cap) *
                     cube(std::log(static_cast<double>(n))) /
                     (static_cast<double>(n) * ratio * ratio);
  cv.value = cv.soft_min_part + cv.weight_part + cv.variance_part;
  cv.se_log = pe.se_log;
  return cv;
}

CriterionValue criterion_practical(const ModelSpec& m, double lambda,
                                   const PartitionEstimate& pe, int n,
                                   double K) {
  require(lambda > 0.0, "criterion: lambda must be > 0");
  require(m.p < n, "criterion: p must be smaller than n");
  require(K > 0.0, "criterion: K must be > 0");
  CriterionValue cv;
  cv.p = m.p;
  cv.ell = m.ell;
  cv.lambda = lambda;
  cv.soft_min_part = -pe.log_z / lambda;
  cv.weight_part = 0.0;
  cv.variance_part = lambda * K * K / static_cast<double>(n);
  cv.value = cv.soft_min_part + cv.weight_part + cv.variance_part;
  cv.se_log = pe.se_log;
  return cv;
}

SelectionResult select_over(std::span<const SubModel* const> subs,
                            const std::vector<TemperatureGrid>& grids,
                            const std::vector<int>& m_ps, int n,
                            const SelectionOptions& opts, std::uint64_t seed) {
  require(!subs.empty(), "select: empty catalog");
  require(grids.size() == subs.size() && m_ps.size() == subs.size(),
          "select: grids/m_p shape mismatch");

  struct Cell {
    int sub_index;
    int lambda_index;
  };
  std::vector<Cell> cells;
  for (size_t mi = 0; mi < subs.size(); ++mi)
    for (size_t lj = 0; lj < grids[mi].values.size(); ++lj)
      cells.push_back({static_cast<int>(mi), static_cast<int>(lj)});

  std::vector<CriterionValue> table(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int c) {
    const Cell& cell = cells[static_cast<size_t>(c)];
    const SubModel& sub = *subs[static_cast<size_t>(cell.sub_index)];
    const double lambda =
        grids[static_cast<size_t>(cell.sub_index)].values[static_cast<size_t>(cell.lambda_index)];
    const std::uint64_t cell_seed =
        derive_key(seed, "cell", static_cast<std::uint64_t>(cell.sub_index),
                   static_cast<std::uint64_t>(cell.lambda_index));
    const PartitionEstimate pe =
        log_partition(sub, lambda, opts.mc_samples, cell_seed);
    CriterionValue cv =
        opts.criterion == CriterionMode::kTheoretical
            ? criterion_theoretical(sub.spec(), lambda, pe, n,
                                    m_ps[static_cast<size_t>(cell.sub_index)])
            : criterion_practical(sub.spec(), lambda, pe, n, opts.K);
    cv.grid_degenerate = grids[static_cast<size_t>(cell.sub_index)].degenerate;
    table[static_cast<size_t>(c)] = cv;
  });

  // Deterministic sequential argmin; ties prefer smaller (p, ell, lambda).
  auto better = [](const CriterionValue& a, const CriterionValue& b) {
    if (a.value != b.value) return a.value < b.value;
    return std::tie(a.p, a.ell, a.lambda) < std::tie(b.p, b.ell, b.lambda);
  };
  size_t best = 0;
  for (size_t i = 1; i < table.size(); ++i)
    if (better(table[i], table[best])) best = i;

  const Cell& win = cells[best];
  const SubModel& win_sub = *subs[static_cast<size_t>(win.sub_index)];
  GibbsDraw draw = sample_gibbs(
      win_sub, table[best].lambda,
      derive_key(seed, "draw", static_cast<std::uint64_t>(win.sub_index),
                 static_cast<std::uint64_t>(win.lambda_index)),
      opts.max_proposals);

  SelectionResult res{.p_hat = table[best].p,
                      .ell_hat = table[best].ell,
                      .lambda_hat = table[best].lambda,
                      .theta_hat = std::move(draw.theta),
                      .table = std::move(table),
                      .mode = opts.criterion,
                      .K = opts.K,
                      .draw_accepts = draw.accept_count,
                      .draw_proposals = draw.proposal_count,
                      .draw_exhausted = draw.exhausted};

  if (res.table.size() >= 2) {
    size_t runner = best == 0 ? 1 : 0;
    for (size_t i = 0; i < res.table.size(); ++i) {
      if (i == best || i == runner) continue;
      if (better(res.table[i], res.table[runner])) runner = i;
    }
    const CriterionValue& w = res.table[best];
    const CriterionValue& r = res.table[runner];
    res.margin = r.value - w.value;
    res.margin_se = std::hypot(w.se_log / w.lambda, r.se_log / r.lambda);
    res.margin_warning = res.margin < 2.0 * res.margin_se;
  }
  return res;
}

SelectionResult select(const ModelCatalog& catalog, const TimeSeries& series,
                       const SelectionOptions& opts, std::uint64_t seed) {
  catalog.validate();
  require(series.n() >= 4, "select: series too short");

  ModelCatalog cat = catalog;  // local copy so d can be populated
  if (opts.grid == GridPreset::kTheoretical) {
    double C = opts.lip_of_risk;
    if (C <= 0.0) {
      double sup = 0.0;
      for (double v : series.values) sup = std::max(sup, std::abs(v));
      C = std::max(1.0, sup);
    }
    for (auto& m : cat.models)
      if (m.d < 1.0) m.d = complexity_bound(m, C, 0.0);
  }

  std::vector<std::unique_ptr<SubModel>> owned;
  std::vector<const SubModel*> subs;
  std::vector<TemperatureGrid> grids;
  std::vector<int> m_ps;
  for (const auto& m : cat.models) {
    owned.push_back(std::make_unique<SeriesSubModel>(m, series));
    subs.push_back(owned.back().get());
    grids.push_back(opts.grid == GridPreset::kPaper51
                        ? TemperatureGrid::fixed(paper_grid_values())
                        : build_grid(m, cat.n, opts.g_multipliers));
    m_ps.push_back(cat.m_p(m.p));
  }
  return select_over(subs, grids, m_ps, cat.n, opts, seed);
}

}  // namespace gforecast
