#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gforecast/gibbs.hpp"
#include "gforecast/predictors.hpp"
#include "gforecast/series.hpp"

namespace gforecast {

/// Finite set of inverse temperatures attached to one model.
struct TemperatureGrid {
  std::vector<double> values;  // sorted ascending, deduplicated
  std::vector<double> g_multipliers;
  double c_check = 0.0;  // induced endpoints of the multiplier range
  double c_hat = 0.0;
  double lo = 0.0;  // admissible interval [2e, n/(4(1+L))]
  double hi = 0.0;
  bool degenerate = false;  // the formula grid missed the interval entirely

  static TemperatureGrid fixed(std::vector<double> values);
};

/// Default multipliers: geometric doubling 1, 2, 4, ... capped at 16 points.
std::vector<double> default_g_multipliers();

/// The paper-style fixed grid {2, 4, 8, ..., 1024}.
std::vector<double> paper_grid_values();

/// Grid g_i sqrt(d n) log(d n) / ((1+L) log^{3/2} n) intersected with
/// [2e, n/(4(1+L))]. Empty intersections collapse to the clamped base value
/// with the degenerate flag set. Requires model.d populated.
TemperatureGrid build_grid(const ModelSpec& m, int n,
                           std::span<const double> g_multipliers);

/// One criterion cell; value always equals the sum of the three parts.
struct CriterionValue {
  int p = 0;
  int ell = 0;
  double lambda = 0.0;
  double soft_min_part = 0.0;
  double weight_part = 0.0;    // log(n floor(n/2) m_p)/lambda, 0 in practical mode
  double variance_part = 0.0;  // lambda (1+L)^2 log^3 n/(n (1-p/n)^2), or lambda K^2/n
  double value = 0.0;
  double se_log = 0.0;
  bool grid_degenerate = false;
};

CriterionValue criterion_theoretical(const ModelSpec& m, double lambda,
                                     const PartitionEstimate& pe, int n,
                                     int m_p);
CriterionValue criterion_practical(const ModelSpec& m, double lambda,
                                   const PartitionEstimate& pe, int n,
                                   double K);

enum class CriterionMode { kTheoretical, kPractical };
enum class GridPreset { kPaper51, kTheoretical };

/// Named constant for the practical criterion: the over-penalizing
/// theoretical choice K = sqrt(2) log^{3/2}(n).
double theoretical_K(int n);

struct SelectionOptions {
  CriterionMode criterion = CriterionMode::kPractical;
  GridPreset grid = GridPreset::kPaper51;
  double K = 0.1;  // practical criterion scale
  std::vector<double> g_multipliers = default_g_multipliers();
  int mc_samples = 10000;
  long max_proposals = 10000;
  /// Risk Lipschitz constant used to populate d in theoretical mode;
  /// <= 0 derives max(1, max |X_t|) from the series.
  double lip_of_risk = 0.0;
};

struct SelectionResult {
  int p_hat = 0;
  int ell_hat = 0;
  double lambda_hat = 0.0;
  ParamPoint theta_hat;
  std::vector<CriterionValue> table;
  CriterionMode mode = CriterionMode::kPractical;
  double K = 0.0;
  long draw_accepts = 0;
  long draw_proposals = 0;
  bool draw_exhausted = false;
  double margin = 0.0;     // runner-up criterion minus winner
  double margin_se = 0.0;  // combined Monte-Carlo se of the two cells
  bool margin_warning = false;
};

/// Core selection over externally supplied sub-models (used directly by the
/// exact-enumeration tests): one grid and one m_p count per sub-model.
SelectionResult select_over(
    std::span<const SubModel* const> subs,
    const std::vector<TemperatureGrid>& grids, const std::vector<int>& m_ps,
    int n, const SelectionOptions& opts, std::uint64_t seed);

/// Full procedure: evaluates the criterion at every (model, lambda) cell of
/// the catalog with per-cell derived seeds, picks the argmin (ties broken
/// toward smaller (p, ell, lambda)) and draws theta_hat at the winner.
SelectionResult select(const ModelCatalog& catalog, const TimeSeries& series,
                       const SelectionOptions& opts, std::uint64_t seed);

}  // namespace gforecast
