#include "gforecast/baseline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gforecast {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// OLS on rows t = t_start..n-1 (0-based target indices).
OlsFit ols_from(const TimeSeries& series, int p, int t_start) {
  const int n = series.n();
  const int rows = n - t_start;
  Eigen::MatrixXd design(rows, p + 1);
  Eigen::VectorXd targets(rows);
  for (int t = t_start; t < n; ++t) {
    const int r = t - t_start;
    design(r, 0) = 1.0;
    for (int i = 0; i < p; ++i)
      design(r, i + 1) = series.values[static_cast<size_t>(t - 1 - i)];
    targets(r) = series.values[static_cast<size_t>(t)];
  }
  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::VectorXd moment = design.transpose() * targets;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    const auto rank =
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design).rank();
    std::ostringstream os;
    os << "fit_ols: singular design, rank " << rank << " < " << (p + 1)
       << " regressors (constant series?)";
    throw std::runtime_error(os.str());
  }
  const Eigen::VectorXd beta = llt.solve(moment);
  CompensatedSum rss;
  const Eigen::VectorXd resid = targets - design * beta;
  for (int r = 0; r < rows; ++r) rss.add(resid(r) * resid(r));
  OlsFit fit;
  fit.coeffs.assign(beta.data(), beta.data() + beta.size());
  fit.rss = rss.value();
  return fit;
}

}  // namespace

OlsFit fit_ols(const TimeSeries& series, int p) {
  require(p >= 1, "fit_ols: p must be >= 1");
  require(series.n() > 2 * (p + 1), "fit_ols: need n > 2(p+1)");
  return ols_from(series, p, p);
}

BaselineFit aic_select(const TimeSeries& series, int p_max) {
  require(p_max >= 1, "aic_select: p_max must be >= 1");
  require(series.n() > 2 * (p_max + 1), "aic_select: need n > 2(p_max+1)");
  const int n_eff = series.n() - p_max;

  BaselineFit best;
  best.p_max = p_max;
  best.n_common = n_eff;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const OlsFit fit = ols_from(series, p, p_max);
    const double aic = static_cast<double>(n_eff) *
                           std::log(fit.rss / static_cast<double>(n_eff)) +
                       2.0 * (p + 2);
    best.aic_table.push_back(aic);
    if (aic < best_aic) {
      best_aic = aic;
      best.p_aic = p;
      best.coeffs = fit.coeffs;
      best.rss = fit.rss;
    }
  }
  return best;
}

EvaluationReport evaluate_baseline(const BaselineFit& fit,
                                   const TimeSeries& eval_series, int skip) {
  return holdout_errors_fn(
      [&fit](std::span<const double> w) {
        double acc = fit.coeffs[0];
        for (size_t i = 0; i + 1 < fit.coeffs.size(); ++i)
          acc += fit.coeffs[i + 1] * w[i];
        return acc;
      },
      fit.p_aic, eval_series, skip);
}

}  // namespace gforecast
