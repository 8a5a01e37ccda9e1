#pragma once

#include <vector>

#include "gforecast/risk.hpp"
#include "gforecast/series.hpp"

namespace gforecast {

struct OlsFit {
  std::vector<double> coeffs;  // intercept first, then lag 1..p
  double rss = 0.0;
};

/// Least-squares AR fit with AIC order selection, the stand-in for the
/// classical ARIMA-with-AIC reference procedure.
struct BaselineFit {
  int p_aic = 0;
  std::vector<double> coeffs;      // intercept + p_aic lag coefficients
  double rss = 0.0;
  std::vector<double> aic_table;   // index k holds AIC(order k+1)
  int p_max = 0;
  int n_common = 0;                // shared sample size behind every order
};

/// OLS of X_t on (1, X_{t-1}, ..., X_{t-p}) over t = p+1..n via normal
/// equations and an SPD factorization. Throws on rank-deficient designs.
OlsFit fit_ols(const TimeSeries& series, int p);

/// AIC(p) = n_eff log(rss(p)/n_eff) + 2(p+2), all orders fitted on the
/// common sample t = p_max+1..n so the RSS values are comparable.
BaselineFit aic_select(const TimeSeries& series, int p_max);

/// Hold-out scoring of a baseline fit (one-step AR predictions).
EvaluationReport evaluate_baseline(const BaselineFit& fit,
                                   const TimeSeries& eval_series, int skip);

}  // namespace gforecast
