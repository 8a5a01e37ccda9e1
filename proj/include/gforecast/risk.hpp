#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

#include "gforecast/predictors.hpp"
#include "gforecast/series.hpp"

namespace gforecast {

/// An l1 risk average together with the number of summands behind it.
struct RiskValue {
  double value = 0.0;
  int n_terms = 0;
};

/// Hold-out one-step prediction errors on an evaluation series.
struct EvaluationReport {
  double err1 = 0.0;  // mean absolute error
  double err2 = 0.0;  // mean squared error
  int p_used = 0;
  int n_eval = 0;  // number of scored time points
};

struct OracleRisk {
  RiskValue risk;
  double std_error = 0.0;  // across-repetition standard error of the mean
  int reps = 0;
};

/// Lag design: row (t - p - 1) holds (X_{t-1}, ..., X_{t-p}) for t = p+1..n.
Eigen::MatrixXd lag_matrix(const TimeSeries& series, int p);

/// Per-draw empirical risks for a batch of parameter rows (count x q).
Eigen::VectorXd risk_batch(const ModelSpec& m, const TimeSeries& series,
                           const Eigen::MatrixXd& coords);

/// (1/(n-p)) sum_{t=p+1..n} |X_t - f_theta(X_{t-1},...,X_{t-p})|.
RiskValue empirical_risk(const ParamPoint& theta, const TimeSeries& series);

EvaluationReport holdout_errors(const ParamPoint& theta,
                                const TimeSeries& eval_series, int skip);

/// Same scoring loop for any one-step predictor using p past values;
/// the AIC baseline is evaluated through this.
EvaluationReport holdout_errors_fn(
    const std::function<double(std::span<const double>)>& predictor, int p,
    const TimeSeries& eval_series, int skip);

/// Monte-Carlo estimate of the true risk R(theta) over fresh simulations of
/// the generating process; repetitions use derived sub-seeds and the default
/// burn-in of the process spec.
OracleRisk oracle_risk(const ParamPoint& theta, const ProcessSpec& spec,
                       int reps, int horizon_n, std::uint64_t seed);

}  // namespace gforecast
