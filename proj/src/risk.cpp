#include "gforecast/risk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gforecast/parallel.hpp"

namespace gforecast {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Feature expansion that makes the predictor linear in its coordinates
// (linear and fourier families). Neural predictors are evaluated directly.
Eigen::MatrixXd feature_matrix(const ModelSpec& m, const TimeSeries& series) {
  const Eigen::MatrixXd lags = lag_matrix(series, m.p);
  const int rows = static_cast<int>(lags.rows());
  switch (m.family) {
    case Family::kLinear: {
      Eigen::MatrixXd f(rows, m.p + 1);
      f.col(0).setOnes();
      f.rightCols(m.p) = lags;
      return f;
    }
    case Family::kFourier: {
      Eigen::MatrixXd f(rows, m.p * m.ell);
      for (int r = 0; r < rows; ++r)
        for (int i = 0; i < m.p; ++i)
          for (int j = 1; j <= m.ell; ++j)
            f(r, i * m.ell + (j - 1)) = fourier_basis(j, lags(r, i));
      return f;
    }
    case Family::kNeural:
      return lags;
  }
  throw std::logic_error("feature_matrix: unknown family");
}

double kahan_mean_abs_residual(const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& preds) {
  CompensatedSum acc;
  for (int t = 0; t < targets.size(); ++t)
    acc.add(std::abs(targets(t) - preds(t)));
  return acc.value() / static_cast<double>(targets.size());
}

}  // namespace

Eigen::MatrixXd lag_matrix(const TimeSeries& series, int p) {
  const int n = series.n();
  require(p >= 1, "lag_matrix: p must be >= 1");
  require(n > p, "lag_matrix: series shorter than the model memory");
  Eigen::MatrixXd lags(n - p, p);
  for (int t = p; t < n; ++t)
    for (int i = 0; i < p; ++i)
      lags(t - p, i) = series.values[static_cast<size_t>(t - 1 - i)];
  return lags;
}

Eigen::VectorXd risk_batch(const ModelSpec& m, const TimeSeries& series,
                           const Eigen::MatrixXd& coords) {
  require(coords.cols() == m.q(), "risk_batch: coordinate dimension mismatch");
  const int n = series.n();
  require(n > m.p, "risk: series length must exceed the model memory");
  const int rows = n - m.p;
  Eigen::VectorXd targets(rows);
  for (int t = m.p; t < n; ++t) targets(t - m.p) = series.values[static_cast<size_t>(t)];

  const Eigen::MatrixXd features = feature_matrix(m, series);
  const int count = static_cast<int>(coords.rows());
  Eigen::VectorXd risks(count);

  if (m.family == Family::kNeural) {
    Eigen::VectorXd acc(rows), z(rows);
    for (int r = 0; r < count; ++r) {
      acc.setConstant(coords(r, 0));
      for (int u = 0; u < m.ell; ++u) {
        const int base = 1 + u * (m.p + 2);
        z.noalias() = features * coords.row(r).segment(base, m.p).transpose();
        z.array() += coords(r, base + m.p);
        acc.array() +=
            coords(r, base + m.p + 1) / (1.0 + (-z.array()).exp());
      }
      risks(r) = kahan_mean_abs_residual(targets, acc);
    }
    return risks;
  }

  // Linear-in-parameter families: blocked GEMM against the feature matrix.
  constexpr int kBlock = 2048;
  Eigen::MatrixXd preds;
  for (int start = 0; start < count; start += kBlock) {
    const int b = std::min(kBlock, count - start);
    preds.noalias() = features * coords.middleRows(start, b).transpose();
    for (int j = 0; j < b; ++j)
      risks(start + j) = kahan_mean_abs_residual(targets, preds.col(j));
  }
  return risks;
}

RiskValue empirical_risk(const ParamPoint& theta, const TimeSeries& series) {
  const int n = series.n();
  if (n <= theta.model.p) {
    std::ostringstream os;
    os << "empirical_risk: series length " << n << " must exceed memory "
       << theta.model.p;
    throw std::invalid_argument(os.str());
  }
  const Eigen::VectorXd risks =
      risk_batch(theta.model, series, theta.coords.transpose());
  return RiskValue{risks(0), n - theta.model.p};
}

EvaluationReport holdout_errors_fn(
    const std::function<double(std::span<const double>)>& predictor, int p,
    const TimeSeries& eval_series, int skip) {
  const int n = eval_series.n();
  require(skip >= p, "holdout_errors: skip must be >= the model memory");
  require(n > skip, "holdout_errors: evaluation series not longer than skip");
  CompensatedSum abs_acc, sq_acc;
  std::vector<double> window(static_cast<size_t>(p));
  for (int t = skip; t < n; ++t) {
    for (int i = 0; i < p; ++i)
      window[static_cast<size_t>(i)] = eval_series.values[static_cast<size_t>(t - 1 - i)];
    const double e = eval_series.values[static_cast<size_t>(t)] - predictor(window);
    abs_acc.add(std::abs(e));
    sq_acc.add(e * e);
  }
  const double denom = static_cast<double>(n - skip);
  return EvaluationReport{abs_acc.value() / denom, sq_acc.value() / denom, p,
                          n - skip};
}

EvaluationReport holdout_errors(const ParamPoint& theta,
                                const TimeSeries& eval_series, int skip) {
  return holdout_errors_fn(
      [&theta](std::span<const double> w) { return predict(theta, w); },
      theta.model.p, eval_series, skip);
}

OracleRisk oracle_risk(const ParamPoint& theta, const ProcessSpec& spec,
                       int reps, int horizon_n, std::uint64_t seed) {
  require(reps >= 1, "oracle_risk: reps must be >= 1");
  require(horizon_n > theta.model.p, "oracle_risk: horizon too short");
  std::vector<double> values(static_cast<size_t>(reps));
  parallel_for(reps, [&](int r) {
    const TimeSeries sim =
        simulate(spec, horizon_n, derive_key(seed, "oracle_rep", static_cast<std::uint64_t>(r)));
    values[static_cast<size_t>(r)] = empirical_risk(theta, sim).value;
  });
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  const double m = acc.value() / static_cast<double>(reps);
  double se = 0.0;
  if (reps >= 2) se = sample_sd(values) / std::sqrt(static_cast<double>(reps));
  return OracleRisk{RiskValue{m, reps * (horizon_n - theta.model.p)}, se, reps};
}

}  // namespace gforecast
