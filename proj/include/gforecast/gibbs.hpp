#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>

#include "gforecast/predictors.hpp"
#include "gforecast/risk.hpp"
#include "gforecast/series.hpp"

namespace gforecast {

/// A (prior, empirical risk) pair the Gibbs machinery operates on. The
/// production implementation wraps one ModelSpec and the observed series;
/// tests substitute discrete supports to get exactly enumerable targets.
class SubModel {
 public:
  virtual ~SubModel() = default;

  virtual const ModelSpec& spec() const = 0;

  /// Prior draws with indices [first, first+count) of sub-stream `key`;
  /// draw i is a pure function of (key, i).
  virtual Eigen::MatrixXd sample_range(std::uint64_t key, int first,
                                       int count) const = 0;

  /// Empirical risks of a batch of coordinate rows.
  virtual Eigen::VectorXd risk_of(const Eigen::MatrixXd& coords) const = 0;
};

/// SubModel over an observed series; caches the feature expansion once.
class SeriesSubModel final : public SubModel {
 public:
  SeriesSubModel(ModelSpec spec, const TimeSeries& series);

  const ModelSpec& spec() const override { return spec_; }
  Eigen::MatrixXd sample_range(std::uint64_t key, int first,
                               int count) const override;
  Eigen::VectorXd risk_of(const Eigen::MatrixXd& coords) const override;

 private:
  ModelSpec spec_;
  const TimeSeries& series_;
};

/// Monte-Carlo estimate of log integral exp(-lambda r_n) dpi.
struct PartitionEstimate {
  double log_z = 0.0;
  double lambda = 0.0;
  int mc_samples = 0;
  double se_log = 0.0;  // delta-method standard error of log_z
};

struct GibbsDraw {
  ParamPoint theta;
  double lambda = 0.0;
  long accept_count = 0;
  long proposal_count = 0;
  bool exhausted = false;  // proposal budget ran out; theta is the best seen
};

PartitionEstimate log_partition(const SubModel& sub, double lambda,
                                int mc_samples, std::uint64_t seed);
PartitionEstimate log_partition(const ModelSpec& m, const TimeSeries& series,
                                double lambda, int mc_samples,
                                std::uint64_t seed);

/// -log_z / lambda: interpolates from the prior-mean risk (small lambda)
/// down to the minimum sampled risk (large lambda).
double soft_min(const SubModel& sub, double lambda, int mc_samples,
                std::uint64_t seed);
double soft_min(const ModelSpec& m, const TimeSeries& series, double lambda,
                int mc_samples, std::uint64_t seed);

/// Draws theta ~ pi{-lambda r_n} by accept/reject with the uniform prior as
/// proposal: a pilot batch establishes the reference risk minimum, then
/// proposals are accepted with probability exp(-lambda (r - r_min)). If the
/// budget is exhausted the best-risk proposal is returned and flagged.
/// pilot <= 0 selects the default min(1000, max_proposals/10).
GibbsDraw sample_gibbs(const SubModel& sub, double lambda, std::uint64_t seed,
                       long max_proposals, long pilot = 0);
GibbsDraw sample_gibbs(const ModelSpec& m, const TimeSeries& series,
                       double lambda, std::uint64_t seed, long max_proposals);

/// Fidelity variant with an independence Gaussian proposal. Center and scale
/// must be supplied explicitly; proposals falling outside the constraint set
/// are rejected and redrawn. Targets the same Gibbs law.
GibbsDraw sample_gibbs_gaussian(const SubModel& sub, double lambda,
                                std::uint64_t seed, long max_proposals,
                                const Eigen::VectorXd& center, double scale,
                                long pilot = 0);

}  // namespace gforecast
