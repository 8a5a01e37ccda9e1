#include "gforecast/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gforecast {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

long default_pilot(long max_proposals) {
  return std::max(1L, std::min(1000L, max_proposals / 10));
}

struct BestSeen {
  double risk = std::numeric_limits<double>::infinity();
  Eigen::VectorXd coords;
};

}  // namespace

SeriesSubModel::SeriesSubModel(ModelSpec spec, const TimeSeries& series)
    : spec_(std::move(spec)), series_(series) {
  spec_.validate();
  if (series_.n() <= spec_.p)
    throw std::invalid_argument("sub-model: series shorter than the memory");
}

Eigen::MatrixXd SeriesSubModel::sample_range(std::uint64_t key, int first,
                                             int count) const {
  return sample_prior_range(spec_, key, first, count);
}

Eigen::VectorXd SeriesSubModel::risk_of(const Eigen::MatrixXd& coords) const {
  return risk_batch(spec_, series_, coords);
}

PartitionEstimate log_partition(const SubModel& sub, double lambda,
                                int mc_samples, std::uint64_t seed) {
  require(lambda > 0.0, "log_partition: lambda must be > 0");
  require(mc_samples >= 2, "log_partition: mc_samples must be >= 2");

  const std::uint64_t key = derive_key(seed, "proposals");
  const Eigen::MatrixXd coords = sub.sample_range(key, 0, mc_samples);
  const Eigen::VectorXd risks = sub.risk_of(coords);

  double shift = -lambda * risks.minCoeff();  // max of -lambda r
  std::vector<double> weights(static_cast<size_t>(mc_samples));
  for (int i = 0; i < mc_samples; ++i)
    weights[static_cast<size_t>(i)] = std::exp(-lambda * risks(i) - shift);

  const double total = pairwise_sum(weights);
  const double log_z =
      shift + std::log(total) - std::log(static_cast<double>(mc_samples));

  // Delta method on the shifted weights: se(log Z) = sd(w) / (mean(w) sqrt(N)).
  const double w_mean = total / static_cast<double>(mc_samples);
  CompensatedSum var_acc;
  for (double w : weights) var_acc.add((w - w_mean) * (w - w_mean));
  const double w_sd =
      std::sqrt(var_acc.value() / static_cast<double>(mc_samples - 1));
  const double se_log =
      w_sd / (w_mean * std::sqrt(static_cast<double>(mc_samples)));

  return PartitionEstimate{log_z, lambda, mc_samples, se_log};
}

PartitionEstimate log_partition(const ModelSpec& m, const TimeSeries& series,
                                double lambda, int mc_samples,
                                std::uint64_t seed) {
  return log_partition(SeriesSubModel(m, series), lambda, mc_samples, seed);
}

double soft_min(const SubModel& sub, double lambda, int mc_samples,
                std::uint64_t seed) {
  return -log_partition(sub, lambda, mc_samples, seed).log_z / lambda;
}

double soft_min(const ModelSpec& m, const TimeSeries& series, double lambda,
                int mc_samples, std::uint64_t seed) {
  return soft_min(SeriesSubModel(m, series), lambda, mc_samples, seed);
}

GibbsDraw sample_gibbs(const SubModel& sub, double lambda, std::uint64_t seed,
                       long max_proposals, long pilot) {
  require(lambda >= 0.0, "sample_gibbs: lambda must be >= 0");
  require(max_proposals >= 1, "sample_gibbs: max_proposals must be >= 1");
  const std::uint64_t key_prop = derive_key(seed, "proposals");
  const Rng accept_rng(derive_key(seed, "accept"));

  if (lambda == 0.0) {
    const Eigen::MatrixXd c = sub.sample_range(key_prop, 0, 1);
    return GibbsDraw{ParamPoint(sub.spec(), c.row(0).transpose()), lambda, 1, 1,
                     false};
  }

  const long pilot_n = pilot <= 0 ? default_pilot(max_proposals) : pilot;
  if (max_proposals < pilot_n) {
    std::ostringstream os;
    os << "sample_gibbs: max_proposals " << max_proposals
       << " smaller than the pilot batch " << pilot_n;
    throw std::invalid_argument(os.str());
  }

  BestSeen best;
  const Eigen::MatrixXd pilot_coords =
      sub.sample_range(key_prop, 0, static_cast<int>(pilot_n));
  const Eigen::VectorXd pilot_risks = sub.risk_of(pilot_coords);
  for (long i = 0; i < pilot_n; ++i) {
    if (pilot_risks(static_cast<int>(i)) < best.risk) {
      best.risk = pilot_risks(static_cast<int>(i));
      best.coords = pilot_coords.row(static_cast<int>(i)).transpose();
    }
  }
  const double r_min = best.risk;

  constexpr int kBlock = 512;
  long pos = pilot_n;
  while (pos < max_proposals) {
    const int b = static_cast<int>(std::min<long>(kBlock, max_proposals - pos));
    const Eigen::MatrixXd c = sub.sample_range(key_prop, static_cast<int>(pos), b);
    const Eigen::VectorXd r = sub.risk_of(c);
    for (int j = 0; j < b; ++j) {
      const long idx = pos + j;
      if (r(j) < best.risk) {
        best.risk = r(j);
        best.coords = c.row(j).transpose();
      }
      const double u = Rng::to_unit(accept_rng.at(static_cast<std::uint64_t>(idx)));
      if (u < std::exp(-lambda * (r(j) - r_min))) {
        return GibbsDraw{ParamPoint(sub.spec(), c.row(j).transpose()), lambda, 1,
                         idx + 1, false};
      }
    }
    pos += b;
  }
  return GibbsDraw{ParamPoint(sub.spec(), best.coords), lambda, 0, max_proposals,
                   true};
}

GibbsDraw sample_gibbs(const ModelSpec& m, const TimeSeries& series,
                       double lambda, std::uint64_t seed, long max_proposals) {
  return sample_gibbs(SeriesSubModel(m, series), lambda, seed, max_proposals);
}

GibbsDraw sample_gibbs_gaussian(const SubModel& sub, double lambda,
                                std::uint64_t seed, long max_proposals,
                                const Eigen::VectorXd& center, double scale,
                                long pilot) {
  require(lambda >= 0.0, "sample_gibbs_gaussian: lambda must be >= 0");
  require(max_proposals >= 1, "sample_gibbs_gaussian: max_proposals must be >= 1");
  require(scale > 0.0, "sample_gibbs_gaussian: scale must be > 0");
  const ModelSpec& m = sub.spec();
  require(center.size() == m.q(), "sample_gibbs_gaussian: center dimension");

  const std::uint64_t key_prop = derive_key(seed, "gauss_proposals");
  const Rng accept_rng(derive_key(seed, "gauss_accept"));

  // Proposal truncated to the constraint set; the truncation constant cancels
  // in the pilot-normalized acceptance ratio.
  auto propose = [&](long idx) {
    Rng rng(derive_key(key_prop, static_cast<std::uint64_t>(idx)));
    Eigen::VectorXd z(m.q());
    for (int attempt = 0; attempt < 4096; ++attempt) {
      for (int j = 0; j < m.q(); ++j) z(j) = center(j) + scale * rng.normal();
      if (inside_constraint(m, z)) return z;
    }
    throw std::runtime_error(
        "sample_gibbs_gaussian: proposal never hit the constraint set; "
        "center/scale badly placed");
  };
  // log target/proposal ratio up to constants.
  auto log_weight = [&](const Eigen::VectorXd& z, double risk) {
    return -lambda * risk + (z - center).squaredNorm() / (2.0 * scale * scale);
  };

  const long pilot_n = pilot <= 0 ? default_pilot(max_proposals) : pilot;
  if (max_proposals < pilot_n)
    throw std::invalid_argument("sample_gibbs_gaussian: pilot exceeds budget");

  double w_max = -std::numeric_limits<double>::infinity();
  BestSeen best;
  std::vector<Eigen::VectorXd> pilot_zs;
  pilot_zs.reserve(static_cast<size_t>(pilot_n));
  Eigen::MatrixXd batch(pilot_n, m.q());
  for (long i = 0; i < pilot_n; ++i) {
    const Eigen::VectorXd z = propose(i);
    batch.row(static_cast<int>(i)) = z.transpose();
    pilot_zs.push_back(z);
  }
  const Eigen::VectorXd pilot_risks = sub.risk_of(batch);
  for (long i = 0; i < pilot_n; ++i) {
    const double w = log_weight(pilot_zs[static_cast<size_t>(i)],
                                pilot_risks(static_cast<int>(i)));
    w_max = std::max(w_max, w);
    if (pilot_risks(static_cast<int>(i)) < best.risk) {
      best.risk = pilot_risks(static_cast<int>(i));
      best.coords = pilot_zs[static_cast<size_t>(i)];
    }
  }

  for (long idx = pilot_n; idx < max_proposals; ++idx) {
    const Eigen::VectorXd z = propose(idx);
    const double risk = sub.risk_of(z.transpose())(0);
    if (risk < best.risk) {
      best.risk = risk;
      best.coords = z;
    }
    const double w = log_weight(z, risk);
    const double u = Rng::to_unit(accept_rng.at(static_cast<std::uint64_t>(idx)));
    if (std::log(u) < w - w_max)
      return GibbsDraw{ParamPoint(m, z), lambda, 1, idx + 1, false};
  }
  return GibbsDraw{ParamPoint(m, best.coords), lambda, 0, max_proposals, true};
}

}  // namespace gforecast
