#include "gforecast/series.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gforecast {

namespace {

constexpr std::string_view kInnovationStage = "innov";

// One innovation draw from its fixed pair of counter slots. Using two slots
// per index keeps the mapping (seed, index) -> value stable across kinds.
double innovation_at(const InnovationSpec& spec, const Rng& rng, std::uint64_t i) {
  switch (spec.kind) {
    case InnovationSpec::Kind::kGaussian:
      return spec.sigma * normal_quantile(Rng::to_unit_open(rng.at(2 * i)));
    case InnovationSpec::Kind::kMixtureDiracExp: {
      if (Rng::to_unit(rng.at(2 * i)) < 0.5) return 0.0;
      return -std::log1p(-Rng::to_unit(rng.at(2 * i + 1))) / spec.rate;
    }
    case InnovationSpec::Kind::kBernoulli:
      return Rng::to_unit(rng.at(2 * i)) < spec.prob ? spec.scale : 0.0;
  }
  throw std::logic_error("innovation_at: unknown kind");
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

InnovationSpec InnovationSpec::gaussian(double sigma) {
  InnovationSpec s;
  s.kind = Kind::kGaussian;
  s.sigma = sigma;
  s.validate();
  return s;
}

InnovationSpec InnovationSpec::mixture_dirac_exp(double rate) {
  InnovationSpec s;
  s.kind = Kind::kMixtureDiracExp;
  s.rate = rate;
  s.validate();
  return s;
}

InnovationSpec InnovationSpec::bernoulli(double prob, double scale) {
  InnovationSpec s;
  s.kind = Kind::kBernoulli;
  s.prob = prob;
  s.scale = scale;
  s.validate();
  return s;
}

void InnovationSpec::validate() const {
  switch (kind) {
    case Kind::kGaussian:
      require(sigma > 0.0, "innovation: gaussian sigma must be > 0");
      break;
    case Kind::kMixtureDiracExp:
      require(rate > 0.0, "innovation: mixture_dirac_exp rate must be > 0");
      break;
    case Kind::kBernoulli:
      require(prob >= 0.0 && prob <= 1.0,
              "innovation: bernoulli prob must lie in [0,1]");
      require(std::isfinite(scale), "innovation: bernoulli scale must be finite");
      break;
  }
}

double PolyComponent::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ProcessSpec ProcessSpec::ar(std::vector<double> coeffs, double intercept,
                            InnovationSpec innovation) {
  ProcessSpec s;
  s.kind = Kind::kAr;
  s.coeffs = std::move(coeffs);
  s.intercept = intercept;
  s.innovation = innovation;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::ma_truncated(std::vector<double> coeffs,
                                      InnovationSpec innovation) {
  ProcessSpec s;
  s.kind = Kind::kMaTruncated;
  s.coeffs = std::move(coeffs);
  s.innovation = innovation;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::additive_ar(std::vector<PolyComponent> components,
                                     double noise_sigma) {
  ProcessSpec s;
  s.kind = Kind::kAdditiveAr;
  s.components = std::move(components);
  s.noise_sigma = noise_sigma;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::doubling_map() {
  ProcessSpec s;
  s.kind = Kind::kDoublingMap;
  return s;
}

double ar_min_root_modulus(std::span<const double> coeffs) {
  // Trim trailing zeros; roots of z^p - a_1 z^{p-1} - ... - a_p are the
  // inverses of the roots of 1 - sum, so we report 1/spectral-radius.
  size_t p = coeffs.size();
  while (p > 0 && coeffs[p - 1] == 0.0) --p;
  if (p == 0) return std::numeric_limits<double>::infinity();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<int>(p),
                                                    static_cast<int>(p));
  for (size_t j = 0; j < p; ++j) companion(0, static_cast<int>(j)) = coeffs[j];
  for (size_t j = 1; j < p; ++j)
    companion(static_cast<int>(j), static_cast<int>(j - 1)) = 1.0;
  const Eigen::VectorXcd eig =
      Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
  double rho = 0.0;
  for (int i = 0; i < eig.size(); ++i) rho = std::max(rho, std::abs(eig(i)));
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rho;
}

void ProcessSpec::validate() const {
  switch (kind) {
    case Kind::kAr: {
      innovation.validate();
      for (double a : coeffs)
        require(std::isfinite(a), "ar: coefficients must be finite");
      require(std::isfinite(intercept), "ar: intercept must be finite");
      const double modulus = ar_min_root_modulus(coeffs);
      if (modulus <= 1.0 + 1e-9) {
        std::ostringstream os;
        os << "non-stationary ar coefficients: characteristic root modulus "
           << modulus << " is <= 1 + 1e-9";
        throw std::invalid_argument(os.str());
      }
      break;
    }
    case Kind::kMaTruncated:
      innovation.validate();
      require(!coeffs.empty(), "ma_truncated: need at least a_0");
      for (double a : coeffs)
        require(std::isfinite(a), "ma_truncated: coefficients must be finite");
      break;
    case Kind::kAdditiveAr:
      require(!components.empty(), "additive_ar: need at least one component");
      require(noise_sigma > 0.0, "additive_ar: noise_sigma must be > 0");
      break;
    case Kind::kDoublingMap:
      break;
  }
}

int ProcessSpec::memory() const {
  switch (kind) {
    case Kind::kAr:
      return static_cast<int>(coeffs.size());
    case Kind::kMaTruncated:
      return static_cast<int>(coeffs.size()) - 1;
    case Kind::kAdditiveAr:
      return static_cast<int>(components.size());
    case Kind::kDoublingMap:
      return 1;
  }
  return 0;
}

std::vector<double> sample_innovation(const InnovationSpec& spec, int count,
                                      std::uint64_t seed) {
  spec.validate();
  require(count >= 1, "sample_innovation: count must be >= 1");
  const Rng rng(derive_key(seed, kInnovationStage));
  std::vector<double> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<size_t>(i)] = innovation_at(spec, rng, static_cast<std::uint64_t>(i));
  return out;
}

TimeSeries simulate(const ProcessSpec& spec, int n, int burn_in,
                    std::uint64_t seed) {
  spec.validate();
  require(n >= 4, "simulate: n must be >= 4");
  require(burn_in >= 0, "simulate: burn_in must be >= 0");

  const Rng innov_rng(derive_key(seed, kInnovationStage));
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n));
  const int total = burn_in + n;

  switch (spec.kind) {
    case ProcessSpec::Kind::kAr: {
      const int p = static_cast<int>(spec.coeffs.size());
      std::vector<double> state(static_cast<size_t>(p), 0.0);  // state[j] = X_{t-1-j}
      for (int t = 0; t < total; ++t) {
        double x = spec.intercept +
                   innovation_at(spec.innovation, innov_rng,
                                 static_cast<std::uint64_t>(t));
        for (int j = 0; j < p; ++j) x += spec.coeffs[static_cast<size_t>(j)] * state[static_cast<size_t>(j)];
        if (p > 0) {
          for (int j = p - 1; j > 0; --j) state[static_cast<size_t>(j)] = state[static_cast<size_t>(j - 1)];
          state[0] = x;
        }
        if (t >= burn_in) values.push_back(x);
      }
      break;
    }
    case ProcessSpec::Kind::kMaTruncated: {
      const int J = static_cast<int>(spec.coeffs.size()) - 1;
      // xi with stream index t+J corresponds to time t; indices below J are
      // the pre-sample innovations needed by the first outputs.
      auto xi = [&](int t) {
        return innovation_at(spec.innovation, innov_rng,
                             static_cast<std::uint64_t>(t + J));
      };
      for (int t = 0; t < total; ++t) {
        CompensatedSum acc;
        for (int j = 0; j <= J; ++j)
          acc.add(spec.coeffs[static_cast<size_t>(j)] * xi(t - j));
        if (t >= burn_in) values.push_back(acc.value());
      }
      break;
    }
    case ProcessSpec::Kind::kAdditiveAr: {
      const int p = static_cast<int>(spec.components.size());
      std::vector<double> state(static_cast<size_t>(p), 0.0);
      const InnovationSpec noise = InnovationSpec::gaussian(spec.noise_sigma);
      for (int t = 0; t < total; ++t) {
        double x = innovation_at(noise, innov_rng, static_cast<std::uint64_t>(t));
        for (int j = 0; j < p; ++j) x += spec.components[static_cast<size_t>(j)](state[static_cast<size_t>(j)]);
        // Clipped so the state stays in the Fourier domain [-1,1].
        x = std::clamp(x, -1.0, 1.0);
        for (int j = p - 1; j > 0; --j) state[static_cast<size_t>(j)] = state[static_cast<size_t>(j - 1)];
        state[0] = x;
        if (t >= burn_in) values.push_back(x);
      }
      break;
    }
    case ProcessSpec::Kind::kDoublingMap: {
      const InnovationSpec bern = InnovationSpec::bernoulli(0.5, 1.0);
      double x = 0.5;
      for (int t = 0; t < total; ++t) {
        const double xi = innovation_at(bern, innov_rng, static_cast<std::uint64_t>(t));
        x = 0.5 * (x + xi);
        if (t >= burn_in) values.push_back(x);
      }
      break;
    }
  }

  for (double v : values) {
    if (!std::isfinite(v))
      throw std::runtime_error("simulate: produced a non-finite value");
  }
  TimeSeries out;
  out.values = std::move(values);
  out.origin = spec;
  out.seed = seed;
  out.burn_in = burn_in;
  return out;
}

TimeSeries simulate(const ProcessSpec& spec, int n, std::uint64_t seed) {
  return simulate(spec, n, spec.default_burn_in(), seed);
}

DependenceBound wdp_bound_cbs(const ProcessSpec& ma, double xi_sup) {
  require(ma.kind == ProcessSpec::Kind::kMaTruncated,
          "wdp_bound_cbs: expects a ma_truncated spec");
  require(xi_sup > 0.0, "wdp_bound_cbs: xi_sup must be > 0");
  CompensatedSum tilde_a;
  for (size_t j = 0; j < ma.coeffs.size(); ++j)
    tilde_a.add(static_cast<double>(j) * std::abs(ma.coeffs[j]));
  return DependenceBound{2.0 * xi_sup * tilde_a.value(),
                         DependenceBound::Method::kCbs};
}

DependenceBound wdp_bound_phi_mixing(std::span<const double> phi, double x_sup) {
  require(x_sup > 0.0, "wdp_bound_phi_mixing: x_sup must be > 0");
  CompensatedSum total;
  for (double v : phi) {
    require(v >= 0.0, "wdp_bound_phi_mixing: phi(r) must be >= 0");
    total.add(v);
  }
  return DependenceBound{2.0 * x_sup * total.value(),
                         DependenceBound::Method::kPhiMixing};
}

}  // namespace gforecast
