#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gforecast/rng.hpp"

namespace gforecast {

/// Law of the iid innovations xi_t driving a synthetic process.
struct InnovationSpec {
  enum class Kind { kGaussian, kMixtureDiracExp, kBernoulli };

  Kind kind = Kind::kGaussian;
  double sigma = 1.0;  // gaussian: N(0, sigma^2)
  double rate = 1.0;   // mixture: (delta_0 + Exp(rate)) / 2, median exactly 0
  double prob = 0.5;   // bernoulli: P(xi = scale) = prob, else 0
  double scale = 1.0;

  static InnovationSpec gaussian(double sigma);
  static InnovationSpec mixture_dirac_exp(double rate);
  static InnovationSpec bernoulli(double prob, double scale);

  void validate() const;
};

/// Component function of an additive autoregression, a polynomial evaluated
/// pointwise on [-1,1] (kept serializable so process specs round-trip).
struct PolyComponent {
  std::vector<double> coeffs;  // c0 + c1 x + c2 x^2 + ...
  double operator()(double x) const;
};

struct ProcessSpec {
  enum class Kind { kAr, kMaTruncated, kAdditiveAr, kDoublingMap };

  Kind kind = Kind::kAr;
  std::vector<double> coeffs;  // ar: a_1..a_p; ma: a_0..a_J
  double intercept = 0.0;      // ar only
  InnovationSpec innovation;   // ar and ma
  std::vector<PolyComponent> components;  // additive_ar
  double noise_sigma = 1.0;               // additive_ar gaussian noise

  static ProcessSpec ar(std::vector<double> coeffs, double intercept,
                        InnovationSpec innovation);
  static ProcessSpec ma_truncated(std::vector<double> coeffs,
                                  InnovationSpec innovation);
  static ProcessSpec additive_ar(std::vector<PolyComponent> components,
                                 double noise_sigma);
  static ProcessSpec doubling_map();

  /// Throws std::invalid_argument on bad parameters; for AR specs this
  /// includes the stationarity check on the characteristic polynomial.
  void validate() const;

  /// Memory horizon used for the burn-in default.
  int memory() const;
  int default_burn_in() const { return 10 * (memory() + 1); }
};

/// An observed sample plus the provenance needed to regenerate it.
struct TimeSeries {
  std::vector<double> values;
  ProcessSpec origin;
  std::uint64_t seed = 0;
  int burn_in = 0;

  int n() const { return static_cast<int>(values.size()); }
};

/// Upper bound on the theta_{infty,n}(1) dependence coefficient.
struct DependenceBound {
  enum class Method { kCbs, kPhiMixing };
  double value = 0.0;
  Method method = Method::kCbs;
};

/// iid draws from the innovation law; draw i is a pure function of
/// (spec, seed, i), shared with the simulators.
std::vector<double> sample_innovation(const InnovationSpec& spec, int count,
                                      std::uint64_t seed);

TimeSeries simulate(const ProcessSpec& spec, int n, int burn_in,
                    std::uint64_t seed);
TimeSeries simulate(const ProcessSpec& spec, int n, std::uint64_t seed);

/// 2 * xi_sup * sum_j j|a_j| for a truncated MA representation.
DependenceBound wdp_bound_cbs(const ProcessSpec& ma, double xi_sup);

/// 2 * x_sup * sum_r phi(r) for a bounded uniform-mixing process.
DependenceBound wdp_bound_phi_mixing(std::span<const double> phi, double x_sup);

/// Smallest modulus among the roots of 1 - sum_j a_j z^j (infinite when the
/// coefficient list is empty or all zero). Stationarity needs this > 1.
double ar_min_root_modulus(std::span<const double> coeffs);

}  // namespace gforecast
