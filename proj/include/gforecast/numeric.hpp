#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gforecast {

/// Neumaier-compensated accumulator. Risk averages and report statistics go
/// through this so that summation error stays at one ulp regardless of the
/// magnitude ordering of the terms.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Deterministic pairwise tree reduction keyed by element index.
double pairwise_sum(std::span<const double> xs);

/// log(sum_i exp(a[i])) with max shift; the shifted terms are reduced
/// pairwise so the result does not depend on evaluation chunking.
double log_sum_exp(std::span<const double> a);

/// Standard normal quantile, Wichura's AS 241 (PPND16). Pure rational
/// approximations, |error| < 1e-15 over (0,1); platform independent.
double normal_quantile(double p);

double mean(std::span<const double> xs);
double median(std::vector<double> xs);  // takes a copy, sorts it
double sample_sd(std::span<const double> xs);
double quantile(std::vector<double> xs, double q);  // nearest-rank style

}  // namespace gforecast
