#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gforecast/gibbs.hpp"
#include "gforecast/predictors.hpp"

namespace gforecast::testing {

/// Discrete-support test double: a prior over k atoms with fixed risks.
/// Sampling is either iid uniform over the atoms (for distributional tests)
/// or cyclic atom[i mod k] (which makes Monte-Carlo partition estimates agree
/// with exact enumeration whenever count is a multiple of k).
class DiscreteSubModel final : public SubModel {
 public:
  enum class Sampling { kIid, kCyclic };

  DiscreteSubModel(std::vector<double> risks, Sampling sampling,
                   int p = 1, int ell = 1)
      : risks_(std::move(risks)), sampling_(sampling) {
    if (risks_.empty()) throw std::invalid_argument("double: no atoms");
    spec_ = ModelSpec::linear(p, static_cast<double>(risks_.size()) + 1.0);
    spec_.ell = ell;
    spec_.d = 1.0;
  }

  const ModelSpec& spec() const override { return spec_; }

  Eigen::MatrixXd sample_range(std::uint64_t key, int first,
                               int count) const override {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(count, spec_.q());
    const Rng rng(derive_key(key, "atoms"));
    for (int i = 0; i < count; ++i) {
      const int global = first + i;
      size_t atom;
      if (sampling_ == Sampling::kCyclic) {
        atom = static_cast<size_t>(global) % risks_.size();
      } else {
        atom = static_cast<size_t>(
            Rng::to_unit(rng.at(static_cast<std::uint64_t>(global))) *
            static_cast<double>(risks_.size()));
        if (atom >= risks_.size()) atom = risks_.size() - 1;
      }
      out(i, 0) = static_cast<double>(atom);
    }
    return out;
  }

  Eigen::VectorXd risk_of(const Eigen::MatrixXd& coords) const override {
    Eigen::VectorXd r(coords.rows());
    for (int i = 0; i < coords.rows(); ++i)
      r(i) = risks_.at(static_cast<size_t>(coords(i, 0)));
    return r;
  }

  /// Exact log integral exp(-lambda r) dpi over the uniform atom prior.
  double exact_log_z(double lambda) const {
    double m = -lambda * risks_[0];
    for (double r : risks_) m = std::max(m, -lambda * r);
    double acc = 0.0;
    for (double r : risks_) acc += std::exp(-lambda * r - m);
    return m + std::log(acc / static_cast<double>(risks_.size()));
  }

  const std::vector<double>& risks() const { return risks_; }

 private:
  std::vector<double> risks_;
  Sampling sampling_;
  ModelSpec spec_;
};

/// Composite Simpson quadrature on [a,b].
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int intervals) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Gauss-Legendre nodes/weights on [-1,1] via Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[static_cast<size_t>(n - 1 - i)] = weights[static_cast<size_t>(i)];
  }
}

}  // namespace gforecast::testing
