#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gforecast/predictors.hpp"
#include "test_support.hpp"

using namespace gforecast;
using gforecast::testing::gauss_legendre;
using gforecast::testing::simpson;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("predict: linear hand evaluation") {
  ParamPoint theta(ModelSpec::linear(3, 1.0), vec({0.0, 0.2, 0.3, 0.2}));
  std::vector<double> w{1.0, 1.0, 1.0};
  CHECK(predict(theta, w) == doctest::Approx(0.7).epsilon(1e-14));
  std::vector<double> bad{1.0, 1.0};
  CHECK_THROWS_AS(predict(theta, bad), std::invalid_argument);
}

TEST_CASE("predict: zero parameters give the zero predictor") {
  std::vector<double> w{0.3, -0.7};
  ParamPoint lin(ModelSpec::linear(2, 1.0), Eigen::VectorXd::Zero(3));
  CHECK(predict(lin, w) == doctest::Approx(0.0));
  const ModelSpec nn = ModelSpec::neural(2, 2, 1.0);
  ParamPoint neural(nn, Eigen::VectorXd::Zero(nn.q()));
  CHECK(predict(neural, w) == doctest::Approx(0.0));
  const ModelSpec fm = ModelSpec::fourier(2, 3, 1.0);
  ParamPoint fourier(fm, Eigen::VectorXd::Zero(fm.q()));
  CHECK(predict(fourier, w) == doctest::Approx(0.0));
}

TEST_CASE("predict: fourier basis at a symmetry point") {
  // Unit mass on phi_2 needs ellipsoid radius >= its axis weight 2.
  ParamPoint theta(ModelSpec::fourier(1, 2, 2.0), vec({0.0, 1.0}));
  std::vector<double> w{0.25};
  // phi_2(0.25) = sqrt(2) cos(pi/2) = 0.
  CHECK(predict(theta, w) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("lipschitz_sum per family") {
  ParamPoint lin(ModelSpec::linear(2, 6.0), vec({5.0, 0.1, -0.2}));
  CHECK(lipschitz_sum(lin) == doctest::Approx(0.3));

  // one unit: (c0, a_{1,1}, a_{1,2}, b_1, c_1); |c_1| * ||a_1||_1 = 2.
  ParamPoint nn(ModelSpec::neural(2, 1, 4.0), vec({0.0, 0.5, 0.5, 0.7, 2.0}));
  CHECK(lipschitz_sum(nn) == doctest::Approx(2.0));

  ParamPoint fr(ModelSpec::fourier(1, 2, 2.0), vec({0.0, 1.0}));
  CHECK(lipschitz_sum(fr) ==
        doctest::Approx(2.0 * std::numbers::sqrt2 * std::numbers::pi));
}

TEST_CASE("prior sampling: l1 symmetry and volume scaling") {
  const ModelSpec m = ModelSpec::linear(1, 1.0);  // q = 2
  const int n = 100000;
  const Eigen::MatrixXd draws = sample_prior_matrix(m, n, 404);
  for (int j = 0; j < m.q(); ++j) {
    const double mean_j = draws.col(j).mean();
    const double sd_j = std::sqrt(
        (draws.col(j).array() - mean_j).square().sum() / (n - 1));
    CHECK(std::abs(mean_j) < 4.0 * sd_j / std::sqrt(static_cast<double>(n)));
  }
  int inside = 0;
  for (int i = 0; i < n; ++i)
    inside += draws.row(i).lpNorm<1>() <= 0.5 ? 1 : 0;
  // P(||theta||_1 <= 1/2) = (1/2)^q = 0.25 by volume scaling.
  const double frac = static_cast<double>(inside) / n;
  const double band = 3.0 * std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(frac - 0.25) < band);
}

TEST_CASE("prior sampling: every draw satisfies its constraint") {
  for (const ModelSpec& m :
       {ModelSpec::linear(3, 0.8), ModelSpec::neural(2, 2, 1.5),
        ModelSpec::fourier(2, 4, 1.2)}) {
    const Eigen::MatrixXd draws = sample_prior_matrix(m, 1000, 17);
    for (int i = 0; i < draws.rows(); ++i) {
      CHECK(inside_constraint(m, draws.row(i).transpose()));
    }
    if (m.family == Family::kFourier) {
      // The paper's weighted-l2 constraint holds a fortiori.
      for (int i = 0; i < draws.rows(); ++i) {
        double acc = 0.0;
        for (int lag = 0; lag < m.p; ++lag)
          for (int j = 1; j <= m.ell; ++j) {
            const double w = 2.0 * (j / 2);
            const double v = draws(i, lag * m.ell + (j - 1));
            acc += v * v * w * w;
          }
        CHECK(acc <= m.radius * m.radius + 1e-9);
      }
    }
  }
}

TEST_CASE("prior sampling honors the range decomposition") {
  const ModelSpec m = ModelSpec::linear(2, 1.0);
  const Eigen::MatrixXd all = sample_prior_matrix(m, 64, 5);
  const Eigen::MatrixXd tail = sample_prior_range(m, 5, 32, 32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < m.q(); ++j) CHECK(all(32 + i, j) == tail(i, j));
}

TEST_CASE("complexity bound examples") {
  ModelSpec q2 = ModelSpec::linear(1, 1.0);  // q = 2
  CHECK(complexity_bound(q2, 1.0, 0.0) ==
        doctest::Approx(2.0 * (1.0 + std::log(std::numbers::e / 2.0)))
            .epsilon(1e-12));

  // q = 1 via a fourier model with p = ell = 1.
  ModelSpec q1 = ModelSpec::fourier(1, 1, 1.0);
  CHECK(q1.q() == 1);
  CHECK(complexity_bound(q1, std::numbers::e, 0.0) == doctest::Approx(3.0));

  // radius * max(...) = 1 collapses the log term: d = q.
  ModelSpec q3 = ModelSpec::linear(2, 1.0);  // q = 3, e/3 < 1, ref 0 -> max = 1
  CHECK(complexity_bound(q3, 1.0, 0.0) == doctest::Approx(3.0));

  CHECK_THROWS_WITH_AS(complexity_bound(q2, 1.0, 1.0),
                       doctest::Contains("boundary"), std::invalid_argument);
}

TEST_CASE("linear shift property") {
  Rng rng(derive_key(3, "shift"));
  const ModelSpec m = ModelSpec::linear(3, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd draw = sample_prior_matrix(m, 1, static_cast<std::uint64_t>(trial));
    ParamPoint theta(m, draw.row(0).transpose());
    std::vector<double> w{rng.normal(), rng.normal(), rng.normal()};
    const double c = rng.normal();
    std::vector<double> shifted = w;
    for (double& x : shifted) x += c;
    const double lag_sum = theta.coords.tail(3).sum();
    CHECK(predict(theta, shifted) ==
          doctest::Approx(predict(theta, w) + c * lag_sum).epsilon(1e-12));
  }
}

TEST_CASE("lipschitz certificate over random pairs") {
  Rng rng(derive_key(9, "lip_cert"));
  const std::vector<ModelSpec> models{ModelSpec::linear(3, 1.0),
                                      ModelSpec::neural(3, 2, 1.0),
                                      ModelSpec::fourier(3, 4, 1.0)};
  for (const auto& m : models) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::MatrixXd draw =
          sample_prior_range(m, 1001, trial, 1);
      ParamPoint theta(m, draw.row(0).transpose());
      std::vector<double> x(3), y(3);
      double dist = 0.0;
      for (int i = 0; i < 3; ++i) {
        // Stay inside [-1,1] so the fourier clipping cannot shrink distances.
        x[static_cast<size_t>(i)] = 2.0 * rng.uniform01() - 1.0;
        y[static_cast<size_t>(i)] = 2.0 * rng.uniform01() - 1.0;
        dist += std::abs(x[static_cast<size_t>(i)] - y[static_cast<size_t>(i)]);
      }
      const double gap = std::abs(predict(theta, x) - predict(theta, y));
      CHECK(gap <= lipschitz_sum(theta) * dist + 1e-9);
    }
  }
}

TEST_CASE("fourier basis orthonormality under uniform probability on [-1,1]") {
  std::vector<double> nodes, weights;
  gauss_legendre(64, nodes, weights);
  for (int j = 1; j <= 12; ++j) {
    for (int k = j; k <= 12; ++k) {
      double acc = 0.0;
      for (size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * fourier_basis(j, nodes[i]) * fourier_basis(k, nodes[i]);
      acc *= 0.5;  // uniform probability has density 1/2
      CHECK(acc == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("eq-dimension style bound for synthetic lipschitz risks") {
  // R(theta) = C ||theta||_1 on the l1 ball, minimized at 0. The radial law
  // of ||theta||_1 under the uniform prior is q s^{q-1} / r^q, so the
  // integral reduces to one dimension and Simpson is an independent oracle.
  for (int p : {1, 2}) {
    const ModelSpec m = ModelSpec::linear(p, 1.0);  // q = 2, 3
    const int q = m.q();
    const double C = 1.7;
    const double d = complexity_bound(m, C, 0.0);
    for (double gamma : {3.0, 10.0, 100.0}) {
      const double integral = simpson(
          [&](double s) {
            return std::exp(-gamma * C * s) * q * std::pow(s, q - 1);
          },
          0.0, 1.0, 4000);
      const double lhs = -std::log(integral);
      CHECK(lhs <= d * std::log(gamma) + 1e-9);
    }
  }
}

TEST_CASE("catalog weights and caps") {
  const ModelCatalog cat = ModelCatalog::linear_range(1, 8, 1.0, 500);
  CHECK(cat.models.size() == 8);
  CHECK(cat.lip_cap == doctest::Approx(1.0));
  for (const auto& m : cat.models) {
    CHECK(cat.m_p(m.p) == 1);
    CHECK(cat.weight(m) == doctest::Approx(1.0 / 250.0));
  }
  // Duplicate (p, ell) is rejected.
  std::vector<ModelSpec> dup{ModelSpec::linear(1, 1.0), ModelSpec::linear(1, 1.0)};
  CHECK_THROWS_AS(ModelCatalog::build(std::move(dup), 500), std::invalid_argument);
  // A catalog whose Lipschitz cap exceeds log(n)-1 is rejected.
  CHECK_THROWS_AS(ModelCatalog::linear_range(1, 2, 60.0, 500),
                  std::invalid_argument);
}

TEST_CASE("prior support worst case is honored at catalog build") {
  const ModelCatalog cat = ModelCatalog::linear_range(1, 4, 1.0, 500);
  for (const auto& m : cat.models) {
    const Eigen::MatrixXd draws = sample_prior_matrix(m, 2000, 8);
    for (int i = 0; i < draws.rows(); ++i) {
      ParamPoint theta(m, draws.row(i).transpose());
      CHECK(lipschitz_sum(theta) <= worst_case_lipschitz(m) + 1e-12);
      CHECK(lipschitz_sum(theta) <= cat.lip_cap + 1e-12);
    }
  }
}

TEST_CASE("param point validation") {
  CHECK_THROWS_AS(ParamPoint(ModelSpec::linear(1, 1.0), vec({0.9, 0.9})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParamPoint(ModelSpec::linear(2, 1.0), vec({0.1, 0.1})),
                  std::invalid_argument);
  CHECK_NOTHROW(ParamPoint(ModelSpec::linear(1, 1.0), vec({0.5, 0.5})));
}
