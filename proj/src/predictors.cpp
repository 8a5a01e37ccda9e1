#include "gforecast/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gforecast {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double clip_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kLinear: return "linear";
    case Family::kNeural: return "neural";
    case Family::kFourier: return "fourier";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "linear") return Family::kLinear;
  if (name == "neural") return Family::kNeural;
  if (name == "fourier") return Family::kFourier;
  throw std::invalid_argument("unknown predictor family: " + name);
}

int ModelSpec::q() const {
  switch (family) {
    case Family::kLinear: return p + 1;
    case Family::kNeural: return ell * (p + 2) + 1;
    case Family::kFourier: return p * ell;
  }
  return 0;
}

void ModelSpec::validate() const {
  require(p >= 1, "model: p must be >= 1");
  require(ell >= 1, "model: ell must be >= 1");
  require(family != Family::kLinear || ell == 1, "model: linear family has ell = 1");
  require(radius > 0.0, "model: radius must be > 0");
  require(lip_cap > 0.0, "model: lip_cap must be > 0");
}

ModelSpec ModelSpec::linear(int p, double radius) {
  ModelSpec m;
  m.family = Family::kLinear;
  m.p = p;
  m.ell = 1;
  m.radius = radius;
  m.lip_cap = std::max(radius, 1e-12);
  m.validate();
  return m;
}

ModelSpec ModelSpec::neural(int p, int ell, double radius) {
  ModelSpec m;
  m.family = Family::kNeural;
  m.p = p;
  m.ell = ell;
  m.radius = radius;
  m.validate();
  m.lip_cap = worst_case_lipschitz(m);
  return m;
}

ModelSpec ModelSpec::fourier(int p, int ell, double radius) {
  ModelSpec m;
  m.family = Family::kFourier;
  m.p = p;
  m.ell = ell;
  m.radius = radius;
  m.validate();
  m.lip_cap = std::max(worst_case_lipschitz(m), 1e-12);
  return m;
}

double fourier_basis(int j, double x) {
  require(j >= 1, "fourier_basis: j must be >= 1");
  x = clip_unit(x);
  if (j == 1) return 1.0;
  const int k = j / 2;
  if (j % 2 == 0) return kSqrt2 * std::cos(2.0 * kPi * k * x);
  return kSqrt2 * std::sin(2.0 * kPi * k * x);
}

double fourier_basis_lipschitz(int j) {
  require(j >= 1, "fourier_basis_lipschitz: j must be >= 1");
  return 2.0 * kSqrt2 * kPi * (j / 2);
}

double fourier_axis_weight(int j) {
  require(j >= 1, "fourier_axis_weight: j must be >= 1");
  return std::max(2.0 * (j / 2), 1.0);
}

bool inside_constraint(const ModelSpec& m, const Eigen::VectorXd& coords,
                       double tol) {
  if (coords.size() != m.q()) return false;
  switch (m.family) {
    case Family::kLinear:
    case Family::kNeural:
      return coords.lpNorm<1>() <= m.radius + tol;
    case Family::kFourier: {
      double acc = 0.0;
      for (int i = 0; i < m.p; ++i) {
        for (int j = 1; j <= m.ell; ++j) {
          const double w = fourier_axis_weight(j);
          const double v = coords(i * m.ell + (j - 1));
          acc += v * v * w * w;
        }
      }
      return acc <= m.radius * m.radius + tol;
    }
  }
  return false;
}

ParamPoint::ParamPoint(ModelSpec m, Eigen::VectorXd c)
    : model(std::move(m)), coords(std::move(c)) {
  model.validate();
  if (coords.size() != model.q()) {
    std::ostringstream os;
    os << "param point: expected " << model.q() << " coordinates, got "
       << coords.size();
    throw std::invalid_argument(os.str());
  }
  if (!inside_constraint(model, coords))
    throw std::invalid_argument("param point: outside the constraint set");
}

double predict(const ParamPoint& theta, std::span<const double> window) {
  const ModelSpec& m = theta.model;
  if (static_cast<int>(window.size()) != m.p) {
    std::ostringstream os;
    os << "predict: window length " << window.size() << " != model memory "
       << m.p;
    throw std::invalid_argument(os.str());
  }
  const Eigen::VectorXd& c = theta.coords;
  switch (m.family) {
    case Family::kLinear: {
      CompensatedSum acc;
      acc.add(c(0));
      for (int i = 0; i < m.p; ++i) acc.add(c(i + 1) * window[static_cast<size_t>(i)]);
      return acc.value();
    }
    case Family::kNeural: {
      CompensatedSum acc;
      acc.add(c(0));
      for (int u = 0; u < m.ell; ++u) {
        const int base = 1 + u * (m.p + 2);
        double z = c(base + m.p);  // b_u
        for (int i = 0; i < m.p; ++i) z += c(base + i) * window[static_cast<size_t>(i)];
        acc.add(c(base + m.p + 1) / (1.0 + std::exp(-z)));
      }
      return acc.value();
    }
    case Family::kFourier: {
      CompensatedSum acc;
      for (int i = 0; i < m.p; ++i) {
        const double x = window[static_cast<size_t>(i)];
        for (int j = 1; j <= m.ell; ++j)
          acc.add(c(i * m.ell + (j - 1)) * fourier_basis(j, x));
      }
      return acc.value();
    }
  }
  throw std::logic_error("predict: unknown family");
}

double lipschitz_sum(const ParamPoint& theta) {
  const ModelSpec& m = theta.model;
  const Eigen::VectorXd& c = theta.coords;
  switch (m.family) {
    case Family::kLinear:
      return c.tail(m.p).lpNorm<1>();
    case Family::kNeural: {
      // sigma is 1-Lipschitz, so unit u contributes |c_u| * ||a_u||_1.
      double acc = 0.0;
      for (int u = 0; u < m.ell; ++u) {
        const int base = 1 + u * (m.p + 2);
        acc += std::abs(c(base + m.p + 1)) * c.segment(base, m.p).lpNorm<1>();
      }
      return acc;
    }
    case Family::kFourier: {
      double acc = 0.0;
      for (int i = 0; i < m.p; ++i)
        for (int j = 1; j <= m.ell; ++j)
          acc += std::abs(c(i * m.ell + (j - 1))) * fourier_basis_lipschitz(j);
      return acc;
    }
  }
  throw std::logic_error("lipschitz_sum: unknown family");
}

double worst_case_lipschitz(const ModelSpec& m) {
  switch (m.family) {
    case Family::kLinear:
      // All l1 mass on one lag coefficient.
      return m.radius;
    case Family::kNeural:
      // Split the l1 budget between one output weight and its input row.
      return (m.radius / 2.0) * (m.radius / 2.0);
    case Family::kFourier: {
      // max of sum |theta_ij| lip(phi_j) over the ellipsoid: the axis-wise
      // ratio lip(phi_j)/weight_j equals sqrt(2) pi for every j >= 2.
      if (m.ell < 2) return 0.0;
      return kSqrt2 * kPi * std::sqrt(static_cast<double>(m.p) * (m.ell - 1)) *
             m.radius;
    }
  }
  throw std::logic_error("worst_case_lipschitz: unknown family");
}

Eigen::MatrixXd sample_prior_range(const ModelSpec& m, std::uint64_t seed,
                                   int first, int count) {
  m.validate();
  require(first >= 0 && count >= 1, "sample_prior: need first >= 0, count >= 1");
  const int q = m.q();
  Eigen::MatrixXd out(count, q);
  const std::uint64_t base = derive_key(seed, "prior");
  for (int r = 0; r < count; ++r) {
    Rng rng(derive_key(base, static_cast<std::uint64_t>(first + r)));
    switch (m.family) {
      case Family::kLinear:
      case Family::kNeural: {
        // Uniform on the l1 ball: Dirichlet direction, random signs, and a
        // radial factor U^{1/q}.
        double norm = 0.0;
        for (int j = 0; j < q; ++j) {
          const double e = rng.exponential(1.0);
          out(r, j) = e;
          norm += e;
        }
        for (int j = 0; j < q; ++j) {
          const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
          out(r, j) = sign * out(r, j) / norm;
        }
        const double radial =
            m.radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(q));
        out.row(r) *= radial;
        break;
      }
      case Family::kFourier: {
        // Uniform on the ellipsoid: uniform l2 ball mapped by axis rescaling.
        double norm2 = 0.0;
        for (int j = 0; j < q; ++j) {
          const double g = rng.normal();
          out(r, j) = g;
          norm2 += g * g;
        }
        const double radial =
            m.radius * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(q)) /
            std::sqrt(norm2);
        for (int i = 0; i < m.p; ++i)
          for (int j = 1; j <= m.ell; ++j) {
            const int idx = i * m.ell + (j - 1);
            out(r, idx) *= radial / fourier_axis_weight(j);
          }
        break;
      }
    }
  }
  return out;
}

Eigen::MatrixXd sample_prior_matrix(const ModelSpec& m, int count,
                                    std::uint64_t seed) {
  return sample_prior_range(m, seed, 0, count);
}

std::vector<ParamPoint> sample_prior(const ModelSpec& m, int count,
                                     std::uint64_t seed) {
  const Eigen::MatrixXd coords = sample_prior_matrix(m, count, seed);
  std::vector<ParamPoint> out;
  out.reserve(static_cast<size_t>(count));
  for (int r = 0; r < count; ++r) out.emplace_back(m, coords.row(r).transpose());
  return out;
}

double complexity_bound(const ModelSpec& m, double lip_of_risk, double ref_norm) {
  m.validate();
  require(lip_of_risk > 0.0, "complexity_bound: lip_of_risk must be > 0");
  require(ref_norm >= 0.0, "complexity_bound: ref_norm must be >= 0");
  if (ref_norm >= m.radius)
    throw std::invalid_argument(
        "complexity_bound: reference point on boundary; bound undefined");
  const double q = static_cast<double>(m.q());
  const double inner = std::max(lip_of_risk * std::numbers::e / q,
                                1.0 / (m.radius - ref_norm));
  return std::max(q * (1.0 + std::log(m.radius * inner)), 1.0);
}

int ModelCatalog::m_p(int p) const {
  int count = 0;
  for (const auto& m : models) count += (m.p == p) ? 1 : 0;
  return count;
}

double ModelCatalog::weight(const ModelSpec& m) const {
  const int mp = m_p(m.p);
  if (mp == 0) throw std::invalid_argument("catalog: model memory not present");
  return 1.0 / (static_cast<double>(mp) * static_cast<double>(n / 2));
}

void ModelCatalog::validate() const {
  require(!models.empty(), "catalog: empty model list");
  require(n >= 4, "catalog: n must be >= 4");
  std::set<std::pair<int, int>> seen;
  for (const auto& m : models) {
    m.validate();
    require(m.p <= n / 2, "catalog: model memory exceeds floor(n/2)");
    require(seen.insert({m.p, m.ell}).second,
            "catalog: duplicate (p, ell) pair");
    require(worst_case_lipschitz(m) <= lip_cap + 1e-12,
            "catalog: model exceeds the Lipschitz cap");
    require(m.lip_cap == lip_cap, "catalog: inconsistent lip_cap");
  }
  if (lip_cap > std::log(static_cast<double>(n)) - 1.0) {
    std::ostringstream os;
    os << "catalog: lip_cap " << lip_cap << " exceeds log(n) - 1 = "
       << std::log(static_cast<double>(n)) - 1.0;
    throw std::invalid_argument(os.str());
  }
  // Weight identity: sum over models of w_{p,ell} equals #distinct p / floor(n/2).
  std::set<int> ps;
  for (const auto& m : models) ps.insert(m.p);
  double total = 0.0;
  for (const auto& m : models) total += weight(m);
  const double expected =
      static_cast<double>(ps.size()) / static_cast<double>(n / 2);
  require(std::abs(total - expected) <= 1e-9 * std::max(1.0, expected),
          "catalog: weight normalization broken");
}

ModelCatalog ModelCatalog::build(std::vector<ModelSpec> models, int n) {
  ModelCatalog cat;
  cat.models = std::move(models);
  cat.n = n;
  double cap = 0.0;
  for (const auto& m : cat.models) cap = std::max(cap, worst_case_lipschitz(m));
  cat.lip_cap = std::max(cap, 1e-12);
  for (auto& m : cat.models) m.lip_cap = cat.lip_cap;
  cat.validate();
  return cat;
}

ModelCatalog ModelCatalog::linear_range(int p_min, int p_max, double radius,
                                        int n) {
  require(p_min >= 1 && p_max >= p_min, "catalog: bad linear memory range");
  std::vector<ModelSpec> models;
  for (int p = p_min; p <= p_max; ++p) models.push_back(ModelSpec::linear(p, radius));
  return build(std::move(models), n);
}

void populate_complexity(ModelCatalog& catalog, double lip_of_risk) {
  for (auto& m : catalog.models) m.d = complexity_bound(m, lip_of_risk, 0.0);
}

}  // namespace gforecast
