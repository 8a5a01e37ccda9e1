#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gforecast/rng.hpp"

namespace gforecast {

enum class Family { kLinear, kNeural, kFourier };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// One sub-model Theta_{p,ell}: a constrained predictor family together with
/// the metadata the selection criterion needs.
///
/// `radius` is the l1-ball radius for linear and neural families and the
/// weighted-l2 ellipsoid radius for the fourier family. `lip_cap` is the
/// global Lipschitz budget L shared across a catalog. `d` is the complexity
/// estimate; it stays 0 until populated via complexity_bound.
struct ModelSpec {
  Family family = Family::kLinear;
  int p = 1;
  int ell = 1;
  double radius = 1.0;
  double lip_cap = 1.0;
  double d = 0.0;

  /// Ambient parameter dimension: p+1 linear, ell*(p+2)+1 neural, p*ell fourier.
  int q() const;
  void validate() const;

  static ModelSpec linear(int p, double radius);
  static ModelSpec neural(int p, int ell, double radius);
  static ModelSpec fourier(int p, int ell, double radius);
};

/// Fourier basis on [-1,1]: phi_1 = 1, phi_2k = sqrt(2) cos(2 pi k x),
/// phi_{2k+1} = sqrt(2) sin(2 pi k x). Inputs are clipped into [-1,1]
/// because real autoregressive samples are unbounded.
double fourier_basis(int j, double x);
/// Supremum of |phi_j'| on [-1,1]: 2 sqrt(2) pi floor(j/2).
double fourier_basis_lipschitz(int j);
/// Ellipsoid axis weight: max(2 floor(j/2), 1). The paper's weight
/// 2 floor(j/2) vanishes at j = 1, which would leave the constant direction
/// unbounded; flooring at 1 keeps the prior well defined and shrinks the set,
/// so the ellipsoid constraint still holds for every draw.
double fourier_axis_weight(int j);

bool inside_constraint(const ModelSpec& m, const Eigen::VectorXd& coords,
                       double tol = 1e-9);

/// A parameter vector inside one ModelSpec's constraint set.
struct ParamPoint {
  ModelSpec model;
  Eigen::VectorXd coords;

  ParamPoint(ModelSpec m, Eigen::VectorXd c);  // validates, throws otherwise
};

/// One-step prediction. window[j] is the value j+1 steps in the past, so
/// window = (X_{t-1}, ..., X_{t-p}) predicts X_t.
double predict(const ParamPoint& theta, std::span<const double> window);

/// Upper bound on sum_j a_j(theta), the predictor's Lipschitz budget.
double lipschitz_sum(const ParamPoint& theta);

/// sup of lipschitz_sum over the model's constraint set.
double worst_case_lipschitz(const ModelSpec& m);

/// iid uniform draws from the constraint set; row i of the matrix is draw i
/// and is a pure function of (model, seed, i).
Eigen::MatrixXd sample_prior_matrix(const ModelSpec& m, int count,
                                    std::uint64_t seed);
Eigen::MatrixXd sample_prior_range(const ModelSpec& m, std::uint64_t seed,
                                   int first, int count);
std::vector<ParamPoint> sample_prior(const ModelSpec& m, int count,
                                     std::uint64_t seed);

/// Complexity estimate for a Lipschitz risk over the constraint set:
/// q * (1 + log(radius * max(C e / q, 1/(radius - ref_norm)))), floored at 1.
double complexity_bound(const ModelSpec& m, double lip_of_risk, double ref_norm);

/// The union model the selection step searches over.
struct ModelCatalog {
  std::vector<ModelSpec> models;
  int n = 0;       // sample size the catalog is built for
  double lip_cap = 1.0;

  int m_p(int p) const;                    // sub-models sharing memory p
  double weight(const ModelSpec& m) const; // w_{p,ell} = 1/(m_p floor(n/2))
  void validate() const;

  static ModelCatalog build(std::vector<ModelSpec> models, int n);
  static ModelCatalog linear_range(int p_min, int p_max, double radius, int n);
};

/// Populates m.d for every entry using complexity_bound with ref_norm = 0.
void populate_complexity(ModelCatalog& catalog, double lip_of_risk);

}  // namespace gforecast
