#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "subeq/subequation.hpp"

namespace subeq {

using Rng = std::mt19937_64;

/// Default region for rejection sampling of jets.
struct SamplingBox {
  double r_half = 5.0;    // r in [-r_half, r_half]
  double p_radius = 5.0;  // |p| <= p_radius
  double eig_half = 5.0;  // eigenvalues of A in [-eig_half, eig_half]

  void validate() const;
};

/// Haar-distributed orthogonal n x n matrix.
SymMatrix random_orthogonal(int n, Rng& rng);

class JetSampler {
 public:
  JetSampler(int n, std::uint64_t seed, SamplingBox box = {});

  int dim() const { return n_; }
  Rng& rng() { return rng_; }
  const SamplingBox& box() const { return box_; }

  double uniform(double lo, double hi);
  Vec unit_vector();
  Vec ball_vector(double radius);
  /// Q diag(mu) Q^T with mu uniform in the eigenvalue box.
  SymMatrix symmetric();
  /// Positive semidefinite draw; one third are rank one.
  SymMatrix positive_semidefinite();
  Jet jet();
  Jet hessian_jet() { return Jet::hessian_only(symmetric()); }

 private:
  int n_;
  SamplingBox box_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline constexpr long kDefaultMaxDraws = 1000000;

/// Rejection-samples a jet with rho > min_margin (throws sampler_exhausted after max_draws).
Jet sample_member(const Subequation& f, const Point& x, JetSampler& sampler, double min_margin = kBoundaryBand,
                  long max_draws = kDefaultMaxDraws);

/// Deterministic unit vectors in R^dim: the 2*dim signed axes first, then normalized
/// Halton points of [-1, 1]^dim. Returns exactly `count` vectors.
std::vector<Eigen::VectorXd> low_discrepancy_sphere(int dim, int count);

/// Directions for R^n: `count` low-discrepancy unit vectors plus the n coordinate axes.
std::vector<Vec> direction_set(int n, int count);

}  // namespace subeq
