#pragma once

// Named subequations and monotonicity cones. Every defining function here is written so
// that {rho > 0} is the interior of {rho >= 0}.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subeq/subequation.hpp"

namespace subeq {

enum class ScalarField { real, complex, quaternionic };

int multiplicity(ScalarField k);
const char* to_string(ScalarField k) noexcept;

/// Lambda_k^K = {lambda_k(A_K) >= 0}; n is the K-dimension, the ambient space is R^{n * mult}.
Subequation make_branch(ScalarField field, int k, int n);

/// P(p) for real 1 <= p <= n: lambda_1 + ... + lambda_[p] + (p - [p]) lambda_{[p]+1} >= 0.
Subequation make_pcone(double p, int n);

/// Pucci cone {P^-_{lam,Lam}(A) >= 0}.
Subequation make_pucci_cone(double lam, double big_lam, int n);

/// P(delta) = {A >= -delta tr(A) I}, written as lambda_1(A) + delta tr(A) >= 0.
Subequation make_delta_cone(double delta, int n);

Subequation make_laplace(int n);

/// {sigma_1 >= 0, ..., sigma_k >= 0}; terms normalized by binomial(n, l).
Subequation make_sigma_cone(int k, int n);

/// sum arctan lambda_i(A) >= c, |c| < n pi / 2.
Subequation make_special_lagrangian(double c, int n);

/// tr(A + I) >= e^r and A + I >= 0.
Subequation make_calabi_yau(int n);

/// Closure of {|p|^2 tr A + (k - 2) p^t A p > 0}, k >= 1; k = infinity gives closure of {p^t A p > 0}.
Subequation make_k_laplacian(double k, int n);
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// {det A >= 1, A >= 0}.
Subequation make_monge_ampere(int n);

/// {det_C(A_C + I) >= 1, A_C + I >= 0} on C^n = R^{2n}.
Subequation make_calabi_yau_det(int n);

/// k-th branch of the p-convex Monge-Ampere operator: k-th smallest sum of p eigenvalues.
Subequation make_p_branch(int p, int k, int n);

/// F(delta) = {A : A + delta tr(A) I in F} for pure second-order F.
Subequation make_delta_regularized(const Subequation& f, double delta);

/// Finite sample of a compact set of p-planes, stored as orthonormal n x p frames.
struct GrassmannSet {
  int p = 1;
  int n = 1;
  std::vector<Frame> frames;

  static GrassmannSet from_frames(int p, int n, std::vector<Frame> frames);
  /// Deterministic sample of the whole Grassmannian G(p, R^n).
  static GrassmannSet sample(int p, int n, int count = 256);
};

/// rho = min over frames of tr_W A.
Subequation make_geometric(const GrassmannSet& g);

/// Convex cone D in R^n given as the conic hull of unit generators.
class DirectionalCone {
 public:
  DirectionalCone(std::vector<Vec> generators, double gamma = 0.0);

  int dim() const { return n_; }
  double gamma() const { return gamma_; }
  const std::vector<Vec>& generators() const { return generators_; }
  const std::vector<Vec>& facet_normals() const { return normals_; }
  /// min over inward unit facet normals of <nu, p>; positive exactly on Int D.
  double margin(const Vec& p) const;
  Vec centroid() const;

 private:
  int n_;
  double gamma_;
  std::vector<Vec> generators_;
  std::vector<Vec> normals_;
};

struct MonotonicityConeParams {
  std::optional<DirectionalCone> cone;  // cases 3 and 4
  double gamma = 1.0;                   // case 4
  double lambda = 1.0;                  // case 5
  double radius = 1.0;                  // case 6
  int directions = 64;                  // case 5 direction sample
};

/// The six basic monotonicity cones:
///   1: R x R^n x P          2: R_- x R^n x P        3: R_- x D x P
///   4: {r <= -gamma |p|, p in D, A >= 0}
///   5: <Ae, e> - lambda |<p, e>| >= 0 for all unit e (sampled)
///   6: A - (|p| / R) Id >= 0
Subequation make_monotonicity_cone(int which, int n, const MonotonicityConeParams& params = {});

using ScalarFieldFn = std::function<double(const Point&)>;

/// H = (R_- + g) x F: rho_H = min(g(x) - r, rho_F).
Subequation make_obstacle(const Subequation& f, ScalarFieldFn g);

/// Parses catalog names such as "branch:real:k=1:n=2", "pucci:lam=1:Lam=2:n=3" or "dual:laplace:n=3".
/// See docs/catalog.md for the full list.
Subequation make_named(const std::string& spec);

/// Catalog name of the dual for branch families (Lambda_k -> Lambda_{n-k+1}) and the self-dual
/// Laplacian, nullopt otherwise.
std::optional<std::string> dual_counterpart(const std::string& spec);

}  // namespace subeq
