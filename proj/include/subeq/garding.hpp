#pragma once

// Polynomials on Sym^2(R^n) that are hyperbolic with respect to the identity, their
// eigenvalues (negated roots of t -> Q(tI + A)) and branch subequations.

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "subeq/subequation.hpp"

namespace subeq {

class HyperbolicPolynomial {
 public:
  using Evaluator = std::function<double(const SymMatrix&)>;

  /// Rescales so that Q(I) = 1 and checks homogeneity of the given degree at t in {2, 1/3}.
  static HyperbolicPolynomial create(std::string label, int n, int degree, Evaluator eval);

  double operator()(const SymMatrix& a) const { return (*eval_)(a) / scale_; }
  int dim() const { return n_; }
  int degree() const { return m_; }
  const std::string& label() const { return label_; }

 private:
  HyperbolicPolynomial(std::string label, int n, int m, std::shared_ptr<const Evaluator> eval, double scale)
      : label_(std::move(label)), n_(n), m_(m), eval_(std::move(eval)), scale_(scale) {}

  std::string label_;
  int n_;
  int m_;
  std::shared_ptr<const Evaluator> eval_;
  double scale_;
};

/// det(A).
HyperbolicPolynomial det_polynomial(int n);
/// sigma_k(A) / binomial(n, k).
HyperbolicPolynomial sigma_polynomial(int k, int n);

inline constexpr double kImaginaryTolerance = 1e-6;
/// Roots closer than this (relative) are treated as one multiple root and replaced by their mean.
inline constexpr double kMergeTolerance = 1e-6;

/// Coefficients c_0..c_m of q_A(t) = Q(tI + A) in the monomial basis.
Eigen::VectorXd characteristic_coefficients(const HyperbolicPolynomial& q, const SymMatrix& a);

struct GardingRoots {
  Eigen::VectorXd eigenvalues;  // ascending, negatives of the roots
  Eigen::VectorXcd roots;       // raw roots of q_A
  double worst_imaginary = 0.0; // max |Im z| / (1 + |z|)
  int clustered = 0;            // roots beyond the tolerance accepted as real multiple roots
};

/// Roots of q_A via Chebyshev-node interpolation and companion-matrix eigenvalues. Root
/// clusters whose real part is a numerical zero of q_A are accepted as multiple real roots
/// and counted in `clustered`; any other root beyond the tolerance is left in `roots`.
GardingRoots garding_roots(const HyperbolicPolynomial& q, const SymMatrix& a);

/// Ascending Garding eigenvalues; throws non_hyperbolic on complex roots.
Eigen::VectorXd garding_eigenvalues(const HyperbolicPolynomial& q, const SymMatrix& a);

struct HyperbolicityReport {
  std::string label;
  long trials = 0;
  long failures = 0;
  long borderline = 0;  // inputs that needed cluster acceptance
  std::optional<SymMatrix> witness;
  Eigen::VectorXcd witness_roots;
  bool ok() const { return failures == 0; }
};

nlohmann::json to_json(const HyperbolicityReport& r);

/// Samples random symmetric A and flags complex roots of q_A.
HyperbolicityReport hyperbolicity_check(const HyperbolicPolynomial& q, long trials, std::uint64_t seed = 1);

/// Lambda_{Q,k} = {lambda_k^Q(A) >= 0}; k = 1 is the Garding cone M_Q.
Subequation branch_subequation(const HyperbolicPolynomial& q, int k);

}  // namespace subeq
