#pragma once

// Affine automorphisms Psi = Phi + S of jet space,
//   Phi(r, p, A) = (r, g p, h A h^t + L(p)),
// possibly varying with the spatial point, and the induced transforms of subequations.

#include <functional>
#include <string>
#include <vector>

#include "subeq/catalog.hpp"
#include "subeq/subequation.hpp"

namespace subeq {

/// The data (g, h, L, S) at one point. L is stored as the images L(e_i) of the basis vectors.
struct AffineJetData {
  SymMatrix g;
  SymMatrix h;
  std::vector<SymMatrix> l;
  Jet s;

  static AffineJetData identity(int n);
  int dim() const { return static_cast<int>(g.rows()); }
  SymMatrix l_of(const Vec& p) const;
  bool has_l() const;
  void validate() const;
};

Jet apply(const AffineJetData& d, const Jet& j);
/// Linear part only: (r, g p, h A h^t + L(p)).
Jet apply_linear(const AffineJetData& d, const Jet& j);
/// compose(d2, d1) acts as d2 after d1.
AffineJetData compose(const AffineJetData& d2, const AffineJetData& d1);
AffineJetData invert(const AffineJetData& d);
/// Condition numbers of g and h (2-norm).
std::pair<double, double> condition_numbers(const AffineJetData& d);

class AffineJetMap {
 public:
  using Field = std::function<AffineJetData(const Point&)>;

  struct Traits {
    bool constant = true;      // no dependence on x
    bool no_l = true;          // L == 0 everywhere
    bool no_translation = true;  // S == 0 everywhere
  };

  AffineJetMap(int n, Field field, Traits traits, std::string label);
  static AffineJetMap constant(AffineJetData d, std::string label = "affine");
  static AffineJetMap identity(int n);

  int dim() const { return n_; }
  const Traits& traits() const { return traits_; }
  const std::string& label() const { return label_; }

  AffineJetData at(const Point& x) const;
  Jet apply(const Point& x, const Jet& j) const;

  /// The linear part Phi (S dropped) and the translation S as separate maps.
  AffineJetMap linear_part() const;
  AffineJetMap translation_part() const;

 private:
  int n_;
  std::shared_ptr<const Field> field_;
  Traits traits_;
  std::string label_;
};

AffineJetMap compose(const AffineJetMap& psi2, const AffineJetMap& psi1);
AffineJetMap invert(const AffineJetMap& psi);

/// Psi(F): rho'(x, J) = rho(x, Psi^{-1}_x J).
Subequation transform_subequation(const Subequation& f, const AffineJetMap& psi);

/// S = (0, 0, -f(x) Id): Psi^{-1}(Lambda_k) is {lambda_k(A) >= f(x)}.
AffineJetMap inhomogeneous_shift(int n, ScalarFieldFn f, std::string label = "inhom");

/// h = eta(x) Id with eta = f^{-1/(2 deg)}, S = 0; deg = n for det, k for sigma_k.
AffineJetMap conformal_scaling(int n, ScalarFieldFn f, int degree, std::string label = "scaling");

/// (r, p, A) -> (r, p, h^2 A + (h^2 - 1) I) with f = h^{-2m} on C^m = R^{2m}.
AffineJetMap calabi_yau_map(int m, ScalarFieldFn f);

}  // namespace subeq
