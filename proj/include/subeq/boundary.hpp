#pragma once

// Domains Omega = {rho_dom < 0}, their second fundamental forms, and the strict
// F-convexity test for boundary points.

#include <functional>
#include <vector>

#include "subeq/checks.hpp"
#include "subeq/expr.hpp"

namespace subeq {

struct DomainSpec {
  int n = 2;
  std::function<double(const Point&)> rho;
  std::function<Vec(const Point&)> gradient;       // optional, finite differences otherwise
  std::function<SymMatrix(const Point&)> hessian;  // optional, finite differences otherwise
  double h_geo = 1e-4;

  static DomainSpec from_function(int n, std::function<double(const Point&)> rho);
  static DomainSpec from_expression(int n, const Expression& e);

  double value(const Point& x) const;
  Vec grad(const Point& x) const;
  SymMatrix hess(const Point& x) const;
  /// Largest entry difference between the step-h and step-h/2 finite-difference Hessians.
  double richardson_gap(const Point& x) const;
};

struct SecondFundamentalForm {
  Vec nu;           // outward unit normal
  Frame tangent;    // n x (n-1) orthonormal frame of the tangent space
  SymMatrix ii;     // (n-1) x (n-1), in the tangent frame
  /// II as a quadratic form on R^n: T II T^t.
  SymMatrix ambient() const { return tangent * ii * tangent.transpose(); }
};

inline constexpr double kOnBoundaryTol = 1e-8;
inline constexpr double kMinGradient = 1e-6;

SecondFundamentalForm second_fundamental_form(const DomainSpec& d, const Point& x);

/// Newton iteration x <- x - rho grad / |grad|^2 until |rho| <= tol.
Point project_to_boundary(const DomainSpec& d, const Point& x0, double tol = 1e-12, int max_iter = 100);

/// Boundary points along rays from an interior point (assumes the domain is star-shaped about it).
std::vector<Point> boundary_points_along_rays(const DomainSpec& d, const Point& center, int count);

struct ConvexityOptions {
  std::vector<double> lambda_grid{-2.0, -1.0, 0.0, 1.0, 2.0};
  double t_max = 65536.0;      // t-grid 1, 2, 4, ..., t_max
  int stable_points = 4;       // membership required at the last grid points
  double scale_t0 = 1e3;       // asymptotic-interior scaling starts here for non-cone F
  double radius_fraction = 1e-3;
  int trials = 16;
  std::uint64_t seed = 11;
};

struct ConvexityVerdict {
  Point x;
  SecondFundamentalForm sff;
  std::vector<double> lambdas;
  std::vector<bool> per_lambda;
  bool overall = false;
};

/// Strict F-convexity at a boundary point: (nu, t P_nu + II) in the asymptotic interior of
/// F_lambda for all large t, per lambda in the grid (a single verdict if F is reduced).
ConvexityVerdict strict_convexity_test(const Subequation& f, const DomainSpec& d, const Point& x,
                                       const ConvexityOptions& opts = {});

}  // namespace subeq
