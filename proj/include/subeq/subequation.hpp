#pragma once

// A subequation is stored through a defining function rho with F_x = {rho(x, J) >= 0}.
// Catalog entries are authored so that Int F_x = {rho > 0}; the dual, shifts and
// fiber restrictions below rely on that and on nothing else.

#include <functional>
#include <memory>
#include <string>

#include "subeq/jet.hpp"

namespace subeq {

/// Spatial point. An empty vector means "no point" and is accepted by
/// constant-coefficient subequations only.
using Point = Vec;

using DefiningFunction = std::function<double(const Point& x, const Jet& j)>;

struct SubeqFlags {
  bool pure_second_order = false;  // rho depends on A only
  bool reduced = false;            // rho independent of r
  bool cone = false;               // fiberwise cone with vertex at the origin
  bool constant_coefficient = true;
};

class Subequation {
 public:
  Subequation(int n, DefiningFunction rho, SubeqFlags flags, std::string label);

  int dim() const { return n_; }
  const SubeqFlags& flags() const { return flags_; }
  const std::string& label() const { return label_; }

  double rho(const Point& x, const Jet& j) const;
  double rho(const Jet& j) const { return rho(Point(), j); }
  const DefiningFunction& defining_function() const { return *rho_; }

  Subequation relabeled(std::string label) const;
  Subequation with_flags(SubeqFlags flags) const;

 private:
  int n_;
  std::shared_ptr<const DefiningFunction> rho_;
  SubeqFlags flags_;
  std::string label_;
};

inline constexpr double kBoundaryBand = 1e-9;

enum class Region { inside, boundary, outside };

struct Membership {
  Region region;
  double margin;  // value of rho
  bool in_set() const { return region != Region::outside; }
  bool interior() const { return region == Region::inside; }
};

const char* to_string(Region r) noexcept;

Membership member(const Subequation& f, const Point& x, const Jet& j, double band = kBoundaryBand);
inline Membership member(const Subequation& f, const Jet& j, double band = kBoundaryBand) {
  return member(f, Point(), j, band);
}

/// Dirichlet dual: rho~(x, J) = -rho(x, -J).
Subequation dual(const Subequation& f);

/// Translate: shift(F, J0) = F + J0, i.e. rho(x, J - J0).
Subequation shift(const Subequation& f, const Jet& j0);

/// Fiber over a fixed value r = lambda, as a reduced subequation.
Subequation fix_r(const Subequation& f, double lambda);

/// Block-weighted Euclidean norm on jets, Frobenius on the Hessian block.
struct JetNorm {
  double w_r = 1.0;
  double w_p = 1.0;
  double w_a = 1.0;

  double operator()(const Jet& j) const;
  void validate() const;
};

/// Coordinates of a jet in an orthonormal basis of R x R^n x Sym^2 (diagonal entries, then
/// sqrt(2) times the strict upper triangle), with the block weights applied.
Eigen::VectorXd jet_coordinates(const Jet& j, const JetNorm& norm = {});
Jet jet_from_coordinates(const Eigen::VectorXd& c, int n, const JetNorm& norm = {});
inline int jet_space_dim(int n) { return 1 + n + n * (n + 1) / 2; }

}  // namespace subeq
