#include "subeq/subequation.hpp"

#include <cmath>

namespace subeq {

Subequation::Subequation(int n, DefiningFunction rho, SubeqFlags flags, std::string label)
    : n_(n),
      rho_(std::make_shared<const DefiningFunction>(std::move(rho))),
      flags_(flags),
      label_(std::move(label)) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::invalid_argument, "Subequation: dimension out of range");
  require(static_cast<bool>(*rho_), ErrorKind::invalid_argument, "Subequation: empty defining function");
  if (flags_.pure_second_order) flags_.reduced = true;
}

double Subequation::rho(const Point& x, const Jet& j) const {
  if (j.dim() != n_) {
    throw Error(ErrorKind::dimension_mismatch, "Subequation '" + label_ + "': jet dimension " +
                                                   std::to_string(j.dim()) + " != " + std::to_string(n_));
  }
  if (x.size() != 0 && x.size() != n_) {
    throw Error(ErrorKind::dimension_mismatch, "Subequation '" + label_ + "': point dimension mismatch");
  }
  return (*rho_)(x, j);
}

Subequation Subequation::relabeled(std::string label) const {
  Subequation out = *this;
  out.label_ = std::move(label);
  return out;
}

Subequation Subequation::with_flags(SubeqFlags flags) const {
  Subequation out = *this;
  out.flags_ = flags;
  if (flags.pure_second_order) out.flags_.reduced = true;
  return out;
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::inside: return "inside";
    case Region::boundary: return "boundary";
    case Region::outside: return "outside";
  }
  return "unknown";
}

Membership member(const Subequation& f, const Point& x, const Jet& j, double band) {
  const double v = f.rho(x, j);
  if (std::isnan(v)) return {Region::outside, v};
  if (v > band) return {Region::inside, v};
  if (v < -band) return {Region::outside, v};
  return {Region::boundary, v};
}

Subequation dual(const Subequation& f) {
  auto rho = f.defining_function();
  std::string label = f.label().rfind("dual:", 0) == 0 ? f.label().substr(5) : "dual:" + f.label();
  return Subequation(
      f.dim(), [rho](const Point& x, const Jet& j) { return -rho(x, -j); }, f.flags(), std::move(label));
}

Subequation shift(const Subequation& f, const Jet& j0) {
  require(j0.dim() == f.dim(), ErrorKind::dimension_mismatch, "shift: jet dimension mismatch");
  auto rho = f.defining_function();
  SubeqFlags flags = f.flags();
  flags.cone = flags.cone && jet_coordinates(j0).squaredNorm() == 0.0;
  return Subequation(
      f.dim(), [rho, j0](const Point& x, const Jet& j) { return rho(x, j - j0); }, flags,
      "shift:" + f.label());
}

Subequation fix_r(const Subequation& f, double lambda) {
  auto rho = f.defining_function();
  SubeqFlags flags = f.flags();
  flags.reduced = true;
  if (!f.flags().reduced) flags.cone = false;
  return Subequation(
      f.dim(),
      [rho, lambda](const Point& x, const Jet& j) {
        Jet fixed = j;
        fixed.r = lambda;
        return rho(x, fixed);
      },
      flags, f.label() + "@r=" + std::to_string(lambda));
}

void JetNorm::validate() const {
  require(w_r > 0 && w_p > 0 && w_a > 0, ErrorKind::invalid_argument, "JetNorm: weights must be positive");
}

double JetNorm::operator()(const Jet& j) const {
  const SymMatrix a = symmetric_from_upper(j.a);
  return std::sqrt(w_r * w_r * j.r * j.r + w_p * w_p * j.p.squaredNorm() + w_a * w_a * a.squaredNorm());
}

Eigen::VectorXd jet_coordinates(const Jet& j, const JetNorm& norm) {
  const int n = j.dim();
  Eigen::VectorXd c(jet_space_dim(n));
  int k = 0;
  c(k++) = norm.w_r * j.r;
  for (int i = 0; i < n; ++i) c(k++) = norm.w_p * j.p(i);
  for (int i = 0; i < n; ++i) c(k++) = norm.w_a * j.a(i, i);
  for (int col = 1; col < n; ++col)
    for (int row = 0; row < col; ++row) c(k++) = norm.w_a * std::sqrt(2.0) * j.a(row, col);
  return c;
}

Jet jet_from_coordinates(const Eigen::VectorXd& c, int n, const JetNorm& norm) {
  require(c.size() == jet_space_dim(n), ErrorKind::dimension_mismatch, "jet_from_coordinates: size mismatch");
  Jet j = Jet::zero(n);
  int k = 0;
  j.r = c(k++) / norm.w_r;
  for (int i = 0; i < n; ++i) j.p(i) = c(k++) / norm.w_p;
  for (int i = 0; i < n; ++i) j.a(i, i) = c(k++) / norm.w_a;
  for (int col = 1; col < n; ++col) {
    for (int row = 0; row < col; ++row) {
      const double v = c(k++) / (norm.w_a * std::sqrt(2.0));
      j.a(row, col) = v;
      j.a(col, row) = v;
    }
  }
  return j;
}

}  // namespace subeq
