#include "subeq/jet_equivalence.hpp"

#include <cmath>

namespace subeq {

AffineJetData AffineJetData::identity(int n) {
  return AffineJetData{SymMatrix::Identity(n, n), SymMatrix::Identity(n, n), {}, Jet::zero(n)};
}

SymMatrix AffineJetData::l_of(const Vec& p) const {
  const int n = dim();
  SymMatrix out = SymMatrix::Zero(n, n);
  for (std::size_t i = 0; i < l.size(); ++i) out += p(static_cast<Eigen::Index>(i)) * l[i];
  return out;
}

bool AffineJetData::has_l() const {
  for (const auto& m : l)
    if (m.cwiseAbs().maxCoeff() != 0.0) return true;
  return false;
}

void AffineJetData::validate() const {
  const int n = dim();
  require(n >= 1 && g.rows() == n && g.cols() == n && h.rows() == n && h.cols() == n, ErrorKind::dimension_mismatch,
          "AffineJetData: g and h must be n x n");
  require(l.empty() || static_cast<int>(l.size()) == n, ErrorKind::dimension_mismatch,
          "AffineJetData: L needs one matrix per basis vector");
  for (const auto& m : l) {
    require(m.rows() == n && m.cols() == n, ErrorKind::dimension_mismatch, "AffineJetData: L(e_i) must be n x n");
    require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()),
            ErrorKind::invalid_argument, "AffineJetData: L(e_i) must be symmetric");
  }
  require(s.dim() == n, ErrorKind::dimension_mismatch, "AffineJetData: translation has wrong dimension");
}

Jet apply_linear(const AffineJetData& d, const Jet& j) {
  require(j.dim() == d.dim(), ErrorKind::dimension_mismatch, "apply: jet dimension mismatch");
  const SymMatrix a = symmetric_from_upper(j.a);
  SymMatrix out = d.h * a * d.h.transpose();
  if (!d.l.empty()) out += d.l_of(j.p);
  return Jet(j.r, d.g * j.p, 0.5 * (out + out.transpose()));
}

Jet apply(const AffineJetData& d, const Jet& j) { return apply_linear(d, j) + d.s; }

AffineJetData compose(const AffineJetData& d2, const AffineJetData& d1) {
  require(d1.dim() == d2.dim(), ErrorKind::dimension_mismatch, "compose: dimension mismatch");
  const int n = d1.dim();
  AffineJetData out;
  out.g = d2.g * d1.g;
  out.h = d2.h * d1.h;
  if (!d1.l.empty() || !d2.l.empty()) {
    out.l.assign(n, SymMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i) {
      if (!d1.l.empty()) out.l[i] += d2.h * d1.l[i] * d2.h.transpose();
      if (!d2.l.empty()) out.l[i] += d2.l_of(d1.g.col(i));
    }
  }
  out.s = apply_linear(d2, d1.s) + d2.s;
  return out;
}

namespace {

SymMatrix checked_inverse(const SymMatrix& m, const char* what) {
  Eigen::FullPivLU<SymMatrix> lu(m);
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(scale, m.rows())) {
    throw Error(ErrorKind::singular_map, what);
  }
  return lu.inverse();
}

}  // namespace

AffineJetData invert(const AffineJetData& d) {
  const int n = d.dim();
  AffineJetData out;
  out.g = checked_inverse(d.g, "invert: g is singular");
  out.h = checked_inverse(d.h, "invert: h is singular");
  if (!d.l.empty()) {
    out.l.assign(n, SymMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i) out.l[i] = -(out.h * d.l_of(out.g.col(i)) * out.h.transpose());
  }
  AffineJetData linear_inverse = out;
  linear_inverse.s = Jet::zero(n);
  out.s = -apply_linear(linear_inverse, d.s);
  return out;
}

std::pair<double, double> condition_numbers(const AffineJetData& d) {
  auto cond = [](const SymMatrix& m) {
    Eigen::JacobiSVD<SymMatrix> svd(m);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  };
  return {cond(d.g), cond(d.h)};
}

AffineJetMap::AffineJetMap(int n, Field field, Traits traits, std::string label)
    : n_(n), field_(std::make_shared<const Field>(std::move(field))), traits_(traits), label_(std::move(label)) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::invalid_argument, "AffineJetMap: bad dimension");
  require(static_cast<bool>(*field_), ErrorKind::invalid_argument, "AffineJetMap: empty field");
}

AffineJetMap AffineJetMap::constant(AffineJetData d, std::string label) {
  d.validate();
  const Traits traits{true, !d.has_l(), jet_coordinates(d.s).squaredNorm() == 0.0};
  const int n = d.dim();
  return AffineJetMap(n, [d](const Point&) { return d; }, traits, std::move(label));
}

AffineJetMap AffineJetMap::identity(int n) { return constant(AffineJetData::identity(n), "identity"); }

AffineJetData AffineJetMap::at(const Point& x) const {
  AffineJetData d = (*field_)(x);
  require(d.dim() == n_, ErrorKind::dimension_mismatch, "AffineJetMap: field returned wrong dimension");
  return d;
}

Jet AffineJetMap::apply(const Point& x, const Jet& j) const { return subeq::apply(at(x), j); }

AffineJetMap AffineJetMap::linear_part() const {
  auto field = field_;
  const int n = n_;
  Traits t = traits_;
  t.no_translation = true;
  return AffineJetMap(
      n_,
      [field, n](const Point& x) {
        AffineJetData d = (*field)(x);
        d.s = Jet::zero(n);
        return d;
      },
      t, label_ + ":linear");
}

AffineJetMap AffineJetMap::translation_part() const {
  auto field = field_;
  const int n = n_;
  return AffineJetMap(
      n_,
      [field, n](const Point& x) {
        AffineJetData d = AffineJetData::identity(n);
        d.s = (*field)(x).s;
        return d;
      },
      Traits{traits_.constant, true, traits_.no_translation}, label_ + ":translation");
}

AffineJetMap compose(const AffineJetMap& psi2, const AffineJetMap& psi1) {
  require(psi1.dim() == psi2.dim(), ErrorKind::dimension_mismatch, "compose: dimension mismatch");
  const AffineJetMap::Traits t{psi1.traits().constant && psi2.traits().constant,
                               psi1.traits().no_l && psi2.traits().no_l,
                               psi1.traits().no_translation && psi2.traits().no_translation};
  return AffineJetMap(
      psi1.dim(), [psi2, psi1](const Point& x) { return compose(psi2.at(x), psi1.at(x)); }, t,
      psi2.label() + "*" + psi1.label());
}

AffineJetMap invert(const AffineJetMap& psi) {
  if (psi.traits().constant) {
    AffineJetData inv = invert(psi.at(Point()));
    AffineJetMap out = AffineJetMap::constant(std::move(inv), "inv:" + psi.label());
    return out;
  }
  return AffineJetMap(
      psi.dim(), [psi](const Point& x) { return invert(psi.at(x)); }, psi.traits(), "inv:" + psi.label());
}

Subequation transform_subequation(const Subequation& f, const AffineJetMap& psi) {
  require(f.dim() == psi.dim(), ErrorKind::dimension_mismatch, "transform_subequation: dimension mismatch");
  auto rho = f.defining_function();
  SubeqFlags flags = f.flags();
  flags.pure_second_order = flags.pure_second_order && psi.traits().no_l;
  flags.cone = flags.cone && psi.traits().no_translation;
  flags.constant_coefficient = flags.constant_coefficient && psi.traits().constant;
  const std::string label = "transform[" + psi.label() + "]:" + f.label();
  if (psi.traits().constant) {
    const AffineJetData inv = invert(psi.at(Point()));
    return Subequation(
        f.dim(), [rho, inv](const Point& x, const Jet& j) { return rho(x, apply(inv, j)); }, flags, label);
  }
  return Subequation(
      f.dim(),
      [rho, psi](const Point& x, const Jet& j) {
        if (x.size() == 0) throw Error(ErrorKind::invalid_argument, "x-dependent subequation needs a point x");
        return rho(x, apply(invert(psi.at(x)), j));
      },
      flags, label);
}

AffineJetMap inhomogeneous_shift(int n, ScalarFieldFn f, std::string label) {
  require(static_cast<bool>(f), ErrorKind::invalid_argument, "inhomogeneous_shift: empty field");
  return AffineJetMap(
      n,
      [n, f](const Point& x) {
        AffineJetData d = AffineJetData::identity(n);
        d.s.a = -f(x) * SymMatrix::Identity(n, n);
        return d;
      },
      AffineJetMap::Traits{false, true, false}, std::move(label));
}

AffineJetMap conformal_scaling(int n, ScalarFieldFn f, int degree, std::string label) {
  require(static_cast<bool>(f) && degree >= 1, ErrorKind::invalid_argument, "conformal_scaling: bad arguments");
  return AffineJetMap(
      n,
      [n, f, degree](const Point& x) {
        const double fx = f(x);
        if (!(fx > 0.0)) throw Error(ErrorKind::invalid_argument, "conformal_scaling: f must be positive");
        AffineJetData d = AffineJetData::identity(n);
        d.h *= std::pow(fx, -1.0 / (2.0 * degree));
        return d;
      },
      AffineJetMap::Traits{false, true, true}, std::move(label));
}

AffineJetMap calabi_yau_map(int m, ScalarFieldFn f) {
  require(static_cast<bool>(f) && m >= 1, ErrorKind::invalid_argument, "calabi_yau_map: bad arguments");
  const int n = 2 * m;
  return AffineJetMap(
      n,
      [n, m, f](const Point& x) {
        const double fx = f(x);
        if (!(fx > 0.0)) throw Error(ErrorKind::invalid_argument, "calabi_yau_map: f must be positive");
        const double h = std::pow(fx, -1.0 / (2.0 * m));
        AffineJetData d = AffineJetData::identity(n);
        d.h *= h;
        d.s.a = (h * h - 1.0) * SymMatrix::Identity(n, n);
        return d;
      },
      AffineJetMap::Traits{false, true, false}, "calabi-yau");
}

}  // namespace subeq
