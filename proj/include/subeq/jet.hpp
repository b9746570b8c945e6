#pragma once

#include <ostream>

#include "subeq/linalg.hpp"

namespace subeq {

/// A 2-jet (r, p, A): value, gradient and symmetric Hessian at a point.
template <typename Scalar>
struct BasicJet {
  Scalar r{};
  VectorN<Scalar> p;
  MatrixN<Scalar> a;

  BasicJet() = default;
  BasicJet(Scalar r_, VectorN<Scalar> p_, MatrixN<Scalar> a_)
      : r(r_), p(std::move(p_)), a(std::move(a_)) {
    require(p.size() == a.rows() && a.rows() == a.cols(), ErrorKind::dimension_mismatch,
            "Jet: gradient length must equal Hessian dimension");
  }

  static BasicJet zero(int n) {
    return BasicJet(Scalar(0), VectorN<Scalar>::Zero(n), MatrixN<Scalar>::Zero(n, n));
  }
  static BasicJet hessian_only(const MatrixN<Scalar>& a) {
    return BasicJet(Scalar(0), VectorN<Scalar>::Zero(a.rows()), a);
  }

  int dim() const { return static_cast<int>(p.size()); }

  BasicJet& operator+=(const BasicJet& o) {
    r += o.r;
    p += o.p;
    a += o.a;
    return *this;
  }
  BasicJet& operator-=(const BasicJet& o) {
    r -= o.r;
    p -= o.p;
    a -= o.a;
    return *this;
  }
  BasicJet& operator*=(Scalar s) {
    r *= s;
    p *= s;
    a *= s;
    return *this;
  }
  friend BasicJet operator+(BasicJet x, const BasicJet& y) { return x += y; }
  friend BasicJet operator-(BasicJet x, const BasicJet& y) { return x -= y; }
  friend BasicJet operator*(Scalar s, BasicJet x) { return x *= s; }
  friend BasicJet operator-(BasicJet x) { return x *= Scalar(-1); }
};

using Jet = BasicJet<double>;

inline std::ostream& operator<<(std::ostream& os, const Jet& j) {
  const Eigen::IOFormat fmt(Eigen::StreamPrecision, Eigen::DontAlignCols, ", ", "; ", "", "", "[", "]");
  return os << "(r=" << j.r << ", p=" << j.p.transpose().format(fmt) << ", A=" << j.a.format(fmt) << ")";
}

}  // namespace subeq
