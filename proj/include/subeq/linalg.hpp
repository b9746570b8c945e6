#pragma once

// Small dense symmetric-matrix services: ordered eigenvalues (cyclic Jacobi),
// hermitian/quaternionic symmetrization, elementary symmetric functions,
// Pucci extremal operators and traces on planes.
//
// Matrices are Eigen dense types with a compile-time maximum size so that the
// hot paths of the grid solver never touch the heap. A SymMatrix is read
// through its upper triangle; helpers that build one always write both halves.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "subeq/error.hpp"

namespace subeq {

inline constexpr int kMaxDim = 16;

template <typename Scalar>
using MatrixN = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
template <typename Scalar>
using VectorN = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using SymMatrix = MatrixN<double>;
using Vec = VectorN<double>;
using Frame = MatrixN<double>;  // n x p, orthonormal columns

/// Copies the upper triangle of `a` into a full symmetric matrix.
template <typename Derived>
MatrixN<typename Derived::Scalar> symmetric_from_upper(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  MatrixN<Scalar> s(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      s(i, j) = a(i, j);
      s(j, i) = a(i, j);
    }
  }
  return s;
}

template <typename Scalar>
struct SymmetricEigen {
  VectorN<Scalar> values;   // ascending
  MatrixN<Scalar> vectors;  // columns match `values`; empty unless requested
  int sweeps = 0;
};

struct JacobiOptions {
  double off_diagonal_threshold = 1e-13;
  int max_sweeps = 50;
  bool compute_vectors = false;
  bool verify = false;  // reconstruct A from the eigenpairs and compare (1e-10 Frobenius)
};

/// Cyclic Jacobi diagonalization of the symmetric matrix whose upper triangle is `a`.
/// Eigenvalues come back ascending; ties keep the order of the diagonalization.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& a,
                                                      const JacobiOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  require(a.rows() == a.cols() && a.rows() >= 1, ErrorKind::dimension_mismatch,
          "jacobi_eigen: matrix must be square with n >= 1");
  const Eigen::Index n = a.rows();
  MatrixN<Scalar> m = symmetric_from_upper(a);
  const bool want_vectors = opts.compute_vectors || opts.verify;
  MatrixN<Scalar> v;
  if (want_vectors) v = MatrixN<Scalar>::Identity(n, n);

  const Scalar scale = m.norm();
  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index j = 1; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += m(i, j) * m(i, j);
    return sqrt(Scalar(2) * s);
  };

  int sweep = 0;
  const Scalar tol = Scalar(opts.off_diagonal_threshold) * scale;
  while (n > 1 && off_norm() > tol) {
    if (sweep == opts.max_sweeps) {
      throw Error(ErrorKind::non_convergence,
                  "jacobi_eigen: no convergence after " + std::to_string(opts.max_sweeps) +
                      " sweeps (ill-conditioned input?)");
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = m(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (m(q, q) - m(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mkp = m(k, p);
          const Scalar mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mpk = m(p, k);
          const Scalar mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = Scalar(0);
        m(q, p) = Scalar(0);
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const Scalar vkp = v(k, p);
            const Scalar vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  // stable insertion sort, n is tiny
  for (Eigen::Index i = 1; i < n; ++i) {
    const int key = order[i];
    Eigen::Index j = i;
    for (; j > 0 && m(key, key) < m(order[j - 1], order[j - 1]); --j) order[j] = order[j - 1];
    order[j] = key;
  }

  SymmetricEigen<Scalar> out;
  out.sweeps = sweep;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values(i) = m(order[i], order[i]);
  if (want_vectors) {
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out.vectors.col(i) = v.col(order[i]);
  }
  if (opts.verify) {
    const MatrixN<Scalar> rebuilt =
        out.vectors * out.values.asDiagonal() * out.vectors.transpose();
    const Scalar err = (rebuilt - symmetric_from_upper(a)).norm();
    if (err > Scalar(1e-10) * std::max(Scalar(1), scale)) {
      throw Error(ErrorKind::non_convergence, "jacobi_eigen: reconstruction check failed");
    }
  }
  if (!opts.compute_vectors) out.vectors.resize(0, 0);
  return out;
}

/// Ordered eigenvalues lambda_1 <= ... <= lambda_n.
template <typename Derived>
VectorN<typename Derived::Scalar> ordered_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  return jacobi_eigen(a).values;
}

/// k-th elementary symmetric function of the entries of `values` (sigma_0 = 1).
template <typename Derived>
typename Derived::Scalar elementary_symmetric(const Eigen::MatrixBase<Derived>& values, int k) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  require(k >= 0 && k <= n, ErrorKind::invalid_argument, "elementary_symmetric: k out of range");
  std::array<Scalar, kMaxDim + 1> e{};
  e[0] = Scalar(1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::min<Eigen::Index>(i + 1, k); j >= 1; --j) e[j] += values(i) * e[j - 1];
  return e[k];
}

/// sigma_k of the eigenvalues of A, 1 <= k <= n.
template <typename Derived>
typename Derived::Scalar sigma_k(const Eigen::MatrixBase<Derived>& a, int k) {
  require(k >= 1 && k <= a.rows(), ErrorKind::invalid_argument, "sigma_k: k must satisfy 1 <= k <= n");
  return elementary_symmetric(ordered_eigenvalues(a), k);
}

inline void require_ellipticity(double lam, double big_lam) {
  require(lam > 0.0 && lam < big_lam, ErrorKind::invalid_argument,
          "Pucci operators need 0 < lambda < Lambda");
}

/// lambda tr(B+) + Lambda tr(B-).
template <typename Derived>
typename Derived::Scalar pucci_minus(const Eigen::MatrixBase<Derived>& b, double lam, double big_lam) {
  using Scalar = typename Derived::Scalar;
  require_ellipticity(lam, big_lam);
  const auto ev = ordered_eigenvalues(b);
  Scalar out(0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) out += ev(i) > Scalar(0) ? Scalar(lam) * ev(i) : Scalar(big_lam) * ev(i);
  return out;
}

/// -P^-(-B) = Lambda tr(B+) + lambda tr(B-).
template <typename Derived>
typename Derived::Scalar pucci_plus(const Eigen::MatrixBase<Derived>& b, double lam, double big_lam) {
  return -pucci_minus(-b, lam, big_lam);
}

template <typename Derived>
bool is_orthonormal_frame(const Eigen::MatrixBase<Derived>& w, double tol = 1e-10) {
  if (w.cols() < 1 || w.cols() > w.rows()) return false;
  const Eigen::Index p = w.cols();
  return (w.transpose() * w - MatrixN<typename Derived::Scalar>::Identity(p, p)).cwiseAbs().maxCoeff() <= tol;
}

/// tr_W A = sum_i <A w_i, w_i> for the orthonormal columns w_i of W.
template <typename DerivedA, typename DerivedW>
typename DerivedA::Scalar trace_on_plane(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedW>& w) {
  require(w.rows() == a.rows(), ErrorKind::dimension_mismatch, "trace_on_plane: frame dimension mismatch");
  require(is_orthonormal_frame(w), ErrorKind::invalid_argument, "trace_on_plane: frame is not orthonormal");
  const auto s = symmetric_from_upper(a);
  return (w.transpose() * s * w).trace();
}

/// Orthogonal complex (J) or quaternionic (I, J, K) structure on R^N.
class ComplexStructure {
 public:
  enum class Kind { complex, quaternionic };

  /// Block-diagonal rotations: J e_{2i} = e_{2i+1}, J e_{2i+1} = -e_{2i}.
  static ComplexStructure standard_complex(int m);
  /// Left multiplication by i, j, k on H^m with real coordinates (1, i, j, k) per block.
  static ComplexStructure standard_quaternionic(int m);
  /// Validates J^2 = -Id (and I^2 = J^2 = K^2 = -Id, IJ = K) and orthogonality to 1e-12.
  static ComplexStructure from_generators(Kind kind, std::vector<SymMatrix> generators);

  Kind kind() const { return kind_; }
  int m() const { return m_; }
  int ambient_dim() const { return static_cast<int>(generators_.front().rows()); }
  int multiplicity() const { return kind_ == Kind::complex ? 2 : 4; }
  const std::vector<SymMatrix>& generators() const { return generators_; }

 private:
  ComplexStructure(Kind kind, int m, std::vector<SymMatrix> generators)
      : kind_(kind), m_(m), generators_(std::move(generators)) {}

  Kind kind_;
  int m_;
  std::vector<SymMatrix> generators_;  // general (non-symmetric) matrices stored in the same type
};

/// A_C = (A - JAJ)/2, resp. A_H = (A - IAI - JAJ - KAK)/4.
SymMatrix hermitian_part(const SymMatrix& a, const ComplexStructure& c);

}  // namespace subeq
