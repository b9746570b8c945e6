#include "subeq/catalog.hpp"

#include <cmath>
#include <numbers>

#include "subeq/sampling.hpp"

namespace subeq {

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

SubeqFlags pure_cone() { return {true, true, true, true}; }
SubeqFlags pure_set() { return {true, true, false, true}; }

}  // namespace

int multiplicity(ScalarField k) {
  switch (k) {
    case ScalarField::real: return 1;
    case ScalarField::complex: return 2;
    case ScalarField::quaternionic: return 4;
  }
  return 1;
}

const char* to_string(ScalarField k) noexcept {
  switch (k) {
    case ScalarField::real: return "real";
    case ScalarField::complex: return "complex";
    case ScalarField::quaternionic: return "quaternionic";
  }
  return "unknown";
}

Subequation make_branch(ScalarField field, int k, int n) {
  require(n >= 1 && k >= 1 && k <= n, ErrorKind::invalid_argument, "make_branch: need 1 <= k <= n");
  const int mult = multiplicity(field);
  require(n * mult <= kMaxDim, ErrorKind::invalid_argument, "make_branch: ambient dimension too large");
  const std::string label = std::string("branch:") + to_string(field) + ":k=" + std::to_string(k) +
                            ":n=" + std::to_string(n);
  const int index = (k - 1) * mult;
  if (field == ScalarField::real) {
    return Subequation(
        n, [index](const Point&, const Jet& j) { return ordered_eigenvalues(j.a)(index); }, pure_cone(), label);
  }
  const ComplexStructure cs = field == ScalarField::complex ? ComplexStructure::standard_complex(n)
                                                            : ComplexStructure::standard_quaternionic(n);
  return Subequation(
      n * mult,
      [index, cs](const Point&, const Jet& j) { return ordered_eigenvalues(hermitian_part(j.a, cs))(index); },
      pure_cone(), label);
}

Subequation make_pcone(double p, int n) {
  require(n >= 1 && p >= 1.0 && p <= n, ErrorKind::invalid_argument, "make_pcone: need 1 <= p <= n");
  const int whole = static_cast<int>(std::floor(p));
  const double frac = p - whole;
  return Subequation(
      n,
      [whole, frac](const Point&, const Jet& j) {
        const Vec ev = ordered_eigenvalues(j.a);
        double s = ev.head(whole).sum();
        if (frac > 0.0) s += frac * ev(whole);
        return s;
      },
      pure_cone(), "pcone:p=" + fmt_num(p) + ":n=" + std::to_string(n));
}

Subequation make_pucci_cone(double lam, double big_lam, int n) {
  require_ellipticity(lam, big_lam);
  return Subequation(
      n, [lam, big_lam](const Point&, const Jet& j) { return pucci_minus(j.a, lam, big_lam); }, pure_cone(),
      "pucci:lam=" + fmt_num(lam) + ":Lam=" + fmt_num(big_lam) + ":n=" + std::to_string(n));
}

Subequation make_delta_cone(double delta, int n) {
  require(delta > 0.0, ErrorKind::invalid_argument, "make_delta_cone: delta must be positive");
  return Subequation(
      n,
      [delta](const Point&, const Jet& j) { return ordered_eigenvalues(j.a)(0) + delta * j.a.trace(); },
      pure_cone(), "delta:d=" + fmt_num(delta) + ":n=" + std::to_string(n));
}

Subequation make_laplace(int n) {
  return Subequation(
      n, [](const Point&, const Jet& j) { return j.a.trace(); }, pure_cone(), "laplace:n=" + std::to_string(n));
}

Subequation make_sigma_cone(int k, int n) {
  require(k >= 1 && k <= n, ErrorKind::invalid_argument, "make_sigma_cone: need 1 <= k <= n");
  std::vector<double> norms;
  for (int l = 1; l <= k; ++l) norms.push_back(binomial(n, l));
  return Subequation(
      n,
      [k, norms](const Point&, const Jet& j) {
        const Vec ev = ordered_eigenvalues(j.a);
        double out = std::numeric_limits<double>::infinity();
        for (int l = 1; l <= k; ++l) out = std::min(out, elementary_symmetric(ev, l) / norms[l - 1]);
        return out;
      },
      pure_cone(), "sigma:k=" + std::to_string(k) + ":n=" + std::to_string(n));
}

Subequation make_special_lagrangian(double c, int n) {
  require(std::abs(c) < n * std::numbers::pi / 2, ErrorKind::invalid_argument,
          "make_special_lagrangian: need |c| < n pi / 2");
  return Subequation(
      n,
      [c](const Point&, const Jet& j) {
        const Vec ev = ordered_eigenvalues(j.a);
        double s = 0.0;
        for (int i = 0; i < ev.size(); ++i) s += std::atan(ev(i));
        return s - c;
      },
      SubeqFlags{true, true, c == 0.0, true}, "slag:c=" + fmt_num(c) + ":n=" + std::to_string(n));
}

Subequation make_calabi_yau(int n) {
  return Subequation(
      n,
      [n](const Point&, const Jet& j) {
        const double trace_part = j.a.trace() + n - std::exp(j.r);
        return std::min(trace_part, ordered_eigenvalues(j.a)(0) + 1.0);
      },
      SubeqFlags{false, false, false, true}, "calabi_yau:n=" + std::to_string(n));
}

Subequation make_k_laplacian(double k, int n) {
  require(k >= 1.0, ErrorKind::invalid_argument, "make_k_laplacian: need k >= 1");
  const bool infinite = std::isinf(k);
  std::string label = "klap:k=" + (infinite ? std::string("inf") : fmt_num(k)) + ":n=" + std::to_string(n);
  return Subequation(
      n,
      [k, infinite](const Point&, const Jet& j) {
        const double pn = j.p.norm();
        const SymMatrix a = symmetric_from_upper(j.a);
        if (pn > 0.0) {
          const Vec e = j.p / pn;
          const double q = e.dot(a * e);
          return infinite ? q : a.trace() + (k - 2.0) * q;
        }
        // p = 0: the closure contains A iff some direction gives g >= 0, the interior
        // needs every direction to give g > 0
        const Vec ev = ordered_eigenvalues(a);
        const double lo = ev(0);
        const double hi = ev(ev.size() - 1);
        double gmin = 0.0;
        double gmax = 0.0;
        if (infinite) {
          gmin = lo;
          gmax = hi;
        } else {
          const double c = k - 2.0;
          gmin = a.trace() + (c >= 0 ? c * lo : c * hi);
          gmax = a.trace() + (c >= 0 ? c * hi : c * lo);
        }
        if (gmin > 0.0) return gmin;
        if (gmax < 0.0) return gmax;
        return 0.0;
      },
      SubeqFlags{false, true, true, true}, std::move(label));
}

Subequation make_monge_ampere(int n) {
  return Subequation(
      n,
      [](const Point&, const Jet& j) {
        const Vec ev = ordered_eigenvalues(j.a);
        return std::min(ev.prod() - 1.0, ev(0));
      },
      pure_set(), "monge_ampere:n=" + std::to_string(n));
}

Subequation make_calabi_yau_det(int n) {
  require(2 * n <= kMaxDim, ErrorKind::invalid_argument, "make_calabi_yau_det: dimension too large");
  const ComplexStructure cs = ComplexStructure::standard_complex(n);
  return Subequation(
      2 * n,
      [cs, n](const Point&, const Jet& j) {
        SymMatrix b = hermitian_part(j.a, cs);
        b += SymMatrix::Identity(2 * n, 2 * n);
        const Vec ev = ordered_eigenvalues(b);
        double det_c = 1.0;
        for (int i = 0; i < n; ++i) det_c *= ev(2 * i);
        return std::min(det_c - 1.0, ev(0));
      },
      pure_set(), "calabi_yau_det:n=" + std::to_string(n));
}

Subequation make_p_branch(int p, int k, int n) {
  require(p >= 1 && p <= n, ErrorKind::invalid_argument, "make_p_branch: need 1 <= p <= n");
  const int count = static_cast<int>(std::llround(binomial(n, p)));
  require(k >= 1 && k <= count, ErrorKind::invalid_argument, "make_p_branch: need 1 <= k <= binomial(n, p)");
  std::vector<std::vector<int>> subsets;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    subsets.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int l = i + 1; l < p; ++l) idx[l] = idx[l - 1] + 1;
  }
  return Subequation(
      n,
      [subsets, k](const Point&, const Jet& j) {
        const Vec ev = ordered_eigenvalues(j.a);
        std::vector<double> sums;
        sums.reserve(subsets.size());
        for (const auto& s : subsets) {
          double v = 0.0;
          for (int i : s) v += ev(i);
          sums.push_back(v);
        }
        std::nth_element(sums.begin(), sums.begin() + (k - 1), sums.end());
        return sums[k - 1];
      },
      SubeqFlags{true, true, true, true},
      "pbranch:p=" + std::to_string(p) + ":k=" + std::to_string(k) + ":n=" + std::to_string(n));
}

Subequation make_delta_regularized(const Subequation& f, double delta) {
  require(f.flags().pure_second_order, ErrorKind::invalid_argument,
          "make_delta_regularized: F must be pure second order");
  require(delta > 0.0, ErrorKind::invalid_argument, "make_delta_regularized: delta must be positive");
  auto rho = f.defining_function();
  return Subequation(
      f.dim(),
      [rho, delta](const Point& x, const Jet& j) {
        Jet shifted = j;
        shifted.a.diagonal().array() += delta * j.a.trace();
        return rho(x, shifted);
      },
      f.flags(), "reg:d=" + fmt_num(delta) + ":" + f.label());
}

GrassmannSet GrassmannSet::from_frames(int p, int n, std::vector<Frame> frames) {
  require(p >= 1 && p <= n && n <= kMaxDim, ErrorKind::invalid_argument, "GrassmannSet: need 1 <= p <= n");
  require(!frames.empty(), ErrorKind::invalid_argument, "GrassmannSet: empty frame list");
  for (const auto& w : frames) {
    require(w.rows() == n && w.cols() == p, ErrorKind::dimension_mismatch, "GrassmannSet: frame has wrong shape");
    require(is_orthonormal_frame(w), ErrorKind::invalid_argument, "GrassmannSet: frame is not orthonormal");
  }
  return GrassmannSet{p, n, std::move(frames)};
}

GrassmannSet GrassmannSet::sample(int p, int n, int count) {
  require(p >= 1 && p <= n && count >= 1, ErrorKind::invalid_argument, "GrassmannSet::sample: bad arguments");
  std::vector<Frame> frames;
  if (p == n) {
    frames.push_back(Frame::Identity(n, n));
    return from_frames(p, n, std::move(frames));
  }
  if (p == 1 && n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = std::numbers::pi * i / count;
      Frame w(2, 1);
      w << std::cos(t), std::sin(t);
      frames.push_back(w);
    }
    return from_frames(p, n, std::move(frames));
  }
  if (p == 1 || p == n - 1) {
    for (const auto& e : low_discrepancy_sphere(n, 2 * n + count)) {
      if (static_cast<int>(frames.size()) == count) break;
      if (e.minCoeff() < -1 + 1e-15) continue;  // keep one of +-e for the axes
      if (p == 1) {
        frames.push_back(Frame(e));
        continue;
      }
      const SymMatrix col = e;
      Eigen::HouseholderQR<SymMatrix> qr(col);
      const SymMatrix q = qr.householderQ() * SymMatrix::Identity(n, n);
      frames.push_back(q.rightCols(n - 1));
    }
    return from_frames(p, n, std::move(frames));
  }
  const auto pts = low_discrepancy_sphere(n * p, 2 * n * p + count);
  for (int i = 2 * n * p; i < static_cast<int>(pts.size()); ++i) {
    SymMatrix m(n, p);
    for (int c = 0; c < p; ++c) m.col(c) = pts[i].segment(c * n, n);
    Eigen::HouseholderQR<SymMatrix> qr(m);
    const SymMatrix q = qr.householderQ() * SymMatrix::Identity(n, n);
    frames.push_back(q.leftCols(p));
  }
  return from_frames(p, n, std::move(frames));
}

Subequation make_geometric(const GrassmannSet& g) {
  require(!g.frames.empty(), ErrorKind::invalid_argument, "make_geometric: empty Grassmann set");
  auto frames = std::make_shared<const std::vector<Frame>>(g.frames);
  return Subequation(
      g.n,
      [frames](const Point&, const Jet& j) {
        const SymMatrix a = symmetric_from_upper(j.a);
        double out = std::numeric_limits<double>::infinity();
        for (const auto& w : *frames) out = std::min(out, (w.transpose() * a * w).trace());
        return out;
      },
      pure_cone(), "geometric:p=" + std::to_string(g.p) + ":n=" + std::to_string(g.n) +
                       ":frames=" + std::to_string(g.frames.size()));
}

DirectionalCone::DirectionalCone(std::vector<Vec> generators, double gamma)
    : n_(generators.empty() ? 0 : static_cast<int>(generators.front().size())),
      gamma_(gamma),
      generators_(std::move(generators)) {
  require(n_ >= 1, ErrorKind::invalid_argument, "DirectionalCone: no generators");
  require(gamma_ >= 0.0, ErrorKind::invalid_argument, "DirectionalCone: gamma must be >= 0");
  for (auto& g : generators_) {
    require(g.size() == n_, ErrorKind::dimension_mismatch, "DirectionalCone: generator dimensions differ");
    require(g.norm() > 1e-12, ErrorKind::invalid_argument, "DirectionalCone: zero generator");
    g.normalize();
  }
  const int m = static_cast<int>(generators_.size());
  const double tol = 1e-12;
  if (n_ == 1) {
    normals_.push_back(generators_.front());
  } else {
    std::vector<int> idx(n_ - 1);
    for (int i = 0; i < n_ - 1; ++i) idx[i] = i;
    while (m >= n_ - 1) {
      Eigen::MatrixXd rows(n_ - 1, n_);
      for (int i = 0; i < n_ - 1; ++i) rows.row(i) = generators_[idx[i]].transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
      if (lu.rank() == n_ - 1) {
        Vec nu = lu.kernel().col(0);
        nu.normalize();
        double lo = 0.0, hi = 0.0;
        for (const auto& g : generators_) {
          lo = std::min(lo, nu.dot(g));
          hi = std::max(hi, nu.dot(g));
        }
        if (lo >= -tol || hi <= tol) {
          if (lo < -tol) nu = -nu;
          bool dup = false;
          for (const auto& existing : normals_) dup = dup || (existing - nu).norm() < 1e-9;
          if (!dup) normals_.push_back(nu);
        }
      }
      int i = n_ - 2;
      while (i >= 0 && idx[i] == m - (n_ - 1) + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int l = i + 1; l < n_ - 1; ++l) idx[l] = idx[l - 1] + 1;
    }
  }
  require(!normals_.empty() && margin(centroid()) > tol, ErrorKind::invalid_argument,
          "DirectionalCone: conic hull has empty interior");
}

double DirectionalCone::margin(const Vec& p) const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& nu : normals_) out = std::min(out, nu.dot(p));
  return out;
}

Vec DirectionalCone::centroid() const {
  Vec c = Vec::Zero(n_);
  for (const auto& g : generators_) c += g;
  return c / static_cast<double>(generators_.size());
}

Subequation make_monotonicity_cone(int which, int n, const MonotonicityConeParams& params) {
  const std::string label = "mcone:case=" + std::to_string(which) + ":n=" + std::to_string(n);
  const SubeqFlags flags{false, false, true, true};
  auto lambda_min = [](const Jet& j) { return ordered_eigenvalues(j.a)(0); };
  switch (which) {
    case 1:
      return Subequation(
          n, [lambda_min](const Point&, const Jet& j) { return lambda_min(j); }, pure_cone(), label);
    case 2:
      return Subequation(
          n, [lambda_min](const Point&, const Jet& j) { return std::min(-j.r, lambda_min(j)); }, flags, label);
    case 3:
    case 4: {
      require(params.cone.has_value() && params.cone->dim() == n, ErrorKind::invalid_argument,
              "make_monotonicity_cone: cases 3 and 4 need a directional cone in R^n");
      const DirectionalCone d = *params.cone;
      const double gamma = which == 4 ? params.gamma : 0.0;
      require(which == 3 || gamma > 0.0, ErrorKind::invalid_argument, "make_monotonicity_cone: gamma must be > 0");
      return Subequation(
          n,
          [d, gamma, lambda_min](const Point&, const Jet& j) {
            return std::min({-j.r - gamma * j.p.norm(), d.margin(j.p), lambda_min(j)});
          },
          flags, label);
    }
    case 5: {
      require(params.lambda > 0.0, ErrorKind::invalid_argument, "make_monotonicity_cone: lambda must be > 0");
      const std::vector<Vec> dirs = direction_set(n, params.directions);
      const double lam = params.lambda;
      return Subequation(
          n,
          [dirs, lam](const Point&, const Jet& j) {
            const SymMatrix a = symmetric_from_upper(j.a);
            double out = std::numeric_limits<double>::infinity();
            for (const auto& e : dirs) out = std::min(out, e.dot(a * e) - lam * std::abs(j.p.dot(e)));
            return out;
          },
          SubeqFlags{false, true, true, true}, label);
    }
    case 6: {
      require(params.radius > 0.0, ErrorKind::invalid_argument, "make_monotonicity_cone: R must be > 0");
      const double radius = params.radius;
      return Subequation(
          n,
          [radius, lambda_min](const Point&, const Jet& j) { return lambda_min(j) - j.p.norm() / radius; },
          SubeqFlags{false, true, true, true}, label);
    }
    default:
      throw Error(ErrorKind::invalid_argument, "make_monotonicity_cone: case must be 1..6");
  }
}

Subequation make_obstacle(const Subequation& f, ScalarFieldFn g) {
  require(f.flags().reduced, ErrorKind::invalid_argument, "make_obstacle: F must be reduced");
  require(static_cast<bool>(g), ErrorKind::invalid_argument, "make_obstacle: empty obstacle");
  auto rho = f.defining_function();
  return Subequation(
      f.dim(),
      [rho, g](const Point& x, const Jet& j) {
        if (x.size() == 0) throw Error(ErrorKind::invalid_argument, "obstacle subequation needs a point x");
        return std::min(g(x) - j.r, rho(x, j));
      },
      SubeqFlags{false, false, false, false}, "obstacle:" + f.label());
}

}  // namespace subeq
