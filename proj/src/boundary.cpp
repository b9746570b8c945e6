#include "subeq/boundary.hpp"

#include <cmath>

#include "subeq/sampling.hpp"

namespace subeq {

DomainSpec DomainSpec::from_function(int n, std::function<double(const Point&)> rho) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::invalid_argument, "DomainSpec: bad dimension");
  require(static_cast<bool>(rho), ErrorKind::invalid_argument, "DomainSpec: empty defining function");
  DomainSpec d;
  d.n = n;
  d.rho = std::move(rho);
  return d;
}

DomainSpec DomainSpec::from_expression(int n, const Expression& e) {
  require(e.max_variable() <= n, ErrorKind::config, "DomainSpec: expression uses more variables than the dimension");
  return from_function(n, [e](const Point& x) { return e(x); });
}

double DomainSpec::value(const Point& x) const { return rho(x); }

namespace {

Vec fd_gradient(const DomainSpec& d, const Point& x, double h) {
  Vec g(d.n);
  for (int i = 0; i < d.n; ++i) {
    Point xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (d.rho(xp) - d.rho(xm)) / (2 * h);
  }
  return g;
}

SymMatrix fd_hessian(const DomainSpec& d, const Point& x, double h) {
  SymMatrix hs(d.n, d.n);
  const double f0 = d.rho(x);
  for (int i = 0; i < d.n; ++i) {
    Point xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    hs(i, i) = (d.rho(xp) - 2 * f0 + d.rho(xm)) / (h * h);
    for (int j = i + 1; j < d.n; ++j) {
      Point a = x, b = x, c = x, e = x;
      a(i) += h; a(j) += h;
      b(i) += h; b(j) -= h;
      c(i) -= h; c(j) += h;
      e(i) -= h; e(j) -= h;
      const double v = (d.rho(a) - d.rho(b) - d.rho(c) + d.rho(e)) / (4 * h * h);
      hs(i, j) = v;
      hs(j, i) = v;
    }
  }
  return hs;
}

}  // namespace

Vec DomainSpec::grad(const Point& x) const {
  if (gradient) return gradient(x);
  const Vec coarse = fd_gradient(*this, x, h_geo);
  const Vec fine = fd_gradient(*this, x, h_geo / 2);
  return (4.0 * fine - coarse) / 3.0;
}

SymMatrix DomainSpec::hess(const Point& x) const {
  if (hessian) return hessian(x);
  const SymMatrix coarse = fd_hessian(*this, x, h_geo);
  const SymMatrix fine = fd_hessian(*this, x, h_geo / 2);
  return (4.0 * fine - coarse) / 3.0;
}

double DomainSpec::richardson_gap(const Point& x) const {
  return (fd_hessian(*this, x, h_geo) - fd_hessian(*this, x, h_geo / 2)).cwiseAbs().maxCoeff();
}

SecondFundamentalForm second_fundamental_form(const DomainSpec& d, const Point& x) {
  require(x.size() == d.n, ErrorKind::dimension_mismatch, "second_fundamental_form: point dimension mismatch");
  require(std::abs(d.value(x)) <= kOnBoundaryTol, ErrorKind::invalid_argument,
          "second_fundamental_form: point is not on the boundary");
  const int n = d.n;
  const Vec g = d.grad(x);
  const double gn = g.norm();
  if (gn < kMinGradient) {
    throw Error(ErrorKind::degenerate_geometry, "second_fundamental_form: defining function has vanishing gradient");
  }
  SecondFundamentalForm out;
  out.nu = g / gn;
  const SymMatrix col = out.nu;
  Eigen::HouseholderQR<SymMatrix> qr(col);
  const SymMatrix q = qr.householderQ() * SymMatrix::Identity(n, n);
  out.tangent = q.rightCols(n - 1);
  const SymMatrix h = d.hess(x);
  SymMatrix ii = out.tangent.transpose() * h * out.tangent / gn;
  out.ii = 0.5 * (ii + ii.transpose());
  return out;
}

Point project_to_boundary(const DomainSpec& d, const Point& x0, double tol, int max_iter) {
  Point x = x0;
  for (int it = 0; it < max_iter; ++it) {
    const double v = d.value(x);
    if (std::abs(v) <= tol) return x;
    const Vec g = d.grad(x);
    const double g2 = g.squaredNorm();
    if (g2 < kMinGradient * kMinGradient) {
      throw Error(ErrorKind::degenerate_geometry, "project_to_boundary: vanishing gradient");
    }
    x -= (v / g2) * g;
  }
  if (std::abs(d.value(x)) <= kOnBoundaryTol) return x;
  throw Error(ErrorKind::non_convergence, "project_to_boundary: Newton iteration did not converge");
}

std::vector<Point> boundary_points_along_rays(const DomainSpec& d, const Point& center, int count) {
  require(d.value(center) < 0, ErrorKind::invalid_argument, "boundary_points_along_rays: center must be inside");
  std::vector<Point> out;
  std::vector<Vec> dirs;
  if (d.n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2 * M_PI * (i + 0.5) / count;
      Vec e(2);
      e << std::cos(t), std::sin(t);
      dirs.push_back(e);
    }
  } else {
    for (const auto& e : low_discrepancy_sphere(d.n, count)) dirs.push_back(e);
  }
  for (const auto& e : dirs) {
    double lo = 0.0, hi = 1.0;
    int grow = 0;
    while (d.value(center + hi * e) < 0) {
      lo = hi;
      hi *= 2;
      if (++grow > 60) throw Error(ErrorKind::degenerate_geometry, "boundary_points_along_rays: unbounded domain");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (d.value(center + mid * e) < 0) lo = mid; else hi = mid;
    }
    out.push_back(project_to_boundary(d, center + 0.5 * (lo + hi) * e));
  }
  return out;
}

ConvexityVerdict strict_convexity_test(const Subequation& f, const DomainSpec& d, const Point& x,
                                       const ConvexityOptions& opts) {
  require(f.dim() == d.n, ErrorKind::dimension_mismatch, "strict_convexity_test: dimension mismatch");
  require(opts.t_max >= 1.0 && opts.stable_points >= 1, ErrorKind::invalid_argument,
          "strict_convexity_test: bad options");
  ConvexityVerdict out;
  out.x = x;
  out.sff = second_fundamental_form(d, x);
  const SymMatrix normal_part = out.sff.nu * out.sff.nu.transpose();
  const SymMatrix tangential = out.sff.ambient();

  std::vector<double> ts;
  for (double t = 1.0; t <= opts.t_max * (1 + 1e-12); t *= 2.0) ts.push_back(t);
  const int stable = std::min<int>(opts.stable_points, static_cast<int>(ts.size()));

  auto verdict_for = [&](const Subequation& g) {
    for (std::size_t i = ts.size() - stable; i < ts.size(); ++i) {
      const Jet j(0.0, out.sff.nu, ts[i] * normal_part + tangential);
      AsymptoticOptions ao;
      ao.seed = opts.seed + i;
      ao.x = f.flags().constant_coefficient ? Point() : x;
      const double radius = opts.radius_fraction * std::max(1.0, JetNorm{}(j));
      if (!asymptotic_interior_member(g, j, opts.scale_t0, radius, opts.trials, ao)) return false;
    }
    return true;
  };

  if (f.flags().reduced) {
    const bool v = verdict_for(f);
    out.lambdas = opts.lambda_grid;
    out.per_lambda.assign(opts.lambda_grid.size(), v);
    out.overall = v;
    return out;
  }
  require(!opts.lambda_grid.empty(), ErrorKind::invalid_argument, "strict_convexity_test: empty lambda grid");
  out.overall = true;
  for (double lambda : opts.lambda_grid) {
    const bool v = verdict_for(fix_r(f, lambda));
    out.lambdas.push_back(lambda);
    out.per_lambda.push_back(v);
    out.overall = out.overall && v;
  }
  return out;
}

}  // namespace subeq
