// Acceptance run: one PASS/FAIL line per criterion. `acceptance --only N` runs a single one.

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "subeq/boundary.hpp"
#include "subeq/catalog.hpp"
#include "subeq/checks.hpp"
#include "subeq/garding.hpp"
#include "subeq/riesz.hpp"
#include "subeq/sampling.hpp"
#include "subeq/solver.hpp"

using namespace subeq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vec vec(std::initializer_list<double> xs) {
  Vec out(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

// 1 ---------------------------------------------------------------------------------------

Outcome branch_duality() {
  Outcome out;
  const auto t0 = Clock::now();
  long worst = 0, cases = 0;
  for (int n : {2, 3}) {
    for (int k = 1; k <= n; ++k) {
      CheckOptions o;
      o.seed = 100 + 10 * n + k;
      const auto r = membership_agreement(dual(make_branch(ScalarField::real, k, n)),
                                          make_branch(ScalarField::real, n - k + 1, n), 10000, o);
      worst = std::max(worst, r.disagreements);
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  out.require(worst == 0, std::to_string(cases) + " cases x 1e4, max disagreements " + std::to_string(worst));
  out.require(secs < 10.0, fmt("%.2f s < 10 s", secs));
  return out;
}

// 2 ---------------------------------------------------------------------------------------

Outcome riesz() {
  Outcome out;
  const auto t0 = Clock::now();
  RieszOptions o;
  o.tol = 1e-6;
  struct Case {
    const char* name;
    Subequation cone;
    double expect;
  };
  const double lam = 1, big = 2, delta = 1;
  const int n = 3;
  const Case cases[] = {
      {"Pucci(1,2,3)", make_pucci_cone(lam, big, n), (lam / big) * (n - 1) + 1},
      {"P(delta=1,n=3)", make_delta_cone(delta, n), (delta * n + 1) / (delta + 1)},
      {"P", make_branch(ScalarField::real, 1, n), 1.0},
      {"P(p=2.5,n=4)", make_pcone(2.5, 4), 2.5},
  };
  for (const auto& c : cases) {
    const double pm = riesz_characteristic(c.cone, o).p_m;
    out.require(std::abs(pm - c.expect) <= 1e-6, std::string(c.name) + fmt(" p_M=%.9f vs %.9f", pm, c.expect));
  }
  const double secs = seconds_since(t0);
  out.require(secs < 5.0, fmt("%.2f s < 5 s", secs));
  return out;
}

// 3 ---------------------------------------------------------------------------------------

// sigma_2 from 2x2 principal minors, no eigenvalues involved
double sigma2_minors(const SymMatrix& a) {
  double s = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.rows(); ++j) s += a(i, i) * a(j, j) - a(i, j) * a(i, j);
  return s;
}

Outcome garding() {
  Outcome out;
  const int n = 3;
  SymMatrix a = vec({1, 1, -1}).asDiagonal();

  // oracle: q(t) = sigma_2(A + t I) / 3 sampled at t = 0, 1, 2, interpolated, companion matrix roots
  Eigen::Matrix3d vander;
  Eigen::Vector3d vals;
  for (int i = 0; i < 3; ++i) {
    const double t = i;
    vander.row(i) << 1, t, t * t;
    vals(i) = sigma2_minors(SymMatrix(a + t * SymMatrix::Identity(n, n))) / 3.0;
  }
  const Eigen::Vector3d c = vander.fullPivLu().solve(vals);
  Eigen::Matrix2d companion;
  companion << 0, -c(0) / c(2), 1, -c(1) / c(2);
  std::vector<double> oracle;
  for (const auto& z : companion.eigenvalues()) oracle.push_back(-z.real());
  std::sort(oracle.begin(), oracle.end());

  const auto q = sigma_polynomial(2, n);
  const Eigen::VectorXd ev = garding_eigenvalues(q, a);
  const bool shape = ev.size() == 2;
  const double err = shape ? std::max(std::abs(ev(0) - oracle[0]), std::abs(ev(1) - oracle[1])) : 1.0;
  const double closed = shape ? std::max(std::abs(ev(0) + 1.0 / 3), std::abs(ev(1) - 1.0)) : 1.0;
  out.require(shape && err <= 1e-9 && closed <= 1e-9,
              fmt("eigenvalues vs companion oracle %.1e, vs (-1/3, 1) %.1e", err, closed));

  // midpoint convexity of the Garding cone
  const auto cone = branch_subequation(q, 1);
  JetSampler sampler(n, 33);
  long bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const Jet x = sample_member(cone, Point(), sampler);
    const Jet y = sample_member(cone, Point(), sampler);
    bad += !member(cone, 0.5 * (x + y)).in_set();
  }
  out.require(bad == 0, "midpoint violations " + std::to_string(bad) + "/1e4");

  long dis = 0;
  for (int k = 1; k <= n; ++k) {
    CheckOptions o;
    o.seed = 300 + k;
    dis += membership_agreement(branch_subequation(det_polynomial(n), k), make_branch(ScalarField::real, k, n), 10000, o)
               .disagreements;
  }
  out.require(dis == 0, "det branches vs ordinary branches, disagreements " + std::to_string(dis));
  return out;
}

// 4 ---------------------------------------------------------------------------------------

Outcome monotonicity() {
  Outcome out;
  const int n = 3;
  struct Pair {
    std::string name;
    Subequation f;
    Subequation m;
  };
  std::vector<Pair> pairs;
  const auto p = make_branch(ScalarField::real, 1, n);
  for (int k = 1; k <= n; ++k) pairs.push_back({"Lambda_" + std::to_string(k) + " + P", make_branch(ScalarField::real, k, n), p});
  for (int k = 1; k <= 3; ++k)
    pairs.push_back({"Lambda_" + std::to_string(k) + "(2) + P(2)", make_p_branch(2, k, n), make_pcone(2, n)});
  const auto q = sigma_polynomial(2, n);
  for (int k = 1; k <= 2; ++k)
    pairs.push_back({"Lambda_{sigma2," + std::to_string(k) + "} + M_sigma2", branch_subequation(q, k), branch_subequation(q, 1)});
  const double delta = 0.5;
  for (int k = 1; k <= n; ++k)
    pairs.push_back({"Lambda_" + std::to_string(k) + "(delta) + Pucci(delta,1+delta)",
                     make_delta_regularized(make_branch(ScalarField::real, k, n), delta),
                     make_pucci_cone(delta, 1 + delta, n)});

  long total = 0;
  int disagree = 0;
  std::string worst;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CheckOptions o;
    o.seed = 400 + i;
    const auto r = monotonicity_check(pairs[i].f, pairs[i].m, 10000, o);
    total += r.direct.violations;
    if (r.direct.violations > 0) worst = pairs[i].name;
    disagree += !r.agreement();
  }
  out.require(total == 0, std::to_string(pairs.size()) + " pairs x 1e4, violations " + std::to_string(total) +
                              (worst.empty() ? "" : " (" + worst + ")"));
  out.require(disagree == 0, "dual-form disagreements " + std::to_string(disagree));
  return out;
}

// 5 and 6 -----------------------------------------------------------------------------------

Grid unit_square(double h) { return Grid::box(vec({0, 0}), vec({1, 1}), h); }

double max_error(const GridProblem& p, const std::vector<double>& u, const ScalarFieldFn& exact) {
  double worst = 0.0;
  for (long i : p.interior()) worst = std::max(worst, std::abs(u[i] - exact(p.grid().point(i))));
  return worst;
}

double max_gap(const GridProblem& p, const std::vector<double>& u, const std::vector<double>& w) {
  double worst = 0.0;
  for (long i : p.interior()) worst = std::max(worst, std::abs(u[i] - w[i]));
  return worst;
}

const ScalarFieldFn kSaddle = [](const Point& x) { return x(0) * x(0) - x(1) * x(1); };
const ScalarFieldFn kParabola = [](const Point& x) { return x(0) * x(0); };

Outcome solver_accuracy() {
  Outcome out;
  const double h = 1.0 / 64;
  double slowest = 0.0;
  auto timed = [&](const GridProblem& p) {
    const auto t0 = Clock::now();
    auto r = perron_solve(p);
    slowest = std::max(slowest, seconds_since(t0));
    return r;
  };

  const GridProblem lap(unit_square(h), make_laplace(2), kSaddle);
  const auto u_lap = timed(lap);
  const double e_lap = max_error(lap, u_lap.u, kSaddle);
  out.require(u_lap.converged && e_lap <= 10 * h * h, fmt("Laplace err %.2e <= %.2e", e_lap, 10 * h * h));

  std::vector<double> errs;
  for (double hh : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const GridProblem p(unit_square(hh), make_branch(ScalarField::real, 1, 2), kParabola);
    const auto r = timed(p);
    errs.push_back(r.converged ? max_error(p, r.u, kParabola) : INFINITY);
  }
  out.require(errs.back() <= 10 * h, fmt("Lambda_1 err %.2e <= %.2e", errs.back(), 10 * h));
  const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
  const bool ratios = r1 >= 1.3 && r1 <= 3 && r2 >= 1.3 && r2 <= 3;
  out.require(ratios, fmt("halving ratios %.3g, ", r1) + fmt("%.3g in [1.3, 3]", r2) +
                          fmt(" (errors %.2e, ", errs[0]) + fmt("%.2e, ", errs[1]) + fmt("%.2e)", errs[2]));

  const auto u_slag = timed(lap.with_subequation(make_special_lagrangian(0.0, 2)));
  const double gap = max_gap(lap, u_slag.u, u_lap.u);
  out.require(u_slag.converged && gap <= 10 * h, fmt("slag(0) vs Laplace %.2e <= %.2e", gap, 10 * h));
  out.require(slowest < 60.0, fmt("slowest solve %.1f s < 60 s", slowest));
  return out;
}

Outcome duality_bracket() {
  Outcome out;
  const double h = 1.0 / 64;
  struct Case {
    const char* name;
    Subequation f;
    ScalarFieldFn phi;
  };
  const Case cases[] = {{"Laplace", make_laplace(2), kSaddle},
                        {"Lambda_1", make_branch(ScalarField::real, 1, 2), kParabola},
                        {"slag(0)", make_special_lagrangian(0.0, 2), kSaddle}};
  for (const auto& c : cases) {
    const GridProblem p(unit_square(h), c.f, c.phi);
    const auto b = dual_bracket_solve(p);
    const bool converged = b.upper.converged && b.lower_dual.converged;
    const double tol = std::max(b.upper.sweep_tol, b.lower_dual.sweep_tol);
    out.require(converged && b.worst_order <= 10 * tol,
                std::string(c.name) + fmt(" max(U~ - U) %.2e <= %.2e", b.worst_order, 10 * tol));
    out.require(b.max_gap <= 10 * h, std::string(c.name) + fmt(" |U - U~| %.2e <= %.2e", b.max_gap, 10 * h));
  }
  return out;
}

// 7 ---------------------------------------------------------------------------------------

// lower convex hull of (x_i, y_i) by monotone chain, evaluated back at the x_i
std::vector<double> lower_hull_values(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (seg + 1 < hull.size() - 1 && x[hull[seg + 1]] < x[i]) ++seg;
    const std::size_t a = hull[seg], b = hull[std::min(seg + 1, hull.size() - 1)];
    out[i] = a == b ? y[a] : y[a] + (y[b] - y[a]) * (x[i] - x[a]) / (x[b] - x[a]);
  }
  return out;
}

Outcome convex_envelope() {
  Outcome out;
  const double h = 1.0 / 256;
  const ScalarFieldFn g = [](const Point& x) { return std::pow(x(0) * x(0) - 1.0, 2); };
  const GridProblem p(Grid::box(vec({-1}), vec({1}), h), make_branch(ScalarField::real, 1, 1), g);
  const auto r = obstacle_solve(p, g);
  std::vector<double> xs, ys;
  for (long i = 0; i < p.grid().size(); ++i) {
    xs.push_back(p.grid().point(i)(0));
    ys.push_back(g(p.grid().point(i)));
  }
  const auto hull = lower_hull_values(xs, ys);
  double worst = 0.0;
  for (long i = 0; i < p.grid().size(); ++i) worst = std::max(worst, std::abs(r.u[i] - hull[i]));
  out.require(r.converged, "converged in " + std::to_string(r.sweeps) + " sweeps");
  out.require(worst <= 2 * h, fmt("sup |u - hull| %.2e <= %.2e", worst, 2 * h));
  return out;
}

// 8 ---------------------------------------------------------------------------------------

Outcome boundary_convexity() {
  Outcome out;
  const auto disk = DomainSpec::from_function(2, [](const Point& x) { return x.squaredNorm() - 1.0; });
  const auto annulus = DomainSpec::from_function(2, [](const Point& x) {
    const double r2 = x.squaredNorm();
    return (r2 - 1.0) * (r2 - 4.0);
  });
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> coef(-0.08, 0.08);
  std::vector<double> a(4), b(4);
  for (int k = 0; k < 4; ++k) a[k] = coef(rng), b[k] = coef(rng);
  const auto star = DomainSpec::from_function(2, [a, b](const Point& x) {
    const double th = std::atan2(x(1), x(0));
    double r = 1.0;
    for (int k = 0; k < 4; ++k) r += a[k] * std::cos((k + 2) * th) + b[k] * std::sin((k + 2) * th);
    return x.norm() - r;
  });

  std::vector<Point> circle, inner, both;
  for (int i = 0; i < 20; ++i) {
    const double th = 2 * M_PI * (i + 0.5) / 20;
    circle.push_back(vec({std::cos(th), std::sin(th)}));
    inner.push_back(circle.back());
    both.push_back(i % 2 ? circle.back() : Point(2.0 * circle.back()));
  }
  const auto star_pts = boundary_points_along_rays(star, vec({0, 0}), 20);

  auto count = [](const Subequation& f, const DomainSpec& d, const std::vector<Point>& pts) {
    int yes = 0;
    for (const auto& x : pts) yes += strict_convexity_test(f, d, x).overall;
    return yes;
  };
  const auto k1 = make_k_laplacian(1, 2), kinf = make_k_laplacian(kInfinity, 2);
  const int disk1 = count(k1, disk, circle), ann1 = count(k1, annulus, inner);
  const int disk_inf = count(kinf, disk, circle), ann_inf = count(kinf, annulus, both),
            star_inf = count(kinf, star, star_pts);
  out.require(disk1 == 20, "k=1 disk " + std::to_string(disk1) + "/20");
  out.require(ann1 == 0, "k=1 annulus inner " + std::to_string(ann1) + "/20 pass");
  out.require(disk_inf == 20 && ann_inf == 20 && star_inf == 20,
              "k=inf disk " + std::to_string(disk_inf) + ", annulus " + std::to_string(ann_inf) + ", star " +
                  std::to_string(star_inf) + " of 20");
  return out;
}

// 9 ---------------------------------------------------------------------------------------

Outcome zmp_machinery() {
  Outcome out;
  // case (4) with D the positive orthant, K = [0, 1]^2, x0 = (-1, -1)
  const double delta = 1.0, gamma = 1.0, c = 10.0;
  const Point x0 = vec({-1, -1});
  MonotonicityConeParams mp;
  mp.cone = DirectionalCone({vec({1, 0}), vec({0, 1})}, gamma);
  mp.gamma = gamma;
  const auto case4 = make_monotonicity_cone(4, 2, mp);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int strict = 0;
  double worst_margin = INFINITY;
  for (int t = 0; t < 1000; ++t) {
    const Point x = vec({unit(rng), unit(rng)});
    const Vec d = x - x0;
    const Jet psi(0.5 * delta * d.squaredNorm() - c, delta * d, SymMatrix(delta * SymMatrix::Identity(2, 2)));
    worst_margin = std::min(worst_margin, case4.rho(x, psi));
    strict += member(case4, x, psi).interior() && strict_member(case4, x, psi, 0.1);
  }
  out.require(strict == 1000, "psi strictly inside case (4) at " + std::to_string(strict) + "/1000 points" +
                                  fmt(", min rho %.3g", worst_margin));

  // case (6) fixture, R = 0.5, on the unit disk
  const double radius = 0.5, h = 1.0 / 32;
  const Grid grid = Grid::box(vec({-1.25, -1.25}), vec({1.25, 1.25}), h);
  const auto ball = DomainSpec::from_function(2, [](const Point& x) { return x.squaredNorm() - 1.0; });
  const auto k = domain_mask(grid, ball);
  std::vector<double> u(grid.size());
  for (long i = 0; i < grid.size(); ++i) {
    u[i] = std::pow(1 - radius, 3) - std::pow(std::max(0.0, grid.point(i).norm() - radius), 3);
  }
  // the lattice boundary of K lies just inside the circle; lower u by its maximum there (r is free in the cone)
  const Stencil s = Stencil::make(StencilKind::standard, 2);
  double edge = -INFINITY;
  for (long i = 0; i < grid.size(); ++i) {
    if (!k[i]) continue;
    for (const auto& d : s.directions) {
      const long fwd = grid.neighbor(i, d), back = grid.neighbor(i, {-d[0], -d[1], -d[2]});
      if (fwd < 0 || back < 0 || !k[fwd] || !k[back]) edge = std::max(edge, u[i]);
    }
  }
  for (double& v : u) v -= edge;
  mp = {};
  mp.radius = radius;
  const auto cmp = comparison_check(grid, u, std::vector<double>(grid.size(), 0.0), dual(make_monotonicity_cone(6, 2, mp)), k);
  const bool failed = cmp.status == ComparisonStatus::fail && cmp.witness >= 0;
  std::string where;
  if (cmp.witness >= 0) {
    const Point w = grid.point(cmp.witness);
    where = fmt(" at (%.3f, %.3f)", w(0), w(1));
  }
  out.require(failed, std::string("case (6) fixture comparison ") + to_string(cmp.status) + where +
                          fmt(", interior max %.3g", cmp.interior_max));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"branch duality", branch_duality},
      {"Riesz characteristics", riesz},
      {"Garding engine", garding},
      {"monotonicity suite", monotonicity},
      {"solver accuracy", solver_accuracy},
      {"duality bracket", duality_bracket},
      {"convex envelope", convex_envelope},
      {"boundary convexity", boundary_convexity},
      {"ZMP machinery", zmp_machinery},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i) + 1) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
