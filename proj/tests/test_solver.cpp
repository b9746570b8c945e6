#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "subeq/error.hpp"
#include "subeq/solver.hpp"

using namespace subeq;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

Grid square(double h) { return Grid::box(v({-1, -1}), v({1, 1}), h); }

std::vector<double> sample(const Grid& g, const ScalarFieldFn& f) {
  std::vector<double> out(g.size());
  for (long i = 0; i < g.size(); ++i) out[i] = f(g.point(i));
  return out;
}

double max_error(const GridProblem& p, const SolveReport& r, const ScalarFieldFn& exact) {
  double worst = 0.0;
  for (long i : p.interior()) worst = std::max(worst, std::abs(r.u[i] - exact(p.grid().point(i))));
  return worst;
}

long centre(const Grid& g) {
  std::array<int, 3> c{g.count[0] / 2, g.count[1] / 2, g.count[2] / 2};
  return g.index(c);
}

}  // namespace

TEST_CASE("grid layout") {
  const Grid g = square(0.25);
  CHECK(g.count[0] == 9);
  CHECK(g.count[1] == 9);
  CHECK(g.size() == 81);
  for (long i = 0; i < g.size(); ++i) CHECK(g.index(g.coords(i)) == i);
  CHECK(g.neighbor(0, {-1, 0, 0}) == -1);
  CHECK(g.neighbor(0, {1, 1, 0}) == 10);
  CHECK((g.point(80) - v({1, 1})).norm() < 1e-14);
  CHECK_THROWS_AS(Grid::box(v({0, 0}), v({1, 1}), 0.3), Error);
}

TEST_CASE("discrete jets") {
  const Grid g = square(0.125);
  const auto s = Stencil::make(StencilKind::standard, 2);
  const long c = centre(g) + 1;
  const Point x = g.point(c);

  const auto affine = sample(g, [](const Point& p) { return 1 + 2 * p(0) - 3 * p(1); });
  Jet j = discrete_jet(affine, g, c, s);
  CHECK(j.r == doctest::Approx(1 + 2 * x(0) - 3 * x(1)));
  CHECK((j.p - v({2, -3})).norm() < 1e-12);
  CHECK(j.a.norm() < 1e-10);

  // second differences are exact on quadratics
  const auto quad = sample(g, [](const Point& p) { return p(0) * p(0) + 3 * p(0) * p(1) - p(1) * p(1); });
  j = discrete_jet(quad, g, c, s);
  SymMatrix a(2, 2);
  a << 2, 3, 3, -2;
  CHECK((j.a - a).norm() < 1e-10);
  CHECK((j.p - v({2 * x(0) + 3 * x(1), 3 * x(0) - 2 * x(1)})).norm() < 1e-12);

  const auto ws = Stencil::make(StencilKind::wide, 2);
  j = discrete_jet(quad, g, centre(g), ws);
  CHECK((j.a - a).norm() < 1e-9);

  // x^4 in 1D: (u(x+h) - 2u(x) + u(x-h)) / h^2 = 12 x^2 + 2 h^2
  const Grid line = Grid::box(v({0}), v({2}), 1e-2);
  const auto quart = sample(line, [](const Point& p) { return std::pow(p(0), 4); });
  const auto s1 = Stencil::make(StencilKind::standard, 1);
  const long one = 100;
  REQUIRE(std::abs(line.point(one)(0) - 1.0) < 1e-12);
  CHECK(std::abs(discrete_jet(quart, line, one, s1).a(0, 0) - 12.0) <= 2e-3);
}

TEST_CASE("Laplace with harmonic data is second order") {
  const ScalarFieldFn exact = [](const Point& p) { return std::exp(p(0)) * std::sin(p(1)); };
  for (double h : {0.25, 0.125}) {
    const GridProblem p(square(h), make_laplace(2), exact);
    const auto r = perron_solve(p);
    REQUIRE(r.converged);
    CHECK(max_error(p, r, exact) <= 10 * h * h);
    CHECK(r.subharmonic_defect <= 1e-6);
  }
}

TEST_CASE("the convex branch reproduces a degenerate convex solution") {
  // u = x^2 is the largest convex function below its boundary values on the square
  const ScalarFieldFn exact = [](const Point& p) { return p(0) * p(0); };
  const double h = 0.125;
  const GridProblem p(square(h), make_branch(ScalarField::real, 1, 2), exact);
  const auto r = perron_solve(p);
  REQUIRE(r.converged);
  CHECK(max_error(p, r, exact) <= 10 * h);
}

TEST_CASE("special Lagrangian with c = 0 in the plane is the Laplacian") {
  const ScalarFieldFn phi = [](const Point& p) { return std::cos(2 * p(0)) + p(1) * p(1) * p(1); };
  const GridProblem lap(square(0.125), make_laplace(2), phi);
  const auto a = perron_solve(lap);
  const auto b = perron_solve(lap.with_subequation(make_special_lagrangian(0.0, 2)));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  double gap = 0.0;
  for (long i : lap.interior()) gap = std::max(gap, std::abs(a.u[i] - b.u[i]));
  CHECK(gap <= 1e-6);
}

TEST_CASE("dual bracket") {
  const ScalarFieldFn phi = [](const Point& p) { return p(0) * p(1) + 0.5 * p(0); };
  for (const auto& f : {make_laplace(2), make_branch(ScalarField::real, 1, 2), make_pucci_cone(1, 2, 2)}) {
    const GridProblem p(square(0.125), f, phi);
    const auto b = dual_bracket_solve(p);
    REQUIRE(b.upper.converged);
    REQUIRE(b.lower_dual.converged);
    CHECK_MESSAGE(b.worst_order <= 10 * b.upper.sweep_tol, f.label());
    CHECK_MESSAGE(b.max_gap <= 1e-6, f.label());
  }
}

TEST_CASE("obstacle problems") {
  const ScalarFieldFn phi = [](const Point& p) { return p(0) * p(0) - p(1) * p(1); };
  const GridProblem p(square(0.125), make_laplace(2), phi);
  const auto free = perron_solve(p);
  const auto high = obstacle_solve(p, [](const Point&) { return 1e6; });
  REQUIRE(high.converged);
  CHECK(high.contact_nodes == 0);
  double gap = 0.0;
  for (long i : p.interior()) gap = std::max(gap, std::abs(free.u[i] - high.u[i]));
  CHECK(gap <= 1e-8);

  // a low flat obstacle caps the solution
  // an obstacle that meets the data on the edge and dips below the harmonic solution inside
  const ScalarFieldFn dip = [&](const Point& x) { return phi(x) - 0.5 * (1 - x(0) * x(0)) * (1 - x(1) * x(1)); };
  const auto low = obstacle_solve(p, dip);
  REQUIRE(low.converged);
  CHECK(low.contact_nodes > 0);
  for (long i : p.interior()) CHECK(low.u[i] <= dip(p.grid().point(i)) + 1e-12);
  CHECK_THROWS_AS(obstacle_solve(p, [](const Point&) { return 0.1; }), Error);
}

TEST_CASE("double well: convex obstacle solution is the convex hull") {
  // hull of (x^2 - 1/4)^2 on [-1, 1] is 0 on [-1/2, 1/2] and the function outside
  const ScalarFieldFn g = [](const Point& p) { return std::pow(p(0) * p(0) - 0.25, 2); };
  const ScalarFieldFn hull = [&](const Point& p) { return std::abs(p(0)) <= 0.5 ? 0.0 : g(p); };
  const double h = 1.0 / 64;
  const GridProblem p(Grid::box(v({-1}), v({1}), h), make_branch(ScalarField::real, 1, 1), g);
  const auto r = obstacle_solve(p, g);
  REQUIRE(r.converged);
  CHECK(max_error(p, r, hull) <= 10 * h * h);
}

TEST_CASE("comparison check") {
  const Grid g = square(0.125);
  const std::vector<bool> all = domain_mask(g, std::nullopt);

  // bracket pair: U is F-subharmonic, -U~ is dual-subharmonic, U - U~ = 0 on the edge
  const GridProblem p(g, make_laplace(2), [](const Point& x) { return x(0) * x(1); });
  const auto b = dual_bracket_solve(p);
  ComparisonOptions o;
  o.zmp_tol = 1e-7;
  const auto ok = comparison_check(g, b.upper.u, b.lower_dual.u, make_laplace(2), all, o);
  CHECK(ok.status == ComparisonStatus::pass);
  CHECK(ok.hypothesis);

  // harmonic u <= 0 on the edge, v = 0
  const auto u = sample(g, [](const Point& x) { return x(0) * x(0) - x(1) * x(1) - 2; });
  const std::vector<double> zero(g.size(), 0.0);
  const auto harm = comparison_check(g, u, zero, make_laplace(2), all);
  CHECK(harm.status == ComparisonStatus::pass);
  CHECK(harm.interior_max < 0);

  // (1 - R)^3 - (|x| - R)_+^3 on the unit disk: the maximum principle fails for the dual of
  // the radius-R monotonicity cone
  const double radius = 0.5;
  const Grid fine = square(1.0 / 32);
  const auto disk = DomainSpec::from_function(2, [](const Point& x) { return x.squaredNorm() - 1.0; });
  const auto k = domain_mask(fine, disk);
  MonotonicityConeParams mp;
  mp.radius = radius;
  auto bump = sample(fine, [&](const Point& x) {
    return std::pow(1 - radius, 3) - std::pow(std::max(0.0, x.norm() - radius), 3);
  });
  // the lattice boundary of K sits just inside the circle; shift so u <= 0 there (r is free in the cone)
  double edge = -1e300;
  for (long i = 0; i < fine.size(); ++i) {
    if (!k[i]) continue;
    for (const Offset& d : Stencil::make(StencilKind::standard, 2).directions) {
      const Offset back{-d[0], -d[1], -d[2]};
      for (const Offset& off : {d, back}) {
        const long nb = fine.neighbor(i, off);
        if (nb < 0 || !k[nb]) edge = std::max(edge, bump[i]);
      }
    }
  }
  for (double& b : bump) b -= edge;
  const auto bad = comparison_check(fine, bump, std::vector<double>(fine.size(), 0.0),
                                    dual(make_monotonicity_cone(6, 2, mp)), k);
  CHECK(bad.status == ComparisonStatus::fail);
  CHECK(bad.interior_max > 0.09);
  CHECK(bad.witness >= 0);
  CHECK(to_json(bad, fine).at("status") == "fail");

  // a non-subharmonic u is reported, not judged
  const auto cap = sample(g, [](const Point& x) { return -x.squaredNorm(); });
  CHECK(comparison_check(g, cap, zero, make_laplace(2), all).status == ComparisonStatus::precondition_failed);
}

TEST_CASE("property: maxima of discretely subharmonic functions stay subharmonic") {
  // for the Laplacian only axis differences enter the trace, and those can only grow under max
  const Grid g = square(0.125);
  const auto s = Stencil::make(StencilKind::standard, 2);
  const auto lap = make_laplace(2);
  gen::Source src(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> m(g.size(), -1e300);
    for (int q = 0; q < 3; ++q) {
      SymMatrix a = src.sym(2);
      a -= std::min(0.0, a.trace()) / 2 * SymMatrix::Identity(2, 2);
      const Vec b = src.vec(2);
      const double c = src.uniform(-1, 1);
      const auto u = sample(g, [&](const Point& x) { return 0.5 * x.dot(a * x) + b.dot(x) + c; });
      for (long i = 0; i < g.size(); ++i) m[i] = std::max(m[i], u[i]);
    }
    const GridProblem p(g, lap, [](const Point&) { return 0.0; });
    double worst = 0.0;
    for (long i : p.interior()) worst = std::min(worst, lap.rho(discrete_jet(m, g, i, s)));
    CHECK(worst >= -1e-9);
  }
}

TEST_CASE("property: solutions are monotone in the boundary data") {
  gen::Source src(2);
  const auto f = make_pucci_cone(1, 2, 2);
  for (int t = 0; t < 4; ++t) {
    const double a = src.uniform(-1, 1), b = src.uniform(-1, 1), lift = src.uniform(0, 0.5);
    const ScalarFieldFn lo = [=](const Point& x) { return a * x(0) * x(0) + b * x(0) * x(1); };
    const ScalarFieldFn hi = [=](const Point& x) { return lo(x) + lift * (1 + x(1)); };
    const GridProblem p(square(0.125), f, lo);
    const auto u = perron_solve(p), w = perron_solve(p.with_boundary(hi));
    for (long i : p.interior()) CHECK(u.u[i] <= w.u[i] + 1e-8);
  }
}

TEST_CASE("curved domains and failure modes") {
  const auto disk = DomainSpec::from_function(2, [](const Point& x) { return x.squaredNorm() - 1.0; });
  const ScalarFieldFn exact = [](const Point& x) { return x(0) * x(0) - x(1) * x(1) + x(0); };
  const double h = 1.0 / 16;
  const GridProblem p(Grid::box(v({-1.25, -1.25}), v({1.25, 1.25}), h), make_laplace(2), exact, disk);
  const auto r = perron_solve(p);
  REQUIRE(r.converged);
  CHECK(max_error(p, r, exact) <= 1e-6);
  const auto j = to_json(r);
  CHECK(j.at("converged") == true);

  SolverParams tight;
  tight.max_sweeps = 3;
  const GridProblem q(square(0.125), make_laplace(2), exact, std::nullopt, tight);
  CHECK(!perron_solve(q).converged);

  CHECK_THROWS_AS(GridProblem(square(0.125), make_laplace(3), exact), Error);
}
