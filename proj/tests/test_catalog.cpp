#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "subeq/catalog.hpp"
#include "subeq/checks.hpp"
#include "subeq/error.hpp"
#include "subeq/garding.hpp"

using namespace subeq;

namespace {

Jet hess(std::initializer_list<double> d) {
  Vec v(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return Jet::hessian_only(v.asDiagonal());
}

std::vector<Subequation> catalog(int n) {
  std::vector<Subequation> out = {
      make_laplace(n),
      make_pcone(1.5, n),
      make_pucci_cone(1, 2, n),
      make_delta_cone(0.5, n),
      make_sigma_cone(2, n),
      make_special_lagrangian(0.4, n),
      make_calabi_yau(n),
      make_k_laplacian(1, n),
      make_k_laplacian(3, n),
      make_k_laplacian(kInfinity, n),
      make_monge_ampere(n),
      make_p_branch(1, 2, n),
      make_geometric(GrassmannSet::sample(1, n, 64)),
      make_delta_regularized(make_branch(ScalarField::real, 2, n), 0.5),
  };
  for (int k = 1; k <= n; ++k) out.push_back(make_branch(ScalarField::real, k, n));
  for (int c = 1; c <= 6; ++c) {
    MonotonicityConeParams mp;
    if (c == 3 || c == 4) {
      std::vector<Vec> gens;
      for (int i = 0; i < n; ++i) gens.push_back(Vec::Unit(n, i));
      mp.cone = DirectionalCone(gens, 1.0);
    }
    out.push_back(make_monotonicity_cone(c, n, mp));
  }
  if (n == 2) {
    out.push_back(make_branch(ScalarField::complex, 1, 1));
    out.push_back(make_calabi_yau_det(1));
  }
  return out;
}

}  // namespace

TEST_CASE("real branches") {
  const auto p = make_branch(ScalarField::real, 1, 3);
  gen::Source src(1);
  long bad = 0;
  for (int t = 0; t < 2000; ++t) {
    const SymMatrix a = src.sym(3);
    const double lmin = gen::reference_eigenvalues(a)(0);
    if (std::abs(lmin) < 1e-9) continue;
    bad += member(p, Jet::hessian_only(a)).in_set() != (lmin >= 0);
  }
  CHECK(bad == 0);
  CHECK(member(make_branch(ScalarField::real, 2, 2), hess({-3, -1})).region == Region::outside);
}

TEST_CASE("complex branch uses the hermitian part") {
  const auto f = make_branch(ScalarField::complex, 1, 1);
  CHECK(f.dim() == 2);
  const auto m = member(f, hess({2, 0}));
  CHECK(m.region == Region::inside);
  CHECK(m.margin == doctest::Approx(1.0));
}

TEST_CASE("p-convex cones") {
  gen::Source src(2);
  const auto p3 = make_pcone(3, 3);
  for (int t = 0; t < 100; ++t) {
    const Jet j = src.jet(3);
    CHECK(p3.rho(j) == doctest::Approx(j.a.trace()));
  }
  const auto f = make_pcone(1.5, 3);
  CHECK(f.rho(hess({-1, 1, 1})) == doctest::Approx(-0.5));
  CHECK(f.rho(hess({-0.4, 1, 1})) == doctest::Approx(0.1));
  CHECK(member(f, hess({-0.4, 1, 1})).region == Region::inside);
}

TEST_CASE("property: P(q) is contained in P(p) for q <= p") {
  gen::Source src(3);
  long bad = 0;
  for (int t = 0; t < 5000; ++t) {
    const int n = src.integer(2, 5);
    const double q = src.uniform(1, n), p = src.uniform(q, n);
    const Jet j = Jet::hessian_only(src.sym(n));
    if (make_pcone(q, n).rho(j) > 1e-9) bad += !member(make_pcone(p, n), j).in_set();
  }
  CHECK(bad == 0);
}

TEST_CASE("Pucci and delta cones") {
  CHECK(member(make_pucci_cone(1, 2, 2), hess({2, -1})).region == Region::boundary);

  gen::Source src(4);
  const auto d = make_delta_cone(0.3, 3);
  for (int t = 0; t < 500; ++t) CHECK(member(d, Jet::hessian_only(src.psd(3))).in_set());

  // the Pucci cone is convex: midpoints of member pairs are members
  const auto pucci = make_pucci_cone(1, 2, 3);
  JetSampler sampler(3, 5);
  long bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const Jet a = sample_member(pucci, Point(), sampler);
    const Jet b = sample_member(pucci, Point(), sampler);
    bad += !member(pucci, 0.5 * (a + b)).in_set();
  }
  CHECK(bad == 0);
}

TEST_CASE("special Lagrangian") {
  CHECK(member(make_special_lagrangian(0, 2), hess({1, -1})).region == Region::boundary);
  for (double c : {-1.0, 0.0, 0.8, 2.0}) {
    const auto r = membership_agreement(dual(make_special_lagrangian(c, 3)), make_special_lagrangian(-c, 3), 10000);
    CHECK_MESSAGE(r.disagreements == 0, c);
  }
  CHECK_THROWS_AS(make_special_lagrangian(3.2, 2), Error);
}

TEST_CASE("geometric subequation of a single line is u_xx >= 0") {
  Frame w(2, 1);
  w << 1, 0;
  const auto f = make_geometric(GrassmannSet::from_frames(1, 2, {w}));
  gen::Source src(6);
  for (int t = 0; t < 100; ++t) {
    const Jet j = src.jet(2);
    CHECK(f.rho(j) == doctest::Approx(j.a(0, 0)));
  }
  Frame not_unit(2, 1);
  not_unit << 1, 1;
  CHECK_THROWS_AS(GrassmannSet::from_frames(1, 2, {not_unit}), Error);
}

TEST_CASE("basic monotonicity cones") {
  gen::Source src(7);
  const auto m1 = make_monotonicity_cone(1, 3);
  for (int t = 0; t < 500; ++t) {
    const Jet j = src.jet(3);
    const double lmin = gen::reference_eigenvalues(j.a)(0);
    if (std::abs(lmin) > 1e-9) CHECK(member(m1, j).in_set() == (lmin >= 0));
  }

  // case 4 with gamma = 1 and D = {p1 >= |p2|}
  Vec g1(2), g2(2);
  g1 << 1, 1;
  g2 << 1, -1;
  MonotonicityConeParams mp;
  mp.cone = DirectionalCone({g1 / std::sqrt(2.0), g2 / std::sqrt(2.0)}, 1.0);
  mp.gamma = 1.0;
  const auto m4 = make_monotonicity_cone(4, 2, mp);
  Vec p(2);
  p << 1, 0;
  CHECK(member(m4, Jet(-2.0, p, SymMatrix::Identity(2, 2))).region == Region::inside);
  CHECK(member(m4, Jet(-0.5, p, SymMatrix::Identity(2, 2))).region == Region::outside);

  // case 6: A - (|p| / R) I >= 0
  mp = {};
  mp.radius = 2.0;
  const auto m6 = make_monotonicity_cone(6, 2, mp);
  p << 3, 4;  // |p| = 5, threshold 2.5
  CHECK(member(m6, Jet(0.0, p, 2.6 * SymMatrix::Identity(2, 2))).region == Region::inside);
  CHECK(member(m6, Jet(0.0, p, 2.4 * SymMatrix::Identity(2, 2))).region == Region::outside);
}

TEST_CASE("obstacle subequations") {
  const auto f = make_branch(ScalarField::real, 2, 2);
  const auto big = make_obstacle(f, [](const Point&) { return 1e9; });
  gen::Source src(8);
  Point x(2);
  x << 0.3, -0.2;
  long bad = 0;
  for (int t = 0; t < 2000; ++t) {
    const Jet j = src.jet(2);
    if (std::abs(f.rho(j)) < 1e-9) continue;
    bad += member(big, x, j).in_set() != member(f, j).in_set();
  }
  CHECK(bad == 0);

  const auto g = [](const Point& y) { return y.squaredNorm() - 1; };
  const auto h = make_obstacle(f, g);
  for (int t = 0; t < 2000; ++t) {
    const Jet j = src.jet(2);
    if (member(h, x, j).in_set()) CHECK(j.r <= g(x) + 1e-12);
  }

  // R_- x P is a monotonicity cone for H since R x P is one for F
  CheckOptions o;
  o.x = x;
  const auto r = monotonicity_check(h, make_monotonicity_cone(2, 2), 10000, o);
  CHECK(r.direct.violations == 0);
}

TEST_CASE("catalog entries satisfy the axioms") {
  for (int n : {2, 3}) {
    for (const auto& f : catalog(n)) {
      CheckOptions o;
      o.seed = 17;
      CHECK_MESSAGE(axiom_check(f, Axiom::positivity, 10000, o).violations == 0, f.label());
      CHECK_MESSAGE(axiom_check(f, Axiom::negativity, 10000, o).violations == 0, f.label());
    }
  }
}

TEST_CASE("branch duality over all scalar fields") {
  for (ScalarField k : {ScalarField::real, ScalarField::complex, ScalarField::quaternionic}) {
    const int max_n = k == ScalarField::real ? 3 : k == ScalarField::complex ? 2 : 1;
    for (int n = 1; n <= max_n; ++n) {
      for (int i = 1; i <= n; ++i) {
        const auto r = membership_agreement(dual(make_branch(k, i, n)), make_branch(k, n - i + 1, n), 10000, {},
                                            JetDistribution::hessian_only);
        CHECK_MESSAGE(r.disagreements == 0, to_string(k) << " n=" << n << " k=" << i);
      }
    }
  }
}

TEST_CASE("k-Laplacians are self-dual") {
  for (double k : {1.5, 2.0, 3.0, kInfinity}) {
    const auto f = make_k_laplacian(k, 3);
    const auto r = membership_agreement(dual(f), f, 10000);
    CHECK_MESSAGE(r.disagreements == 0, k);
  }
}

TEST_CASE("sigma_k cones sit inside the principal Garding branch") {
  for (int k = 1; k <= 3; ++k) {
    const auto cone = make_sigma_cone(k, 3);
    const auto principal = branch_subequation(sigma_polynomial(k, 3), 1);
    JetSampler sampler(3, 20 + k);
    long bad = 0;
    for (int t = 0; t < 2000; ++t) {
      const Jet j = sample_member(cone, Point(), sampler, 1e-6);
      bad += !member(principal, j, 1e-7).in_set();
    }
    CHECK_MESSAGE(bad == 0, k);
  }
}

TEST_CASE("catalog names") {
  gen::Source src(9);
  const std::pair<const char*, Subequation> same[] = {
      {"laplace:n=3", make_laplace(3)},
      {"branch:real:k=2:n=3", make_branch(ScalarField::real, 2, 3)},
      {"branch:complex:k=1:n=1", make_branch(ScalarField::complex, 1, 1)},
      {"pucci:lam=1:Lam=2:n=3", make_pucci_cone(1, 2, 3)},
      {"pcone:p=2.5:n=4", make_pcone(2.5, 4)},
      {"klap:k=inf:n=2", make_k_laplacian(kInfinity, 2)},
      {"dual:laplace:n=2", dual(make_laplace(2))},
      {"reg:d=0.5:branch:k=2:n=2", make_delta_regularized(make_branch(ScalarField::real, 2, 2), 0.5)},
  };
  for (const auto& [name, f] : same) {
    const auto g = make_named(name);
    REQUIRE(g.dim() == f.dim());
    for (int t = 0; t < 200; ++t) {
      const Jet j = src.jet(f.dim());
      CHECK_MESSAGE(g.rho(j) == doctest::Approx(f.rho(j)), name);
    }
  }
  for (const char* bad : {"", "nonsense", "branch:k=x", "pucci:lam=1", "branch:octonion:k=1:n=2", "dual"}) {
    try {
      make_named(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
    }
  }
  CHECK(dual_counterpart("branch:real:k=1:n=3").value() == "branch:real:k=3:n=3");
  CHECK(dual_counterpart("branch:complex:k=2:n=2").value() == "branch:complex:k=1:n=2");
  CHECK(dual_counterpart("laplace:n=2").value() == "laplace:n=2");
  CHECK(!dual_counterpart("pucci:lam=1:Lam=2:n=3"));
}
