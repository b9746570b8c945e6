#include "subeq/garding.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <numbers>

#include "subeq/checks.hpp"
#include "subeq/sampling.hpp"

namespace subeq {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double eval_shifted(const HyperbolicPolynomial& q, const SymMatrix& a, double t) {
  SymMatrix b = a;
  b.diagonal().array() += t;
  return q(b);
}

}  // namespace

HyperbolicPolynomial HyperbolicPolynomial::create(std::string label, int n, int degree, Evaluator eval) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::invalid_argument, "HyperbolicPolynomial: bad dimension");
  require(degree >= 1 && degree <= 20, ErrorKind::invalid_argument, "HyperbolicPolynomial: degree must be 1..20");
  require(static_cast<bool>(eval), ErrorKind::invalid_argument, "HyperbolicPolynomial: empty evaluator");
  auto shared = std::make_shared<const Evaluator>(std::move(eval));
  const double at_identity = (*shared)(SymMatrix::Identity(n, n));
  require(std::isfinite(at_identity) && at_identity != 0.0, ErrorKind::invalid_argument,
          "HyperbolicPolynomial: Q(I) must be finite and non-zero");

  JetSampler sampler(n, 0x5eed);
  for (int s = 0; s < 3; ++s) {
    const SymMatrix a = sampler.symmetric();
    const double base = (*shared)(a);
    for (double t : {2.0, 1.0 / 3.0}) {
      const double expected = std::pow(t, degree) * base;
      const double got = (*shared)(t * a);
      if (std::abs(got - expected) > 1e-9 * std::max({1.0, std::abs(expected), std::abs(base)})) {
        throw Error(ErrorKind::invalid_argument,
                    "HyperbolicPolynomial '" + label + "': not homogeneous of degree " + std::to_string(degree));
      }
    }
  }
  return HyperbolicPolynomial(std::move(label), n, degree, std::move(shared), at_identity);
}

HyperbolicPolynomial det_polynomial(int n) {
  return HyperbolicPolynomial::create("det:n=" + std::to_string(n), n, n, [](const SymMatrix& a) {
    return symmetric_from_upper(a).determinant();
  });
}

HyperbolicPolynomial sigma_polynomial(int k, int n) {
  require(k >= 1 && k <= n, ErrorKind::invalid_argument, "sigma_polynomial: need 1 <= k <= n");
  const double norm = binomial(n, k);
  return HyperbolicPolynomial::create("sigma:k=" + std::to_string(k) + ":n=" + std::to_string(n), n, k,
                                      [k, norm](const SymMatrix& a) { return sigma_k(a, k) / norm; });
}

namespace {

struct ScaledCoefficients {
  Eigen::VectorXd c;  // q_A(s * tau) = sum c_i tau^i
  double s;
};

ScaledCoefficients scaled_coefficients(const HyperbolicPolynomial& q, const SymMatrix& a) {
  const int m = q.degree();
  const double s = std::max(1.0, symmetric_from_upper(a).norm());
  Eigen::MatrixXd v(m + 1, m + 1);
  Eigen::VectorXd rhs(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double tau = std::cos(std::numbers::pi * (j + 0.5) / (m + 1));
    double pw = 1.0;
    for (int i = 0; i <= m; ++i) {
      v(j, i) = pw;
      pw *= tau;
    }
    rhs(j) = eval_shifted(q, a, s * tau);
  }
  return {v.colPivHouseholderQr().solve(rhs), s};
}

}  // namespace

Eigen::VectorXd characteristic_coefficients(const HyperbolicPolynomial& q, const SymMatrix& a) {
  require(a.rows() == q.dim(), ErrorKind::dimension_mismatch, "characteristic_coefficients: dimension mismatch");
  auto [c, s] = scaled_coefficients(q, a);
  double f = 1.0;
  for (int i = 0; i < c.size(); ++i) {
    c(i) /= f;
    f *= s;
  }
  return c;
}

GardingRoots garding_roots(const HyperbolicPolynomial& q, const SymMatrix& a) {
  require(a.rows() == q.dim(), ErrorKind::dimension_mismatch, "garding_roots: dimension mismatch");
  const int m = q.degree();
  const auto [c, s] = scaled_coefficients(q, a);
  GardingRoots out;
  out.roots.resize(m);
  if (m == 1) {
    out.roots(0) = -s * c(0) / c(1);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -c(i) / c(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    require(es.info() == Eigen::Success, ErrorKind::non_convergence, "garding_roots: companion eigensolver failed");
    out.roots = s * es.eigenvalues();
  }

  Eigen::VectorXd lam(m);
  std::vector<bool> flagged(m, false);
  double spread = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::complex<double> z = out.roots(i);
    const double ratio = std::abs(z.imag()) / (1.0 + std::abs(z));
    if (ratio > kImaginaryTolerance) {
      // accept as part of a real root cluster only if Re z is a numerical zero of q_A
      const double tau = z.real() / s;
      double size = 0.0, pw = 1.0;
      for (int k = 0; k <= m; ++k) {
        size += std::abs(c(k)) * pw;
        pw *= std::abs(tau);
      }
      if (std::abs(eval_shifted(q, a, z.real())) <= 1e-10 * size) {
        ++out.clustered;
        flagged[i] = true;
        spread = std::max(spread, std::abs(z.imag()));
      } else {
        out.worst_imaginary = std::max(out.worst_imaginary, ratio);
      }
    }
    lam(i) = -z.real();
  }
  {
    // a multiple root splits into a small circle (or a close real pair); its centroid is
    // well conditioned
    std::vector<int> group(m);
    std::iota(group.begin(), group.end(), 0);
    const std::function<int(int)> find = [&](int i) { return group[i] == i ? i : group[i] = find(group[i]); };
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const double d = std::abs(out.roots(i) - out.roots(j));
        const bool near = d <= kMergeTolerance * (1.0 + std::abs(out.roots(i)));
        if (near || ((flagged[i] || flagged[j]) && d <= 2.5 * spread)) group[find(i)] = find(j);
      }
    }
    for (int g = 0; g < m; ++g) {
      double sum = 0.0;
      int count = 0;
      for (int i = 0; i < m; ++i)
        if (find(i) == g) sum += out.roots(i).real(), ++count;
      if (count < 2) continue;
      for (int i = 0; i < m; ++i)
        if (find(i) == g) lam(i) = -sum / count;
    }
  }
  std::sort(lam.data(), lam.data() + m);
  out.eigenvalues = lam;
  return out;
}

Eigen::VectorXd garding_eigenvalues(const HyperbolicPolynomial& q, const SymMatrix& a) {
  GardingRoots r = garding_roots(q, a);
  if (r.worst_imaginary > kImaginaryTolerance) {
    throw Error(ErrorKind::non_hyperbolic,
                "garding_eigenvalues: q_A has complex roots for '" + q.label() + "' (non-hyperbolic input)");
  }
  return r.eigenvalues;
}

nlohmann::json to_json(const HyperbolicityReport& r) {
  nlohmann::json out = {{"label", r.label},
                        {"trials", r.trials},
                        {"failures", r.failures},
                        {"borderline", r.borderline}};
  if (r.witness) {
    const SymMatrix w = *r.witness;
    out["witness"] = to_json(Jet::hessian_only(w))["A"];
    nlohmann::json roots = nlohmann::json::array();
    for (int i = 0; i < r.witness_roots.size(); ++i)
      roots.push_back({r.witness_roots(i).real(), r.witness_roots(i).imag()});
    out["witness_roots"] = roots;
  }
  return out;
}

HyperbolicityReport hyperbolicity_check(const HyperbolicPolynomial& q, long trials, std::uint64_t seed) {
  require(trials >= 1, ErrorKind::invalid_argument, "hyperbolicity_check: trials must be >= 1");
  JetSampler sampler(q.dim(), seed);
  HyperbolicityReport report{q.label(), trials, 0, 0, std::nullopt, {}};
  for (long t = 0; t < trials; ++t) {
    const SymMatrix a = sampler.symmetric();
    const GardingRoots r = garding_roots(q, a);
    if (r.clustered > 0) ++report.borderline;
    if (r.worst_imaginary > kImaginaryTolerance) {
      ++report.failures;
      if (!report.witness) {
        report.witness = a;
        report.witness_roots = r.roots;
      }
    }
  }
  return report;
}

Subequation branch_subequation(const HyperbolicPolynomial& q, int k) {
  require(k >= 1 && k <= q.degree(), ErrorKind::invalid_argument, "branch_subequation: need 1 <= k <= degree");
  const std::string label = "garding:" + q.label() + ":k=" + std::to_string(k);
  return Subequation(
      q.dim(), [q, k](const Point&, const Jet& j) { return garding_eigenvalues(q, j.a)(k - 1); },
      SubeqFlags{true, true, true, true}, label);
}

}  // namespace subeq
