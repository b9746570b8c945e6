#include "subeq/checks.hpp"

#include <cmath>

namespace subeq {

nlohmann::json to_json(const Jet& j) {
  nlohmann::json p = nlohmann::json::array();
  for (int i = 0; i < j.dim(); ++i) p.push_back(j.p(i));
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < j.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < j.dim(); ++k) row.push_back(j.a(i, k));
    a.push_back(row);
  }
  return {{"r", j.r}, {"p", p}, {"A", a}};
}

nlohmann::json to_json(const ViolationReport& r) {
  nlohmann::json out = {
      {"label", r.label}, {"axiom", r.axiom}, {"trials", r.trials}, {"violations", r.violations}};
  if (r.witness) {
    out["witness"] = {{"jet", to_json(r.witness->jet)},
                      {"added", to_json(r.witness->added)},
                      {"rho_after", r.witness->rho_after}};
  }
  return out;
}

nlohmann::json to_json(const AgreementReport& r) {
  nlohmann::json out = {{"left", r.left},         {"right", r.right},
                        {"trials", r.trials},     {"compared", r.compared},
                        {"disagreements", r.disagreements}};
  if (r.witness) out["witness"] = to_json(*r.witness);
  return out;
}

ViolationReport axiom_check(const Subequation& f, Axiom axiom, long trials, const CheckOptions& opts) {
  require(trials >= 1, ErrorKind::invalid_argument, "axiom_check: trials must be >= 1");
  const int n = f.dim();
  JetSampler sampler(n, opts.seed, opts.box);
  ViolationReport report{f.label(), axiom == Axiom::positivity ? "P" : "N", trials, 0, std::nullopt};
  for (long t = 0; t < trials; ++t) {
    const Jet j = sample_member(f, opts.x, sampler, opts.band, opts.max_draws);
    Jet added = Jet::zero(n);
    if (axiom == Axiom::positivity) {
      added.a = sampler.positive_semidefinite();
    } else {
      added.r = -sampler.uniform(0.0, opts.box.r_half);
    }
    const double after = f.rho(opts.x, j + added);
    if (after < -opts.band) {
      if (!report.witness) report.witness = Witness{j, added, after};
      ++report.violations;
    }
  }
  return report;
}

namespace {

ViolationReport sum_check(const Subequation& f, const Subequation& g, const Subequation& target, long trials,
                          const CheckOptions& opts, std::uint64_t seed, std::string axiom) {
  JetSampler sf(f.dim(), seed, opts.box);
  JetSampler sg(f.dim(), seed ^ 0x9e3779b97f4a7c15ULL, opts.box);
  ViolationReport report{target.label(), std::move(axiom), trials, 0, std::nullopt};
  for (long t = 0; t < trials; ++t) {
    const Jet j = sample_member(f, opts.x, sf, opts.band, opts.max_draws);
    const Jet k = sample_member(g, opts.x, sg, opts.band, opts.max_draws);
    const double after = target.rho(opts.x, j + k);
    if (after < -opts.band) {
      if (!report.witness) report.witness = Witness{j, k, after};
      ++report.violations;
    }
  }
  return report;
}

}  // namespace

MonotonicityReport monotonicity_check(const Subequation& f, const Subequation& m, long trials,
                                      const CheckOptions& opts) {
  require(trials >= 1, ErrorKind::invalid_argument, "monotonicity_check: trials must be >= 1");
  require(f.dim() == m.dim(), ErrorKind::dimension_mismatch, "monotonicity_check: dimensions differ");
  require(m.flags().cone, ErrorKind::invalid_argument, "monotonicity_check: M must be cone-flagged");
  MonotonicityReport out;
  out.direct = sum_check(f, m, f, trials, opts, opts.seed, "M:" + m.label());
  const Subequation f_dual = dual(f);
  const Subequation m_dual = dual(m);
  out.dual_form = sum_check(f, f_dual, m_dual, trials, opts, opts.seed + 1, "dual-form:" + f_dual.label());
  return out;
}

AgreementReport membership_agreement(const Subequation& f, const Subequation& g, long trials,
                                     const CheckOptions& opts, JetDistribution dist) {
  require(f.dim() == g.dim(), ErrorKind::dimension_mismatch, "membership_agreement: dimensions differ");
  JetSampler sampler(f.dim(), opts.seed, opts.box);
  AgreementReport report{f.label(), g.label(), trials, 0, 0, std::nullopt};
  for (long t = 0; t < trials; ++t) {
    const Jet j = dist == JetDistribution::full ? sampler.jet() : sampler.hessian_jet();
    const double a = f.rho(opts.x, j);
    const double b = g.rho(opts.x, j);
    if (std::abs(a) <= opts.band || std::abs(b) <= opts.band) continue;
    ++report.compared;
    if ((a > 0) != (b > 0)) {
      if (!report.witness) report.witness = j;
      ++report.disagreements;
    }
  }
  return report;
}

double max_rho_difference(const Subequation& f, const Subequation& g, long trials, const CheckOptions& opts) {
  require(f.dim() == g.dim(), ErrorKind::dimension_mismatch, "max_rho_difference: dimensions differ");
  JetSampler sampler(f.dim(), opts.seed, opts.box);
  double worst = 0.0;
  for (long t = 0; t < trials; ++t) {
    const Jet j = sampler.jet();
    worst = std::max(worst, std::abs(f.rho(opts.x, j) - g.rho(opts.x, j)));
  }
  return worst;
}

bool strict_member(const Subequation& f, const Point& x, const Jet& j, double c, const JetNorm& norm,
                   int sphere_points, double band) {
  require(c >= 0, ErrorKind::invalid_argument, "strict_member: radius must be non-negative");
  norm.validate();
  if (c == 0.0) return member(f, x, j, band).in_set();
  if (f.rho(x, j) <= band) return false;
  const int n = f.dim();
  for (const auto& u : low_discrepancy_sphere(jet_space_dim(n), sphere_points)) {
    const Jet probe = j + jet_from_coordinates(c * u, n, norm);
    if (f.rho(x, probe) < 0.0) return false;
  }
  // steepest-descent probe from a central-difference gradient of rho in jet coordinates
  const Eigen::VectorXd c0 = jet_coordinates(j, norm);
  Eigen::VectorXd g(c0.size());
  for (Eigen::Index i = 0; i < c0.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(c0(i)));
    Eigen::VectorXd up = c0, down = c0;
    up(i) += h;
    down(i) -= h;
    g(i) = (f.rho(x, jet_from_coordinates(up, n, norm)) - f.rho(x, jet_from_coordinates(down, n, norm))) / (2 * h);
  }
  if (g.norm() > 0 && f.rho(x, jet_from_coordinates(c0 - c * g / g.norm(), n, norm)) < 0.0) return false;
  return true;
}

bool asymptotic_interior_member(const Subequation& f, const Jet& j, double t0, double radius, int trials,
                                const AsymptoticOptions& opts) {
  require(f.flags().reduced, ErrorKind::invalid_argument, "asymptotic_interior_member: F must be reduced");
  require(radius > 0 && t0 > 0 && trials >= 0, ErrorKind::invalid_argument,
          "asymptotic_interior_member: need radius > 0, t0 > 0");
  if (f.flags().cone) return f.rho(opts.x, j) > opts.band;

  const int n = f.dim();
  const int d = jet_space_dim(n) - 1;
  Rng rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> ts;
  for (double t = t0; t <= opts.t_max_factor * t0 * (1 + 1e-12); t *= opts.ratio) ts.push_back(t);
  if (ts.back() < opts.t_max_factor * t0) ts.push_back(opts.t_max_factor * t0);

  for (int trial = 0; trial <= trials; ++trial) {
    Jet jp = j;
    jp.r = 0.0;
    if (trial > 0) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
      for (int i = 1; i <= d; ++i) c(i) = normal(rng);
      c *= radius * std::pow(unit(rng), 1.0 / d) / c.norm();
      jp += jet_from_coordinates(c, n);
    }
    for (double t : ts) {
      if (f.rho(opts.x, t * jp) < -opts.band) return false;
    }
  }
  return true;
}

RegistrationReport registration_check(const Subequation& f, long trials, double probe, const CheckOptions& opts) {
  const int n = f.dim();
  JetSampler sampler(n, opts.seed, opts.box);
  RegistrationReport report{f.label(), 0, 0, 0};
  const auto dirs = low_discrepancy_sphere(jet_space_dim(n), 2 * jet_space_dim(n) + 16);

  auto supported = [&](const Jet& b) {
    Jet up = b;
    up.a += (probe / std::sqrt(static_cast<double>(n))) * SymMatrix::Identity(n, n);
    if (f.rho(opts.x, up) > 0) return true;
    for (const auto& u : dirs)
      if (f.rho(opts.x, b + jet_from_coordinates(probe * u, n)) > 0) return true;
    return false;
  };

  for (long t = 0; t < trials; ++t) {
    const Jet a = sampler.jet();
    const Jet b = sampler.jet();
    const double ra = f.rho(opts.x, a);
    const double rb = f.rho(opts.x, b);
    if (f.flags().cone) {
      for (double s : {0.5, 2.0, 10.0}) {
        const double rs = f.rho(opts.x, s * a);
        if (std::abs(ra) > opts.band && std::abs(rs) > opts.band && (ra > 0) != (rs > 0))
          ++report.cone_sign_failures;
      }
    }
    if ((ra >= 0) == (rb >= 0)) continue;
    // bisect the segment to a point on the boundary, keeping the member end
    Jet in = ra >= 0 ? a : b;
    Jet out = ra >= 0 ? b : a;
    for (int it = 0; it < 60; ++it) {
      const Jet mid = 0.5 * (in + out);
      if (f.rho(opts.x, mid) >= 0) in = mid; else out = mid;
    }
    ++report.boundary_points;
    if (!supported(in)) ++report.unsupported;
  }
  return report;
}

}  // namespace subeq
