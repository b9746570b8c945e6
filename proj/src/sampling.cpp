#include "subeq/sampling.hpp"

#include <cmath>

namespace subeq {

void SamplingBox::validate() const {
  require(r_half > 0 && p_radius > 0 && eig_half > 0, ErrorKind::invalid_argument,
          "SamplingBox: extents must be positive");
}

SymMatrix random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SymMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<SymMatrix> qr(g);
  SymMatrix q = qr.householderQ() * SymMatrix::Identity(n, n);
  const SymMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

JetSampler::JetSampler(int n, std::uint64_t seed, SamplingBox box) : n_(n), box_(box), rng_(seed) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::invalid_argument, "JetSampler: dimension out of range");
  box_.validate();
}

double JetSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Vec JetSampler::unit_vector() {
  Vec v(n_);
  double norm = 0.0;
  do {
    for (int i = 0; i < n_; ++i) v(i) = normal_(rng_);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Vec JetSampler::ball_vector(double radius) {
  return unit_vector() * (radius * std::pow(uniform(0.0, 1.0), 1.0 / n_));
}

SymMatrix JetSampler::symmetric() {
  const SymMatrix q = random_orthogonal(n_, rng_);
  Vec mu(n_);
  for (int i = 0; i < n_; ++i) mu(i) = uniform(-box_.eig_half, box_.eig_half);
  SymMatrix a = q * mu.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

SymMatrix JetSampler::positive_semidefinite() {
  if (uniform(0.0, 3.0) < 1.0) {
    const Vec v = unit_vector();
    return uniform(0.0, box_.eig_half) * (v * v.transpose());
  }
  const SymMatrix q = random_orthogonal(n_, rng_);
  Vec mu(n_);
  for (int i = 0; i < n_; ++i) mu(i) = uniform(0.0, box_.eig_half);
  SymMatrix a = q * mu.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

Jet JetSampler::jet() {
  const double r = uniform(-box_.r_half, box_.r_half);
  Vec p = ball_vector(box_.p_radius);
  return Jet(r, std::move(p), symmetric());
}

Jet sample_member(const Subequation& f, const Point& x, JetSampler& sampler, double min_margin,
                  long max_draws) {
  for (long draw = 0; draw < max_draws; ++draw) {
    Jet j = sampler.jet();
    if (f.rho(x, j) > min_margin) return j;
  }
  throw Error(ErrorKind::sampler_exhausted,
              "no member of '" + f.label() + "' found in " + std::to_string(max_draws) + " draws");
}

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(long index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

std::vector<Eigen::VectorXd> low_discrepancy_sphere(int dim, int count) {
  require(dim >= 1 && count >= 0, ErrorKind::invalid_argument, "low_discrepancy_sphere: bad arguments");
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int i = 0; i < dim && static_cast<int>(out.size()) < count; ++i) {
    for (double s : {1.0, -1.0}) {
      if (static_cast<int>(out.size()) == count) break;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
      e(i) = s;
      out.push_back(e);
    }
  }
  const std::vector<int> primes = first_primes(dim);
  for (long index = 1; static_cast<int>(out.size()) < count; ++index) {
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v(d) = 2.0 * radical_inverse(index, primes[d]) - 1.0;
    const double norm = v.norm();
    if (norm < 1e-9) continue;
    out.push_back(v / norm);
  }
  return out;
}

std::vector<Vec> direction_set(int n, int count) {
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back(Vec::Unit(n, i));
  if (n == 1) return dirs;
  // skip the signed axes at the head of the sequence; they are already present
  for (const auto& v : low_discrepancy_sphere(n, 2 * n + count)) {
    if (static_cast<int>(dirs.size()) == n + count) break;
    if ((v.array().abs() > 1 - 1e-15).any()) continue;
    dirs.push_back(v);
  }
  return dirs;
}

}  // namespace subeq
