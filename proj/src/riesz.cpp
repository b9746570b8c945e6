#include "subeq/riesz.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "subeq/catalog.hpp"

namespace subeq {

int configured_threads() {
  const char* env = std::getenv("SUBEQ_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return std::clamp(v, 1, 256);
}

nlohmann::json to_json(const RieszResult& r) {
  return {{"p_M", r.p_m},
          {"bracket", {r.lower, r.upper}},
          {"directions_tested", r.directions_tested},
          {"spread", r.spread},
          {"unbounded", r.unbounded}};
}

nlohmann::json to_json(const InclusionReport& r) {
  nlohmann::json out = {{"cone", r.cone},
                        {"p", r.p},
                        {"p_M", r.p_m},
                        {"trials", r.trials},
                        {"violations", r.violations},
                        {"expected_inclusion", r.expected_inclusion},
                        {"agrees", r.agrees()}};
  if (r.witness) out["witness"] = to_json(*r.witness);
  return out;
}

namespace {

Jet riesz_jet(int n, double p, const Vec& e) {
  SymMatrix a = SymMatrix::Identity(n, n) - p * (e * e.transpose());
  return Jet::hessian_only(a);
}

struct Bracket {
  double lo;
  double hi;
  bool unbounded;
};

Bracket bisect_direction(const Subequation& m, const Vec& e, const RieszOptions& opts) {
  const int n = m.dim();
  const double top = n + 1.0;
  auto inside = [&](double p) { return m.rho(riesz_jet(n, p, e)) >= 0.0; };
  if (inside(top)) return {top, top, true};
  if (!inside(0.0)) return {0.0, 0.0, false};
  double lo = 0.0, hi = top;
  for (int depth = 0; depth < opts.max_depth && hi - lo > opts.tol; ++depth) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) lo = mid; else hi = mid;
  }
  return {lo, hi, false};
}

}  // namespace

RieszResult riesz_characteristic(const Subequation& m, const RieszOptions& opts) {
  require(m.flags().cone, ErrorKind::invalid_argument, "riesz_characteristic: M must be cone-flagged");
  require(m.flags().pure_second_order, ErrorKind::invalid_argument,
          "riesz_characteristic: M must be pure second order");
  require(opts.tol > 0 && opts.directions >= 0, ErrorKind::invalid_argument, "riesz_characteristic: bad options");
  const std::vector<Vec> dirs = direction_set(m.dim(), opts.directions);
  std::vector<Bracket> brackets(dirs.size());

  const int threads = std::max(1, std::min<int>(opts.threads > 0 ? opts.threads : configured_threads(),
                                                 static_cast<int>(dirs.size())));
  auto work = [&](int id) {
    for (std::size_t i = id; i < dirs.size(); i += threads) brackets[i] = bisect_direction(m, dirs[i], opts);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  RieszResult out;
  out.directions_tested = static_cast<int>(dirs.size());
  out.unbounded = std::all_of(brackets.begin(), brackets.end(), [](const Bracket& b) { return b.unbounded; });
  double lo_min = brackets.front().lo, lo_max = lo_min, hi_min = brackets.front().hi;
  for (const auto& b : brackets) {
    lo_min = std::min(lo_min, b.lo);
    lo_max = std::max(lo_max, b.lo);
    hi_min = std::min(hi_min, b.hi);
  }
  out.lower = lo_min;
  out.upper = hi_min;
  out.p_m = 0.5 * (lo_min + hi_min);
  out.spread = lo_max - lo_min;
  return out;
}

InclusionReport pcone_inclusion_check(const Subequation& m, double p, long trials, const CheckOptions& opts,
                                      const RieszOptions& ropts) {
  const int n = m.dim();
  const Subequation pcone = make_pcone(p, n);
  const RieszResult riesz = riesz_characteristic(m, ropts);
  InclusionReport report;
  report.cone = m.label();
  report.p = p;
  report.p_m = riesz.p_m;
  report.trials = trials;
  report.expected_inclusion = p <= riesz.p_m + ropts.tol;

  auto probe = [&](const Jet& j) {
    if (m.rho(j) < -opts.band) {
      if (!report.witness) report.witness = j;
      ++report.violations;
    }
  };
  for (const Vec& e : direction_set(n, 16)) {
    for (double q : {p * (1.0 - 1e-8), p - 0.05, p - 0.1}) {
      if (q <= 0.0 || pcone.rho(riesz_jet(n, q, e)) <= opts.band) continue;
      probe(riesz_jet(n, q, e));
    }
  }
  JetSampler sampler(n, opts.seed, opts.box);
  for (long t = 0; t < trials; ++t) {
    Jet j = Jet::zero(n);
    long draws = 0;
    do {
      if (++draws > opts.max_draws) {
        throw Error(ErrorKind::sampler_exhausted, "pcone_inclusion_check: no members of " + pcone.label());
      }
      j.a = sampler.symmetric();
    } while (pcone.rho(j) <= opts.band);
    probe(j);
  }
  return report;
}

}  // namespace subeq
