#pragma once

#include <json.hpp>

#include "subeq/checks.hpp"

namespace subeq {

struct RieszResult {
  double p_m = 0.0;
  int directions_tested = 0;
  double lower = 0.0;  // bracket from the terminating bisection
  double upper = 0.0;
  double spread = 0.0;  // max - min of the per-direction thresholds
  bool unbounded = false;  // I - (n+1) P_e in M for every tested direction
};

nlohmann::json to_json(const RieszResult& r);

struct RieszOptions {
  double tol = 1e-6;
  int directions = 64;  // low-discrepancy directions, coordinate axes added on top
  int max_depth = 60;
  int threads = 0;      // 0: SUBEQ_THREADS or 1
};

/// p_M = sup{p : I - p P_e in M for all unit e}, by per-direction bisection over [0, n + 1].
RieszResult riesz_characteristic(const Subequation& m, const RieszOptions& opts = {});

struct InclusionReport {
  std::string cone;
  double p = 0.0;
  double p_m = 0.0;
  long trials = 0;
  long violations = 0;       // members of P(p) outside M
  std::optional<Jet> witness;
  bool expected_inclusion = false;  // p <= p_M
  bool agrees() const { return expected_inclusion == (violations == 0); }
};

nlohmann::json to_json(const InclusionReport& r);

/// Samples members of P(p) (random draws plus the extremal family I - q P_e) and checks
/// M-membership; `agrees` compares the outcome with the sign of p - p_M.
InclusionReport pcone_inclusion_check(const Subequation& m, double p, long trials, const CheckOptions& opts = {},
                                      const RieszOptions& ropts = {});

/// Thread count from SUBEQ_THREADS (default 1).
int configured_threads();

}  // namespace subeq
