#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subeq/sampling.hpp"

namespace subeq {

enum class Axiom { positivity, negativity };

struct Witness {
  Jet jet;                     // the sampled member
  Jet added;                   // the perturbation that left the set
  double rho_after = 0.0;
};

struct ViolationReport {
  std::string label;
  std::string axiom;  // "P", "N", "M:<cone label>", ...
  long trials = 0;
  long violations = 0;
  std::optional<Witness> witness;

  bool ok() const { return violations == 0; }
};

nlohmann::json to_json(const Jet& j);
nlohmann::json to_json(const ViolationReport& r);

struct CheckOptions {
  std::uint64_t seed = 1;
  SamplingBox box{};
  double band = kBoundaryBand;
  long max_draws = kDefaultMaxDraws;
  Point x{};  // evaluation point for x-dependent subequations
};

/// Samples J in F (rho > band) and asserts J + (0,0,P) in F for random P >= 0 (axiom P),
/// resp. J + (-s,0,0) in F for s >= 0 (axiom N).
ViolationReport axiom_check(const Subequation& f, Axiom axiom, long trials, const CheckOptions& opts = {});

struct MonotonicityReport {
  ViolationReport direct;     // F + M in F
  ViolationReport dual_form;  // F + dual(F) in dual(M)
  bool agreement() const { return direct.ok() == dual_form.ok(); }
};

/// Sampled test of F + M in F, together with its dual reformulation F + F~ in M~.
MonotonicityReport monotonicity_check(const Subequation& f, const Subequation& m, long trials,
                                      const CheckOptions& opts = {});

struct AgreementReport {
  std::string left;
  std::string right;
  long trials = 0;
  long compared = 0;       // samples outside the boundary band of both sets
  long disagreements = 0;
  std::optional<Jet> witness;
  bool ok() const { return disagreements == 0; }
};

nlohmann::json to_json(const AgreementReport& r);

enum class JetDistribution { full, hessian_only };

/// Compares membership of F and G on random jets from the sampling box, skipping jets that
/// fall into the boundary band of either set.
AgreementReport membership_agreement(const Subequation& f, const Subequation& g, long trials,
                                     const CheckOptions& opts = {},
                                     JetDistribution dist = JetDistribution::full);

/// Maximum of |rho_F - rho_G| over random jets.
double max_rho_difference(const Subequation& f, const Subequation& g, long trials, const CheckOptions& opts = {});

inline constexpr int kStrictSpherePoints = 64;

/// Sampled test that the jet-norm ball of radius c about J lies in F: the center, K sphere points
/// and the steepest-descent direction of rho. Exact for half-spaces, may over-report elsewhere.
bool strict_member(const Subequation& f, const Point& x, const Jet& j, double c, const JetNorm& norm = {},
                   int sphere_points = kStrictSpherePoints, double band = kBoundaryBand);

struct AsymptoticOptions {
  double t_max_factor = 1e3;  // t ranges over [t0, t_max_factor * t0]
  double ratio = 2.0;
  std::uint64_t seed = 7;
  double band = kBoundaryBand;
  Point x{};
};

/// Sampled test of t * N(J) in F for all t >= t0, N a ball of the given radius in (p, A).
bool asymptotic_interior_member(const Subequation& f, const Jet& j, double t0, double radius, int trials,
                                const AsymptoticOptions& opts = {});

struct RegistrationReport {
  std::string label;
  long boundary_points = 0;
  long unsupported = 0;  // boundary jets with no interior jet within the probe radius
  long cone_sign_failures = 0;
  bool ok() const { return unsupported == 0 && cone_sign_failures == 0; }
};

/// Spot-check of the Int F = {rho > 0} authoring contract: jets with rho near zero must have
/// strictly interior jets within `probe` (found along random directions and t -> t*J for cones).
RegistrationReport registration_check(const Subequation& f, long trials, double probe = 1e-3,
                                      const CheckOptions& opts = {});

}  // namespace subeq
