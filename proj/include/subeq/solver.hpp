#pragma once

// Perron-type Dirichlet solver on masked rectangular grids (dimensions 1 to 3).

#include <array>
#include <optional>
#include <vector>

#include <json.hpp>

#include "subeq/boundary.hpp"
#include "subeq/catalog.hpp"

namespace subeq {

using Offset = std::array<int, 3>;

struct Grid {
  int dim = 2;
  Vec lo;
  double h = 0.0;
  std::array<int, 3> count{1, 1, 1};

  /// Lattice lo + h*i covering [lo, hi]; (hi - lo)/h must be an integer per axis (to 1e-9).
  static Grid box(const Vec& lo, const Vec& hi, double h);

  long size() const { return static_cast<long>(count[0]) * count[1] * count[2]; }
  std::array<int, 3> coords(long idx) const;
  long index(const std::array<int, 3>& c) const;
  Point point(long idx) const;
  /// Index of idx + offset, or -1 outside the lattice.
  long neighbor(long idx, const Offset& off) const;
};

enum class StencilKind { standard, wide };
enum class NodeKind : unsigned char { exterior, boundary, interior };

/// Second-difference directions. standard: axes and e_i +- e_j; wide (2D only): 8 lines, 16 points.
struct Stencil {
  StencilKind kind = StencilKind::standard;
  int dim = 2;
  std::vector<Offset> directions;
  SymMatrix fit;  // wide: least-squares map from directional differences to (a11, a22, a12)

  static Stencil make(StencilKind kind, int dim);
};

/// r = u(node), p by centered differences, A from directional second differences.
Jet discrete_jet(const std::vector<double>& u, const Grid& g, long node, const Stencil& s);

struct SolverParams {
  long max_sweeps = 100000;
  double sweep_tol = 0.0;      // 0: 1e-10 * (range of the boundary data); bounds the update and
                               // the estimated distance update * q / (1 - q) to the fixed point
  double bisection_tol = 0.0;  // 0: 1e-3 * sweep_tol
  double relaxation = 0.0;     // 0: 2 / (1 + 2 sin(pi h / L)); 1: plain Gauss-Seidel
  StencilKind stencil = StencilKind::standard;
};

class GridProblem {
 public:
  /// Without a domain the whole box is the closed domain and its edge nodes carry the data.
  GridProblem(Grid grid, Subequation f, ScalarFieldFn phi, std::optional<DomainSpec> domain = std::nullopt,
              SolverParams params = {});

  const Grid& grid() const { return grid_; }
  const Subequation& subequation() const { return f_; }
  const SolverParams& params() const { return params_; }
  const Stencil& stencil() const { return stencil_; }
  const std::vector<NodeKind>& kinds() const { return kinds_; }
  const std::vector<long>& interior() const { return interior_; }
  const ScalarFieldFn& boundary() const { return phi_; }
  const std::vector<double>& boundary_values() const { return bc_; }  // NaN off the boundary layer
  double data_range() const;

  /// Same geometry and data, different subequation or boundary data.
  GridProblem with_subequation(Subequation f) const;
  GridProblem with_boundary(ScalarFieldFn phi) const;

 private:
  Grid grid_;
  Subequation f_;
  ScalarFieldFn phi_;
  std::optional<DomainSpec> domain_;
  SolverParams params_;
  Stencil stencil_;
  std::vector<NodeKind> kinds_;
  std::vector<long> interior_;
  std::vector<double> bc_;
};

struct SolveReport {
  std::vector<double> u;  // all lattice nodes, NaN on exterior nodes
  long sweeps = 0;
  double final_update = 0.0;
  double residual = 0.0;     // max |rho| of discrete jets (obstacle: off the contact set)
  double subharmonic_defect = 0.0;  // max(0, -rho) over interior nodes
  double relaxation = 1.0;
  double sweep_tol = 0.0;
  long contact_nodes = 0;
  bool converged = false;
};

nlohmann::json to_json(const SolveReport& r, bool include_field = false);

SolveReport perron_solve(const GridProblem& p);

struct BracketResult {
  SolveReport upper;        // U = perron(F, phi)
  SolveReport lower_dual;   // perron(dual F, -phi)
  std::vector<double> u_tilde;  // -lower_dual.u
  double max_gap = 0.0;     // max |U - U~|
  double worst_order = 0.0; // max(U~ - U)
};

BracketResult dual_bracket_solve(const GridProblem& p);

SolveReport obstacle_solve(const GridProblem& p, ScalarFieldFn g);

enum class ComparisonStatus { pass, fail, precondition_failed };
const char* to_string(ComparisonStatus s);

struct ComparisonOptions {
  double membership_tol = 1e-6;  // discrete jets count as members when rho >= -tol
  double zmp_tol = 1e-9;
};

struct ComparisonResult {
  ComparisonStatus status = ComparisonStatus::pass;
  bool hypothesis = false;  // u + v <= 0 on the boundary of K
  long witness = -1;
  double boundary_max = 0.0;
  double interior_max = 0.0;
  std::string detail;
};

nlohmann::json to_json(const ComparisonResult& r, const Grid& g);

/// Discrete zero maximum principle for u + v on K, with u F-subharmonic and v dual-F-subharmonic.
/// Boundary of K: nodes of K whose stencil leaves K.
ComparisonResult comparison_check(const Grid& grid, const std::vector<double>& u, const std::vector<double>& v,
                                  const Subequation& f, const std::vector<bool>& k_mask,
                                  const ComparisonOptions& opts = {}, StencilKind stencil = StencilKind::standard);

/// Nodes with rho_dom < 0 (all nodes if no domain).
std::vector<bool> domain_mask(const Grid& g, const std::optional<DomainSpec>& domain);

/// Largest r with jet(r) in F along r -> jet0 + r * dir; Illinois steps with bisection fallback.
double largest_member(const Subequation& f, const Point& x, const Jet& jet0, const Jet& dir, double lo, double hi,
                      double tol);

}  // namespace subeq
