#include "subeq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subeq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNoiseFloor = 1e-2;  // updates this far below sweep_tol are bisection noise

Offset axis(int i) {
  Offset o{0, 0, 0};
  o[i] = 1;
  return o;
}

Offset negate(const Offset& o) { return {-o[0], -o[1], -o[2]}; }

}  // namespace

Grid Grid::box(const Vec& lo, const Vec& hi, double h) {
  require(lo.size() == hi.size() && lo.size() >= 1 && lo.size() <= 3, ErrorKind::invalid_argument,
          "Grid: box must have dimension 1, 2 or 3");
  require(h > 0 && std::isfinite(h), ErrorKind::invalid_argument, "Grid: spacing must be positive");
  Grid g;
  g.dim = static_cast<int>(lo.size());
  g.lo = lo;
  g.h = h;
  for (int i = 0; i < g.dim; ++i) {
    const double cells = (hi(i) - lo(i)) / h;
    const double rounded = std::round(cells);
    require(rounded >= 2 && std::abs(cells - rounded) <= 1e-9 * std::max(1.0, cells), ErrorKind::invalid_argument,
            "Grid: box extent must be an integer multiple (>= 2) of h");
    g.count[i] = static_cast<int>(rounded) + 1;
  }
  return g;
}

std::array<int, 3> Grid::coords(long idx) const {
  std::array<int, 3> c{0, 0, 0};
  c[0] = static_cast<int>(idx % count[0]);
  idx /= count[0];
  c[1] = static_cast<int>(idx % count[1]);
  c[2] = static_cast<int>(idx / count[1]);
  return c;
}

long Grid::index(const std::array<int, 3>& c) const {
  return c[0] + static_cast<long>(count[0]) * (c[1] + static_cast<long>(count[1]) * c[2]);
}

Point Grid::point(long idx) const {
  const auto c = coords(idx);
  Point x(dim);
  for (int i = 0; i < dim; ++i) x(i) = lo(i) + h * c[i];
  return x;
}

long Grid::neighbor(long idx, const Offset& off) const {
  auto c = coords(idx);
  for (int i = 0; i < 3; ++i) {
    c[i] += off[i];
    if (c[i] < 0 || c[i] >= count[i]) return -1;
  }
  return index(c);
}

Stencil Stencil::make(StencilKind kind, int dim) {
  require(dim >= 1 && dim <= 3, ErrorKind::invalid_argument, "Stencil: dimension must be 1, 2 or 3");
  Stencil s;
  s.kind = kind;
  s.dim = dim;
  for (int i = 0; i < dim; ++i) s.directions.push_back(axis(i));
  if (kind == StencilKind::standard) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        Offset plus{0, 0, 0}, minus{0, 0, 0};
        plus[i] = 1, plus[j] = 1;
        minus[i] = 1, minus[j] = -1;
        s.directions.push_back(plus);
        s.directions.push_back(minus);
      }
    return s;
  }
  require(dim == 2, ErrorKind::invalid_argument, "Stencil: the wide stencil is two-dimensional");
  s.directions = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}, {2, 1, 0}, {1, 2, 0}, {2, -1, 0}, {1, -2, 0}};
  Eigen::MatrixXd m(s.directions.size(), 3);
  for (std::size_t k = 0; k < s.directions.size(); ++k) {
    const double a = s.directions[k][0], b = s.directions[k][1];
    m.row(k) << a * a, b * b, 2 * a * b;
  }
  const Eigen::MatrixXd fit = (m.transpose() * m).ldlt().solve(m.transpose());
  s.fit = fit;
  return s;
}

namespace {

using NeighborPairs = std::vector<std::pair<long, long>>;

struct Assembler {
  const Grid& g;
  const Stencil& s;

  NeighborPairs pairs(long node) const {
    NeighborPairs out;
    for (const auto& d : s.directions) {
      const long a = g.neighbor(node, d);
      const long b = g.neighbor(node, negate(d));
      if (a < 0 || b < 0) throw Error(ErrorKind::invalid_argument, "discrete_jet: stencil leaves the grid");
      out.emplace_back(a, b);
    }
    return out;
  }

  // Jet at a node with the center value replaced by `center`.
  Jet operator()(const std::vector<double>& u, const NeighborPairs& nb, double center) const {
    const int n = g.dim;
    Jet j = Jet::zero(n);
    j.r = center;
    const double h2 = g.h * g.h;
    std::array<double, 16> d{};
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double ua = u[nb[k].first], ub = u[nb[k].second];
      d[k] = (ua + ub - 2.0 * center) / h2;
      if (k < static_cast<std::size_t>(n)) j.p(k) = (ua - ub) / (2.0 * g.h);
    }
    if (s.kind == StencilKind::standard) {
      std::size_t k = n;
      for (int i = 0; i < n; ++i) j.a(i, i) = d[i];
      for (int i = 0; i < n; ++i)
        for (int m = i + 1; m < n; ++m) {
          const double v = (d[k] - d[k + 1]) / 4.0;
          j.a(i, m) = v;
          j.a(m, i) = v;
          k += 2;
        }
    } else {
      Eigen::Vector3d coef = Eigen::Vector3d::Zero();
      for (std::size_t k = 0; k < nb.size(); ++k) coef += s.fit.col(k) * d[k];
      j.a(0, 0) = coef(0);
      j.a(1, 1) = coef(1);
      j.a(0, 1) = coef(2);
      j.a(1, 0) = coef(2);
    }
    return j;
  }

  Jet operator()(const std::vector<double>& u, long node, double center) const {
    return (*this)(u, pairs(node), center);
  }
};

}  // namespace

Jet discrete_jet(const std::vector<double>& u, const Grid& g, long node, const Stencil& s) {
  require(static_cast<long>(u.size()) == g.size(), ErrorKind::dimension_mismatch, "discrete_jet: field size mismatch");
  require(s.dim == g.dim, ErrorKind::dimension_mismatch, "discrete_jet: stencil dimension mismatch");
  const Assembler assemble{g, s};
  const Jet j = assemble(u, node, u[node]);
  if (!std::isfinite(jet_coordinates(j).sum())) {
    throw Error(ErrorKind::invalid_argument, "discrete_jet: stencil leaves the mask");
  }
  return j;
}

std::vector<bool> domain_mask(const Grid& g, const std::optional<DomainSpec>& domain) {
  std::vector<bool> inside(g.size(), true);
  if (domain) {
    require(domain->n == g.dim, ErrorKind::dimension_mismatch, "domain_mask: domain dimension mismatch");
    for (long i = 0; i < g.size(); ++i) inside[i] = domain->value(g.point(i)) < 0;
  }
  return inside;
}

GridProblem::GridProblem(Grid grid, Subequation f, ScalarFieldFn phi, std::optional<DomainSpec> domain,
                         SolverParams params)
    : grid_(std::move(grid)),
      f_(std::move(f)),
      phi_(std::move(phi)),
      domain_(std::move(domain)),
      params_(params),
      stencil_(Stencil::make(params.stencil, grid_.dim)) {
  require(f_.dim() == grid_.dim, ErrorKind::dimension_mismatch, "GridProblem: subequation dimension mismatch");
  require(static_cast<bool>(phi_), ErrorKind::invalid_argument, "GridProblem: boundary data missing");
  require(params_.max_sweeps >= 1 && params_.sweep_tol >= 0 && params_.bisection_tol >= 0 &&
              params_.relaxation >= 0 && params_.relaxation < 2,
          ErrorKind::invalid_argument, "GridProblem: bad solver parameters");
  const long size = grid_.size();
  const std::vector<bool> inside = domain_mask(grid_, domain_);
  kinds_.assign(size, NodeKind::exterior);
  for (long i = 0; i < size; ++i) {
    if (!inside[i]) continue;
    bool full = true;
    for (const auto& d : stencil_.directions) {
      if (grid_.neighbor(i, d) < 0 || grid_.neighbor(i, negate(d)) < 0) {
        full = false;
        break;
      }
    }
    if (full) {
      kinds_[i] = NodeKind::interior;
      interior_.push_back(i);
    }
  }
  require(!interior_.empty(), ErrorKind::invalid_argument, "GridProblem: no interior nodes");
  for (long i : interior_) {
    for (const auto& d : stencil_.directions) {
      for (long nb : {grid_.neighbor(i, d), grid_.neighbor(i, negate(d))}) {
        if (kinds_[nb] == NodeKind::exterior) kinds_[nb] = NodeKind::boundary;
      }
    }
  }
  bc_.assign(size, kNaN);
  for (long i = 0; i < size; ++i) {
    if (kinds_[i] != NodeKind::boundary) continue;
    bc_[i] = phi_(grid_.point(i));
    if (!std::isfinite(bc_[i])) throw Error(ErrorKind::invalid_argument, "GridProblem: boundary data is not finite");
  }
}

double GridProblem::data_range() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : bc_) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

GridProblem GridProblem::with_subequation(Subequation f) const {
  GridProblem out = *this;
  require(f.dim() == grid_.dim, ErrorKind::dimension_mismatch, "GridProblem: subequation dimension mismatch");
  out.f_ = std::move(f);
  return out;
}

GridProblem GridProblem::with_boundary(ScalarFieldFn phi) const {
  return GridProblem(grid_, f_, std::move(phi), domain_, params_);
}

double largest_member(const Subequation& f, const Point& x, const Jet& jet0, const Jet& dir, double lo, double hi,
                      double tol) {
  auto value = [&](double r) {
    Jet j = jet0;
    j.r += r * dir.r;
    j.a += r * dir.a;
    const double v = f.rho(x, j);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  double a = lo, b = hi;
  double fa = value(a), fb = value(b);
  const double step = hi - lo;
  for (int attempt = 0; fa < 0 || fb >= 0; ++attempt) {
    if (attempt == 2) {
      throw Error(ErrorKind::bracket_failure, "perron: no sign change of rho along r; the fiber is empty or full");
    }
    const double pad = step * std::pow(10.0, attempt + 1);
    if (fa < 0) {
      a = lo - pad;
      fa = value(a);
    }
    if (fb >= 0) {
      b = hi + pad;
      fb = value(b);
    }
  }
  int side = 0;
  double width = b - a;
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    double c = (fa * b - fb * a) / (fa - fb);
    if (it % 3 == 2 && b - a > 0.5 * width) c = 0.5 * (a + b);
    if (it % 3 == 2) width = b - a;
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    if (!(c > a && c < b)) break;
    const double fc = value(c);
    if (fc >= 0) {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    } else {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
    // close the bracket around a good estimate
    const double d = fc >= 0 ? c + 0.5 * tol : c - 0.5 * tol;
    if (b - a > tol && d > a && d < b) {
      const double fd = value(d);
      if (fd >= 0) {
        a = d;
        fa = fd;
      } else {
        b = d;
        fb = fd;
      }
    }
  }
  return a;
}

namespace {

enum class Mode { plain, obstacle };

SolveReport run_perron(const GridProblem& p, Mode mode, const std::vector<double>& obstacle) {
  const Grid& g = p.grid();
  const Subequation& f = p.subequation();
  const SolverParams& params = p.params();
  const Assembler assemble{g, p.stencil()};
  const std::vector<double>& bc = p.boundary_values();
  const std::vector<long>& interior = p.interior();

  double bc_min = std::numeric_limits<double>::infinity(), bc_max = -bc_min;
  for (double v : bc) {
    if (std::isnan(v)) continue;
    bc_min = std::min(bc_min, v);
    bc_max = std::max(bc_max, v);
  }
  const double range = bc_max - bc_min;
  const double tol = params.sweep_tol > 0 ? params.sweep_tol
                                          : 1e-10 * (range > 0 ? range : std::max(1.0, std::abs(bc_max)));
  const double root_tol = params.bisection_tol > 0 ? params.bisection_tol : 1e-3 * tol;

  double extent = 0.0;
  for (int i = 0; i < g.dim; ++i) extent = std::max(extent, g.h * (g.count[i] - 1));
  double omega = params.relaxation > 0 ? params.relaxation : 2.0 / (1.0 + 2.0 * std::sin(M_PI * g.h / extent));

  SolveReport rep;
  rep.sweep_tol = tol;
  std::vector<double> u(g.size(), kNaN);
  for (long i = 0; i < g.size(); ++i) {
    if (p.kinds()[i] == NodeKind::boundary) u[i] = bc[i];
  }
  for (long i : interior) {
    u[i] = bc_min;
    if (mode == Mode::obstacle) u[i] = std::min(u[i], obstacle[i]);
  }

  // Jet along r: the center value enters linearly.
  std::vector<double> probe(g.size(), 0.0);
  const long mid = interior.front();
  probe[mid] = 1.0;
  const Jet unit = assemble(probe, mid, 1.0);

  std::vector<Point> points(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) points[k] = g.point(interior[k]);
  const bool need_x = !f.flags().constant_coefficient;
  const Point none;

  std::vector<NeighborPairs> nbrs(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) nbrs[k] = assemble.pairs(interior[k]);

  double best = std::numeric_limits<double>::infinity();
  long since_best = 0;
  double history[2] = {0.0, 0.0};  // updates of the previous two sweeps
  std::vector<double> snapshot = u;
  for (long sweep = 1; sweep <= params.max_sweeps; ++sweep) {
    double max_update = 0.0;
    const bool forward = sweep % 2 == 1;
    for (std::size_t q = 0; q < interior.size(); ++q) {
      const std::size_t k = forward ? q : interior.size() - 1 - q;
      const long node = interior[k];
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& [a, b] : nbrs[k]) {
        lo = std::min({lo, u[a], u[b]});
        hi = std::max({hi, u[a], u[b]});
      }
      const Jet jet0 = assemble(u, nbrs[k], 0.0);
      double target = largest_member(f, need_x ? points[k] : none, jet0, unit, lo - 10.0, hi + 10.0, root_tol);
      double next = u[node] + omega * (target - u[node]);
      if (mode == Mode::obstacle) next = std::min(next, obstacle[node]);
      max_update = std::max(max_update, std::abs(next - u[node]));
      u[node] = next;
    }
    rep.sweeps = sweep;
    rep.final_update = max_update;
    if (!std::isfinite(max_update)) {
      throw Error(ErrorKind::non_convergence, "perron: iteration produced non-finite values");
    }
    // stop on the estimated distance to the fixed point, update * q / (1 - q)
    const double q = history[0] > 0 ? std::sqrt(max_update / history[0]) : 0.0;
    history[0] = history[1];
    history[1] = max_update;
    if (max_update <= kNoiseFloor * tol || (max_update <= tol && sweep > 2 && q < 1 && max_update * q <= tol * (1 - q))) {
      rep.converged = true;
      break;
    }
    if (max_update < best) {
      best = max_update;
      since_best = 0;
      if (omega > 1.0) snapshot = u;
    } else if (omega > 1.0 && (max_update > 10.0 * best || ++since_best > 50)) {
      // over-relaxation is not contracting: back off to the best iterate
      u = snapshot;
      omega = 1.0 + 0.5 * (omega - 1.0);
      since_best = 0;
    }
  }
  rep.relaxation = omega;

  for (std::size_t k = 0; k < interior.size(); ++k) {
    const long node = interior[k];
    const double rho = f.rho(need_x ? points[k] : none, assemble(u, nbrs[k], u[node]));
    const bool contact = mode == Mode::obstacle && u[node] >= obstacle[node] - tol;
    if (contact) ++rep.contact_nodes;
    rep.subharmonic_defect = std::max(rep.subharmonic_defect, std::max(0.0, -rho));
    rep.residual = std::max(rep.residual, contact ? std::max(0.0, -rho) : std::abs(rho));
  }
  rep.u = std::move(u);
  return rep;
}

}  // namespace

SolveReport perron_solve(const GridProblem& p) { return run_perron(p, Mode::plain, {}); }

BracketResult dual_bracket_solve(const GridProblem& p) {
  BracketResult out;
  out.upper = perron_solve(p);
  const ScalarFieldFn phi = p.boundary();
  const GridProblem dual_problem =
      p.with_subequation(dual(p.subequation())).with_boundary([phi](const Point& x) { return -phi(x); });
  out.lower_dual = perron_solve(dual_problem);
  out.u_tilde.resize(out.upper.u.size());
  for (std::size_t i = 0; i < out.u_tilde.size(); ++i) {
    out.u_tilde[i] = -out.lower_dual.u[i];
    if (std::isnan(out.u_tilde[i]) || std::isnan(out.upper.u[i])) continue;
    out.max_gap = std::max(out.max_gap, std::abs(out.upper.u[i] - out.u_tilde[i]));
    out.worst_order = std::max(out.worst_order, out.u_tilde[i] - out.upper.u[i]);
  }
  return out;
}

SolveReport obstacle_solve(const GridProblem& p, ScalarFieldFn g) {
  require(static_cast<bool>(g), ErrorKind::invalid_argument, "obstacle_solve: obstacle missing");
  const Grid& grid = p.grid();
  std::vector<double> obstacle(grid.size(), kNaN);
  for (long i = 0; i < grid.size(); ++i) {
    const NodeKind k = p.kinds()[i];
    if (k == NodeKind::exterior) continue;
    obstacle[i] = g(grid.point(i));
    if (k == NodeKind::boundary && p.boundary_values()[i] > obstacle[i]) {
      throw Error(ErrorKind::invalid_argument, "obstacle_solve: boundary data exceeds the obstacle");
    }
  }
  return run_perron(p, Mode::obstacle, obstacle);
}

nlohmann::json to_json(const SolveReport& r, bool include_field) {
  nlohmann::json out = {{"converged", r.converged},
                        {"sweeps", r.sweeps},
                        {"final_update", r.final_update},
                        {"sweep_tol", r.sweep_tol},
                        {"residual", r.residual},
                        {"subharmonic_defect", r.subharmonic_defect},
                        {"relaxation", r.relaxation},
                        {"contact_nodes", r.contact_nodes}};
  if (include_field) {
    nlohmann::json u = nlohmann::json::array();
    for (double v : r.u) u.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
    out["u"] = std::move(u);
  }
  return out;
}

const char* to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::pass: return "pass";
    case ComparisonStatus::fail: return "fail";
    case ComparisonStatus::precondition_failed: return "precondition_failed";
  }
  return "?";
}

nlohmann::json to_json(const ComparisonResult& r, const Grid& g) {
  nlohmann::json out = {{"status", to_string(r.status)},
                        {"hypothesis", r.hypothesis},
                        {"boundary_max", r.boundary_max},
                        {"interior_max", r.interior_max}};
  if (r.witness >= 0) {
    const Point x = g.point(r.witness);
    out["witness"] = std::vector<double>(x.data(), x.data() + x.size());
  }
  if (!r.detail.empty()) out["detail"] = r.detail;
  return out;
}

ComparisonResult comparison_check(const Grid& grid, const std::vector<double>& u, const std::vector<double>& v,
                                  const Subequation& f, const std::vector<bool>& k_mask,
                                  const ComparisonOptions& opts, StencilKind stencil) {
  const long size = grid.size();
  require(static_cast<long>(u.size()) == size && static_cast<long>(v.size()) == size &&
              static_cast<long>(k_mask.size()) == size,
          ErrorKind::dimension_mismatch, "comparison_check: field sizes must match the grid");
  require(f.dim() == grid.dim, ErrorKind::dimension_mismatch, "comparison_check: subequation dimension mismatch");
  const Stencil s = Stencil::make(stencil, grid.dim);
  const Subequation f_dual = dual(f);
  const bool need_x = !f.flags().constant_coefficient;

  ComparisonResult out;
  out.boundary_max = -std::numeric_limits<double>::infinity();
  out.interior_max = out.boundary_max;
  long interior_witness = -1;
  bool any_boundary = false;
  for (long i = 0; i < size; ++i) {
    if (!k_mask[i]) continue;
    bool interior = true;
    for (const auto& d : s.directions) {
      const long a = grid.neighbor(i, d), b = grid.neighbor(i, negate(d));
      if (a < 0 || b < 0 || !k_mask[a] || !k_mask[b]) {
        interior = false;
        break;
      }
    }
    const double w = u[i] + v[i];
    if (!interior) {
      any_boundary = true;
      out.boundary_max = std::max(out.boundary_max, w);
      continue;
    }
    const Point x = need_x ? grid.point(i) : Point();
    const double ru = f.rho(x, discrete_jet(u, grid, i, s));
    const double rv = f_dual.rho(x, discrete_jet(v, grid, i, s));
    if (!(ru >= -opts.membership_tol) || !(rv >= -opts.membership_tol)) {
      out.status = ComparisonStatus::precondition_failed;
      out.witness = i;
      out.detail = !(ru >= -opts.membership_tol) ? "u is not discretely F-subharmonic"
                                                 : "v is not discretely dual-F-subharmonic";
      return out;
    }
    if (w > out.interior_max) {
      out.interior_max = w;
      interior_witness = i;
    }
  }
  require(any_boundary, ErrorKind::invalid_argument, "comparison_check: K is empty");
  out.hypothesis = out.boundary_max <= opts.zmp_tol;
  if (out.hypothesis && interior_witness >= 0 && out.interior_max > opts.zmp_tol) {
    out.status = ComparisonStatus::fail;
    out.witness = interior_witness;
  }
  return out;
}

}  // namespace subeq
