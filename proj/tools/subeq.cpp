// subeq: batch front-end for the subequation checks and the grid solvers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subeq/boundary.hpp"
#include "subeq/catalog.hpp"
#include "subeq/checks.hpp"
#include "subeq/expr.hpp"
#include "subeq/garding.hpp"
#include "subeq/riesz.hpp"
#include "subeq/solver.hpp"

namespace {

using nlohmann::json;
using namespace subeq;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 2;
constexpr int kExitConfig = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string report = "-";
  std::string out;
  std::uint64_t seed = 1;

  std::string subeq;
  std::string against;
  std::string cone;
  std::string axiom = "both";
  long trials = 10000;

  double tol = 1e-6;
  int directions = 64;
  std::optional<double> p;

  std::string poly = "det";
  int n = 3;
  std::string matrix;
  long hyper_trials = 1000;

  std::string domain;
  int points = 20;
  std::string center;
  std::string lambdas = "-2,-1,0,1,2";
  double t_max = 65536.0;

  std::string bc;
  std::string obstacle;
  double h = 0.0;
  std::string box = "-1,1";
  std::string stencil = "standard";
  long max_sweeps = 100000;
  double sweep_tol = 0.0;
  double omega = 0.0;
};

struct Outcome {
  int code = kExitOk;
  std::string status = "ok";
  json result = json::object();
  std::vector<std::string> summary;
  std::string csv;
};

// ---------------------------------------------------------------------------
// deterministic output

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_flat(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
}

void write_json(const json& j, std::string& out, int level) {
  const std::string pad(2 * (level + 1), ' ');
  const std::string close(2 * level, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        write_json(it.value(), out, level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty() || is_flat(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(j[i], out, level + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], out, level + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      out += num(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------------------
// parsing helpers

std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

SymMatrix parse_matrix(const std::string& text, int n) {
  SymMatrix a = SymMatrix::Zero(n, n);
  if (text.rfind("diag:", 0) == 0) {
    const auto d = numbers(text.substr(5), "--matrix");
    if (static_cast<int>(d.size()) != n) throw ConfigError("--matrix: diagonal needs " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i) a(i, i) = d[i];
    return a;
  }
  std::stringstream ss(text);
  std::string row;
  int i = 0;
  while (std::getline(ss, row, ';')) {
    const auto r = numbers(row, "--matrix");
    if (i >= n || static_cast<int>(r.size()) != n) throw ConfigError("--matrix: expected " + std::to_string(n) + " rows of " + std::to_string(n));
    for (int k = 0; k < n; ++k) a(i, k) = r[k];
    ++i;
  }
  if (i != n) throw ConfigError("--matrix: expected " + std::to_string(n) + " rows");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 0) throw ConfigError("--matrix: not symmetric");
  return a;
}

void need(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required option ") + flag);
}

Vec as_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

json vec_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ScalarFieldFn field(const std::string& text, int n, const char* flag) {
  const Expression e = Expression::parse(text);
  if (e.max_variable() > n) throw ConfigError(std::string(flag) + ": expression uses more variables than the dimension");
  return [e](const Point& x) { return e(x); };
}

// ---------------------------------------------------------------------------
// commands

Outcome run_check(const Options& o) {
  need(o.subeq, "--subeq");
  const Subequation f = make_named(o.subeq);
  CheckOptions co;
  co.seed = o.seed;
  std::vector<Axiom> axioms;
  if (o.axiom == "P" || o.axiom == "both") axioms.push_back(Axiom::positivity);
  if (o.axiom == "N" || o.axiom == "both") axioms.push_back(Axiom::negativity);
  Outcome out;
  out.result["subequation"] = f.label();
  out.result["reports"] = json::array();
  for (Axiom a : axioms) {
    const ViolationReport r = axiom_check(f, a, o.trials, co);
    out.result["reports"].push_back(to_json(r));
    out.summary.push_back("check " + r.axiom + " " + f.label() + ": " + std::to_string(r.violations) + "/" +
                          std::to_string(r.trials) + " violations");
    if (!r.ok()) out.code = kExitFailed;
  }
  return out;
}

Outcome run_dual_test(const Options& o) {
  need(o.subeq, "--subeq");
  std::string against = o.against;
  if (against.empty()) {
    const auto guess = dual_counterpart(o.subeq);
    if (!guess) throw ConfigError("dual-test: --against is required for " + o.subeq);
    against = *guess;
  }
  const Subequation f = make_named(o.subeq);
  const Subequation g = make_named(against);
  CheckOptions co;
  co.seed = o.seed;
  const AgreementReport r = membership_agreement(dual(f), g, o.trials, co);
  Outcome out;
  out.result = to_json(r);
  out.result["subequation"] = o.subeq;
  out.result["against"] = against;
  out.summary.push_back("dual-test dual(" + o.subeq + ") vs " + against + ": " + std::to_string(r.disagreements) +
                        " disagreements in " + std::to_string(r.compared) + " compared");
  if (!r.ok()) out.code = kExitFailed;
  return out;
}

Outcome run_mono_test(const Options& o) {
  need(o.subeq, "--subeq");
  need(o.cone, "--cone");
  const Subequation f = make_named(o.subeq);
  const Subequation m = make_named(o.cone);
  CheckOptions co;
  co.seed = o.seed;
  const MonotonicityReport r = monotonicity_check(f, m, o.trials, co);
  Outcome out;
  out.result = {{"direct", to_json(r.direct)}, {"dual_form", to_json(r.dual_form)}, {"agreement", r.agreement()}};
  out.summary.push_back("mono-test " + f.label() + " + " + m.label() + ": " + std::to_string(r.direct.violations) +
                        " direct / " + std::to_string(r.dual_form.violations) + " dual-form violations, " +
                        (r.agreement() ? "forms agree" : "forms DISAGREE"));
  if (!r.direct.ok() || !r.agreement()) out.code = kExitFailed;
  return out;
}

Outcome run_riesz(const Options& o) {
  need(o.cone, "--cone");
  const Subequation m = make_named(o.cone);
  RieszOptions ro;
  ro.tol = o.tol;
  ro.directions = o.directions;
  const RieszResult r = riesz_characteristic(m, ro);
  Outcome out;
  out.result = to_json(r);
  out.result["cone"] = m.label();
  out.summary.push_back("riesz " + m.label() + ": p_M = " + (r.unbounded ? std::string(">= n+1") : num(r.p_m)));
  if (o.p) {
    CheckOptions co;
    co.seed = o.seed;
    const InclusionReport inc = pcone_inclusion_check(m, *o.p, o.trials, co, ro);
    out.result["inclusion"] = to_json(inc);
    out.summary.push_back("riesz P(" + num(*o.p) + ") in " + m.label() + ": " + std::to_string(inc.violations) +
                          " violations, " + (inc.agrees() ? "consistent with p_M" : "INCONSISTENT with p_M"));
    if (!inc.agrees()) out.code = kExitFailed;
  }
  return out;
}

Outcome run_garding(const Options& o) {
  HyperbolicPolynomial q = [&] {
    if (o.poly == "det") return det_polynomial(o.n);
    if (o.poly.rfind("sigma=", 0) == 0) {
      const auto k = numbers(o.poly.substr(6), "--poly");
      if (k.size() != 1 || k[0] != std::floor(k[0])) throw ConfigError("--poly: sigma=<k> needs an integer");
      return sigma_polynomial(static_cast<int>(k[0]), o.n);
    }
    throw ConfigError("--poly must be det or sigma=<k>");
  }();
  Outcome out;
  out.result["polynomial"] = q.label();
  out.result["degree"] = q.degree();
  if (!o.matrix.empty()) {
    const SymMatrix a = parse_matrix(o.matrix, o.n);
    const GardingRoots r = garding_roots(q, a);
    json roots = json::array();
    for (int i = 0; i < r.roots.size(); ++i) roots.push_back({r.roots(i).real(), r.roots(i).imag()});
    out.result["roots"] = roots;
    out.result["worst_imaginary"] = r.worst_imaginary;
    out.result["clustered"] = r.clustered;
    const Eigen::VectorXd ev = garding_eigenvalues(q, a);
    json e = json::array();
    std::string line;
    for (int i = 0; i < ev.size(); ++i) {
      e.push_back(ev(i));
      line += (i ? ", " : "") + num(ev(i));
    }
    out.result["eigenvalues"] = e;
    out.summary.push_back("garding " + q.label() + " eigenvalues: " + line);
  }
  if (o.hyper_trials > 0) {
    const HyperbolicityReport h = hyperbolicity_check(q, o.hyper_trials, o.seed);
    out.result["hyperbolicity"] = to_json(h);
    out.summary.push_back("garding " + q.label() + ": " + std::to_string(h.failures) + "/" + std::to_string(h.trials) +
                          " non-hyperbolic samples, " + std::to_string(h.borderline) + " borderline");
    if (!h.ok()) out.code = kExitFailed;
  }
  return out;
}

Outcome run_convexity(const Options& o) {
  need(o.subeq, "--subeq");
  need(o.domain, "--domain");
  const Subequation f = make_named(o.subeq);
  const int n = f.dim();
  const Expression e = Expression::parse(o.domain);
  const DomainSpec d = DomainSpec::from_expression(n, e);
  Point center = Point::Zero(n);
  if (!o.center.empty()) {
    const auto c = numbers(o.center, "--center");
    if (static_cast<int>(c.size()) != n) throw ConfigError("--center needs " + std::to_string(n) + " coordinates");
    center = as_vec(c);
  }
  if (o.points < 1) throw ConfigError("--points must be positive");
  ConvexityOptions co;
  co.lambda_grid = numbers(o.lambdas, "--lambdas");
  co.t_max = o.t_max;
  co.seed = o.seed;

  std::string csv;
  for (int i = 0; i < n; ++i) csv += "x" + std::to_string(i + 1) + ",";
  for (double l : co.lambda_grid) csv += "lambda=" + num(l) + ",";
  csv += "overall\n";

  Outcome out;
  out.result["subequation"] = f.label();
  out.result["domain"] = o.domain;
  out.result["lambdas"] = co.lambda_grid;
  out.result["points"] = json::array();
  int passed = 0;
  for (const Point& x : boundary_points_along_rays(d, center, o.points)) {
    const ConvexityVerdict v = strict_convexity_test(f, d, x, co);
    json per = json::array();
    for (int i = 0; i < n; ++i) csv += num(x(i)) + ",";
    for (bool b : v.per_lambda) {
      per.push_back(b);
      csv += b ? "1," : "0,";
    }
    csv += v.overall ? "1\n" : "0\n";
    Eigen::SelfAdjointEigenSolver<SymMatrix> es(v.sff.ii);
    out.result["points"].push_back({{"x", vec_json(x)},
                                    {"normal", vec_json(v.sff.nu)},
                                    {"curvatures", vec_json(es.eigenvalues())},
                                    {"per_lambda", per},
                                    {"overall", v.overall}});
    passed += v.overall ? 1 : 0;
  }
  out.result["passed"] = passed;
  out.summary.push_back("convexity " + f.label() + " on " + o.domain + ": " + std::to_string(passed) + "/" +
                        std::to_string(o.points) + " boundary points strictly convex");
  out.csv = csv;
  return out;
}

GridProblem build_problem(const Options& o, const Subequation& f) {
  need(o.bc, "--bc");
  const int n = f.dim();
  if (n > 3) throw ConfigError("grid solvers support dimensions 1 to 3");
  if (!(o.h > 0)) throw ConfigError("--h must be positive");
  const auto b = numbers(o.box, "--box");
  Vec lo(n), hi(n);
  if (b.size() == 2) {
    lo.setConstant(b[0]);
    hi.setConstant(b[1]);
  } else if (static_cast<int>(b.size()) == 2 * n) {
    for (int i = 0; i < n; ++i) {
      lo(i) = b[2 * i];
      hi(i) = b[2 * i + 1];
    }
  } else {
    throw ConfigError("--box needs lo,hi or one lo,hi pair per axis");
  }
  for (int i = 0; i < n; ++i) {
    if (!(hi(i) > lo(i))) throw ConfigError("--box: empty interval");
    const double cells = std::ceil((hi(i) - lo(i)) / o.h - 1e-9);
    hi(i) = lo(i) + cells * o.h;
  }
  std::optional<DomainSpec> dom;
  if (!o.domain.empty()) dom = DomainSpec::from_expression(n, Expression::parse(o.domain));
  SolverParams sp;
  sp.max_sweeps = o.max_sweeps;
  sp.sweep_tol = o.sweep_tol;
  sp.relaxation = o.omega;
  sp.stencil = o.stencil == "wide" ? StencilKind::wide : StencilKind::standard;
  return GridProblem(Grid::box(lo, hi, o.h), f, field(o.bc, n, "--bc"), dom, sp);
}

json grid_json(const GridProblem& p) {
  const Grid& g = p.grid();
  long boundary = 0;
  for (NodeKind k : p.kinds()) boundary += k == NodeKind::boundary ? 1 : 0;
  json count = json::array();
  for (int i = 0; i < g.dim; ++i) count.push_back(g.count[i]);
  return {{"dim", g.dim},
          {"lo", vec_json(g.lo)},
          {"h", g.h},
          {"count", count},
          {"interior_nodes", static_cast<long>(p.interior().size())},
          {"boundary_nodes", boundary}};
}

std::string field_csv(const Grid& g, const std::vector<std::string>& names,
                      const std::vector<const std::vector<double>*>& columns) {
  static const char* axes[] = {"x", "y", "z"};
  std::string csv;
  for (int i = 0; i < g.dim; ++i) csv += std::string(axes[i]) + ",";
  for (std::size_t c = 0; c < names.size(); ++c) csv += names[c] + (c + 1 < names.size() ? "," : "\n");
  for (long idx = 0; idx < g.size(); ++idx) {
    if (std::isnan((*columns.front())[idx])) continue;
    const Point x = g.point(idx);
    for (int i = 0; i < g.dim; ++i) csv += num(x(i)) + ",";
    for (std::size_t c = 0; c < columns.size(); ++c) csv += num((*columns[c])[idx]) + (c + 1 < columns.size() ? "," : "\n");
  }
  return csv;
}

std::string solve_line(const std::string& what, const SolveReport& r) {
  return what + ": " + (r.converged ? "converged" : "NOT converged") + " after " + std::to_string(r.sweeps) +
         " sweeps, update " + num(r.final_update) + ", residual " + num(r.residual);
}

Outcome run_solve(const Options& o) {
  need(o.subeq, "--subeq");
  const GridProblem p = build_problem(o, make_named(o.subeq));
  const SolveReport r = perron_solve(p);
  Outcome out;
  out.result = to_json(r);
  out.result["grid"] = grid_json(p);
  out.result["subequation"] = p.subequation().label();
  out.summary.push_back(solve_line("solve " + p.subequation().label(), r));
  out.csv = field_csv(p.grid(), {"u"}, {&r.u});
  if (!r.converged) out.code = kExitFailed;
  return out;
}

Outcome run_obstacle(const Options& o) {
  need(o.subeq, "--subeq");
  need(o.obstacle, "--obstacle");
  const GridProblem p = build_problem(o, make_named(o.subeq));
  const SolveReport r = obstacle_solve(p, field(o.obstacle, p.grid().dim, "--obstacle"));
  Outcome out;
  out.result = to_json(r);
  out.result["grid"] = grid_json(p);
  out.result["subequation"] = p.subequation().label();
  out.summary.push_back(solve_line("obstacle " + p.subequation().label(), r) + ", " +
                        std::to_string(r.contact_nodes) + " contact nodes");
  out.csv = field_csv(p.grid(), {"u"}, {&r.u});
  if (!r.converged) out.code = kExitFailed;
  return out;
}

Outcome run_bracket(const Options& o) {
  need(o.subeq, "--subeq");
  const GridProblem p = build_problem(o, make_named(o.subeq));
  const BracketResult r = dual_bracket_solve(p);
  const double slack = 10 * std::max(r.upper.sweep_tol, r.lower_dual.sweep_tol);
  const bool ordered = r.worst_order <= slack;
  Outcome out;
  out.result = {{"upper", to_json(r.upper)},
                {"lower_dual", to_json(r.lower_dual)},
                {"max_gap", r.max_gap},
                {"worst_order", r.worst_order},
                {"ordered", ordered},
                {"grid", grid_json(p)},
                {"subequation", p.subequation().label()}};
  out.summary.push_back(solve_line("bracket upper", r.upper));
  out.summary.push_back(solve_line("bracket dual", r.lower_dual));
  out.summary.push_back("bracket " + p.subequation().label() + ": max |U - U~| = " + num(r.max_gap) +
                        ", max(U~ - U) = " + num(r.worst_order));
  out.csv = field_csv(p.grid(), {"U", "U_tilde"}, {&r.upper.u, &r.u_tilde});
  if (!r.upper.converged || !r.lower_dual.converged || !ordered) out.code = kExitFailed;
  return out;
}

// ---------------------------------------------------------------------------
// config files

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_number()) return v.dump();
  throw ConfigError("config values must be strings, numbers or booleans");
}

json read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  try {
    json j = json::parse(f);
    if (!j.is_object()) throw ConfigError("config " + path + " must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

/// Values from the config file fill options that were not given on the command line.
void apply_config(CLI::App* sub, const json& cfg) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command") {
      if (config_value(it.value()) != sub->get_name()) throw ConfigError("config command does not match " + sub->get_name());
      continue;
    }
    if (it.key() == "config") throw ConfigError("config files cannot nest");
    CLI::Option* opt = sub->get_option_no_throw("--" + it.key());
    if (!opt) throw ConfigError("unknown config key '" + it.key() + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    opt->add_result(config_value(it.value()));
    opt->run_callback();
  }
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON file whose keys mirror the long option names");
  sub->add_option("--report", o.report, "report JSON path ('-' for stdout)");
  sub->add_option("--seed", o.seed, "sampling seed");
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--subeq", o.subeq, "catalog name of F");
  sub->add_option("--domain", o.domain, "defining function rho, domain {rho < 0}; whole box if omitted");
  sub->add_option("--bc", o.bc, "boundary data expression");
  sub->add_option("--h", o.h, "grid spacing");
  sub->add_option("--box", o.box, "lo,hi for every axis or one lo,hi pair per axis (hi is rounded up to the lattice)");
  sub->add_option("--stencil", o.stencil, "second-difference stencil")->check(CLI::IsMember({"standard", "wide"}));
  sub->add_option("--max-sweeps", o.max_sweeps, "sweep budget");
  sub->add_option("--sweep-tol", o.sweep_tol, "accuracy target for the fixed point (0: 1e-10 * data range)");
  sub->add_option("--omega", o.omega, "over-relaxation factor (0: automatic, 1: Gauss-Seidel)");
  sub->add_option("--out", o.out, "field CSV path ('-' for stdout)");
}

void write_outputs(const std::string& command, const Options& o, const Outcome& r) {
  json report = {{"command", command}, {"status", r.status}, {"exit_code", r.code}, {"seed", o.seed},
                 {"result", r.result}};
  std::string text;
  write_json(report, text, 0);
  text += "\n";
  if (!r.csv.empty() && !o.out.empty()) emit(o.out, r.csv);
  emit(o.report, text);
  for (const auto& line : r.summary) std::cerr << line << "\n";
}

int error_exit(const std::string& command, const Options& o, int code, const std::string& kind, const std::string& what) {
  Outcome r;
  r.code = code;
  r.status = code == kExitConfig ? "config_error" : "error";
  r.result = {{"kind", kind}, {"message", what}};
  r.summary.push_back("subeq " + command + ": " + kind + ": " + what);
  try {
    write_outputs(command, o, r);
  } catch (const std::exception& e) {
    std::cerr << "subeq: " << e.what() << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Options o;

  // `subeq --config run.json` takes the command from the file
  if (args.size() == 2 && args[0] == "--config") {
    try {
      const json cfg = read_config(args[1]);
      if (!cfg.contains("command")) throw ConfigError("config without a command needs one on the command line");
      args.insert(args.begin(), config_value(cfg["command"]));
    } catch (const ConfigError& e) {
      return error_exit("", o, kExitConfig, "config", e.what());
    }
  }

  CLI::App app{"subeq: subequation checks, Riesz characteristics, boundary convexity and Perron solves"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h

  auto* check = app.add_subcommand("check", "sample the positivity and negativity axioms");
  check->add_option("--subeq", o.subeq, "catalog name of F");
  check->add_option("--axiom", o.axiom, "axiom to test")->check(CLI::IsMember({"P", "N", "both"}));
  check->add_option("--trials", o.trials, "member samples per axiom");

  auto* dual_test = app.add_subcommand("dual-test", "compare dual(F) with a second subequation");
  dual_test->add_option("--subeq", o.subeq, "catalog name of F");
  dual_test->add_option("--against", o.against, "expected dual (defaults to the branch counterpart)");
  dual_test->add_option("--trials", o.trials, "random jets");

  auto* mono = app.add_subcommand("mono-test", "sample F + M in F and its dual form");
  mono->add_option("--subeq", o.subeq, "catalog name of F");
  mono->add_option("--cone", o.cone, "catalog name of the monotonicity cone M");
  mono->add_option("--trials", o.trials, "member pairs");

  auto* riesz = app.add_subcommand("riesz", "Riesz characteristic p_M of a convex cone");
  riesz->add_option("--cone", o.cone, "catalog name of M");
  riesz->add_option("--tol", o.tol, "bisection tolerance");
  riesz->add_option("--directions", o.directions, "low-discrepancy directions");
  riesz->add_option("--p", o.p, "also test P(p) in M");
  riesz->add_option("--trials", o.trials, "samples for the inclusion test");

  auto* garding = app.add_subcommand("garding", "Garding eigenvalues and hyperbolicity sampling");
  garding->add_option("--poly", o.poly, "det or sigma=<k>");
  garding->add_option("--n", o.n, "dimension");
  garding->add_option("--matrix", o.matrix, "symmetric matrix, rows separated by ';' or diag:<d1,...>");
  garding->add_option("--trials", o.hyper_trials, "random matrices for the hyperbolicity check (0 to skip)");

  auto* convexity = app.add_subcommand("convexity", "strict boundary convexity along rays");
  convexity->add_option("--subeq", o.subeq, "catalog name of F");
  convexity->add_option("--domain", o.domain, "defining function rho, domain {rho < 0}");
  convexity->add_option("--points", o.points, "boundary points");
  convexity->add_option("--center", o.center, "interior point the rays start from (default: origin)");
  convexity->add_option("--lambdas", o.lambdas, "comma-separated lambda grid for the fibers F_lambda");
  convexity->add_option("--t-max", o.t_max, "largest normal weight t");
  convexity->add_option("--out", o.out, "CSV path ('-' for stdout)");

  auto* solve = app.add_subcommand("solve", "Perron solve of the Dirichlet problem");
  add_grid(solve, o);
  auto* obstacle = app.add_subcommand("obstacle", "Perron solve below an obstacle");
  add_grid(obstacle, o);
  obstacle->add_option("--obstacle", o.obstacle, "obstacle expression g");
  auto* bracket = app.add_subcommand("bracket", "Perron solves for F and for the dual with negated data");
  add_grid(bracket, o);

  for (auto* sub : app.get_subcommands({})) add_common(sub, o);

  std::string command;
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    CLI::App* sub = app.get_subcommands().front();
    command = sub->get_name();
    if (!o.config.empty()) apply_config(sub, read_config(o.config));
    if (o.report == "-" && o.out == "-") throw ConfigError("--report and --out cannot both go to stdout");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    return error_exit(command, o, kExitConfig, "config", e.what());
  } catch (const ConfigError& e) {
    return error_exit(command, o, kExitConfig, "config", e.what());
  }

  try {
    Outcome r;
    if (command == "check") r = run_check(o);
    else if (command == "dual-test") r = run_dual_test(o);
    else if (command == "mono-test") r = run_mono_test(o);
    else if (command == "riesz") r = run_riesz(o);
    else if (command == "garding") r = run_garding(o);
    else if (command == "convexity") r = run_convexity(o);
    else if (command == "solve") r = run_solve(o);
    else if (command == "obstacle") r = run_obstacle(o);
    else r = run_bracket(o);
    if (r.code == kExitFailed) {
      r.status = command == "solve" || command == "obstacle" || command == "bracket" ? "not_converged" : "violations";
    }
    write_outputs(command, o, r);
    return r.code;
  } catch (const ConfigError& e) {
    return error_exit(command, o, kExitConfig, "config", e.what());
  } catch (const Error& e) {
    const bool input = e.kind() == ErrorKind::config || e.kind() == ErrorKind::invalid_argument ||
                       e.kind() == ErrorKind::dimension_mismatch;
    return error_exit(command, o, input ? kExitConfig : kExitFailed, to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return error_exit(command, o, kExitFailed, "internal", e.what());
  }
}
