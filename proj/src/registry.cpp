#include <cmath>
#include <map>

#include "subeq/catalog.hpp"
#include "subeq/expr.hpp"
#include "subeq/garding.hpp"
#include "subeq/jet_equivalence.hpp"

namespace subeq {

namespace {

[[noreturn]] void bad(const std::string& spec, const std::string& why) {
  throw Error(ErrorKind::config, "unknown or malformed subequation name '" + spec + "': " + why);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = s.find(':', start);
    out.push_back(s.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  return out;
}

struct Parsed {
  std::string spec;
  std::vector<std::string> words;            // tokens without '='
  std::map<std::string, std::string> params;  // key=value tokens

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto it = params.find(key);
    if (it == params.end()) {
      if (fallback) return *fallback;
      bad(spec, "missing parameter " + key);
    }
    if (it->second == "inf") return kInfinity;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      bad(spec, "parameter " + key + " is not a number");
    }
    if (used != it->second.size()) bad(spec, "parameter " + key + " is not a number");
    return v;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const {
    const double v = number(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
    if (v != std::floor(v) || std::abs(v) > 1e6) bad(spec, "parameter " + key + " must be an integer");
    return static_cast<int>(v);
  }

  int dim() const { return integer("n", 2); }
};

Parsed parse_tokens(const std::string& spec, const std::vector<std::string>& tokens) {
  Parsed p;
  p.spec = spec;
  for (const auto& t : tokens) {
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      p.words.push_back(t);
    } else {
      p.params[t.substr(0, eq)] = t.substr(eq + 1);
    }
  }
  return p;
}

ScalarFieldFn field_from(const std::string& spec, const std::string& text, int n) {
  const Expression e = Expression::parse(text);
  if (e.max_variable() > n) bad(spec, "expression uses more variables than the dimension");
  return [e](const Point& x) { return e(x); };
}

std::string join(const std::vector<std::string>& tokens, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += ':';
    out += tokens[i];
  }
  return out;
}

}  // namespace

Subequation make_named(const std::string& spec) {
  if (spec.empty()) bad(spec, "empty name");
  const std::vector<std::string> tokens = split(spec);
  const std::string& head = tokens.front();

  if (head == "dual") {
    if (tokens.size() < 2) bad(spec, "dual of what?");
    return dual(make_named(join(tokens, 1, tokens.size())));
  }
  if (head == "reg") {
    if (tokens.size() < 3 || tokens[1].rfind("d=", 0) != 0) bad(spec, "expected reg:d=<delta>:<name>");
    const Parsed p = parse_tokens(spec, {tokens[1]});
    return make_delta_regularized(make_named(join(tokens, 2, tokens.size())), p.number("d"));
  }
  if (head == "inhom") {
    const std::size_t at = spec.rfind(":f=");
    if (at == std::string::npos || at < 6) bad(spec, "expected inhom:<name>:f=<expr>");
    const Subequation inner = make_named(spec.substr(6, at - 6));
    const std::string expr = spec.substr(at + 3);
    const AffineJetMap psi = inhomogeneous_shift(inner.dim(), field_from(spec, expr, inner.dim()), "inhom:f=" + expr);
    return transform_subequation(inner, invert(psi)).relabeled(spec);
  }
  if (head == "calabi-yau") {
    const std::size_t at = spec.find(":f=");
    if (at == std::string::npos) bad(spec, "expected calabi-yau[:m=<m>]:f=<expr>");
    const Parsed p = parse_tokens(spec, split(spec.substr(0, at)));
    const int m = p.integer("m", 1);
    const std::string expr = spec.substr(at + 3);
    const AffineJetMap psi = calabi_yau_map(m, field_from(spec, expr, 2 * m));
    return transform_subequation(make_calabi_yau_det(m), invert(psi)).relabeled(spec);
  }

  const Parsed p = parse_tokens(spec, tokens);
  const int n = p.dim();
  if (head == "laplace") return make_laplace(n);
  if (head == "positive" || head == "P") return make_branch(ScalarField::real, 1, n);
  if (head == "branch") {
    ScalarField field = ScalarField::real;
    if (p.words.size() > 1) {
      const std::string& w = p.words[1];
      if (w == "real") field = ScalarField::real;
      else if (w == "complex") field = ScalarField::complex;
      else if (w == "quaternionic") field = ScalarField::quaternionic;
      else bad(spec, "field must be real, complex or quaternionic");
    }
    return make_branch(field, p.integer("k"), n);
  }
  if (head == "pcone") return make_pcone(p.number("p"), n);
  if (head == "pucci") return make_pucci_cone(p.number("lam"), p.number("Lam"), n);
  if (head == "delta") return make_delta_cone(p.number("d"), n);
  if (head == "sigma") return make_sigma_cone(p.integer("k"), n);
  if (head == "slag" || head == "special_lagrangian") return make_special_lagrangian(p.number("c", 0.0), n);
  if (head == "calabi_yau") return make_calabi_yau(n);
  if (head == "cy_det") return make_calabi_yau_det(n);
  if (head == "klap" || head == "k_laplacian") return make_k_laplacian(p.number("k"), n);
  if (head == "monge_ampere") return make_monge_ampere(n);
  if (head == "pbranch") return make_p_branch(p.integer("p"), p.integer("k"), n);
  if (head == "geometric") {
    return make_geometric(GrassmannSet::sample(p.integer("p"), n, p.integer("count", 256)));
  }
  if (head == "mcone") {
    MonotonicityConeParams mp;
    mp.gamma = p.number("gamma", 1.0);
    mp.lambda = p.number("lambda", 1.0);
    mp.radius = p.number("R", 1.0);
    const int which = p.integer("case");
    if (which == 3 || which == 4) {
      std::vector<Vec> gens;
      for (int i = 0; i < n; ++i) gens.push_back(Vec::Unit(n, i));
      mp.cone = DirectionalCone(gens, mp.gamma);
    }
    return make_monotonicity_cone(which, n, mp);
  }
  if (head == "garding") {
    if (p.words.size() > 1 && p.words[1] == "det") return branch_subequation(det_polynomial(n), p.integer("k"));
    if (p.params.count("sigma")) {
      return branch_subequation(sigma_polynomial(p.integer("sigma"), n), p.integer("k"));
    }
    bad(spec, "expected garding:det:k=..:n=.. or garding:sigma=<j>:k=..:n=..");
  }
  bad(spec, "unknown family '" + head + "'");
}

std::optional<std::string> dual_counterpart(const std::string& spec) {
  const std::vector<std::string> tokens = split(spec);
  const Parsed p = parse_tokens(spec, tokens);
  const int n = p.dim();
  const std::string& head = tokens.front();
  if (head == "branch") {
    const std::string field = p.words.size() > 1 ? p.words[1] : "real";
    return "branch:" + field + ":k=" + std::to_string(n - p.integer("k") + 1) + ":n=" + std::to_string(n);
  }
  if (head == "laplace") return "laplace:n=" + std::to_string(n);
  if (head == "garding" && p.words.size() > 1 && p.words[1] == "det") {
    return "garding:det:k=" + std::to_string(n - p.integer("k") + 1) + ":n=" + std::to_string(n);
  }
  return std::nullopt;
}

}  // namespace subeq
