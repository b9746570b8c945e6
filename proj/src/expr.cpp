#include "subeq/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace subeq {

struct Expression::Node {
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, call };
  Op op = Op::constant;
  double value = 0.0;
  int var = 0;
  double (*fn)(double) = nullptr;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;

  double eval(const Vec& x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return var < x.size() ? x(var) : 0.0;
      case Op::neg: return -lhs->eval(x);
      case Op::add: return lhs->eval(x) + rhs->eval(x);
      case Op::sub: return lhs->eval(x) - rhs->eval(x);
      case Op::mul: return lhs->eval(x) * rhs->eval(x);
      case Op::div: return lhs->eval(x) / rhs->eval(x);
      case Op::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Op::call: return fn(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

struct Function {
  const char* name;
  double (*fn)(double);
};

double f_sin(double v) { return std::sin(v); }
double f_cos(double v) { return std::cos(v); }
double f_tan(double v) { return std::tan(v); }
double f_exp(double v) { return std::exp(v); }
double f_log(double v) { return std::log(v); }
double f_sqrt(double v) { return std::sqrt(v); }
double f_abs(double v) { return std::abs(v); }
double f_atan(double v) { return std::atan(v); }
double f_tanh(double v) { return std::tanh(v); }

constexpr Function kFunctions[] = {
    {"sin", f_sin},   {"cos", f_cos},   {"tan", f_tan},   {"exp", f_exp},   {"log", f_log},
    {"sqrt", f_sqrt}, {"abs", f_abs},   {"atan", f_atan}, {"tanh", f_tanh},
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return root;
  }
  int max_var() const { return max_var_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::config,
                "expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Node::Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (accept('+')) left = make(Node::Op::add, std::move(left), term());
      else if (accept('-')) left = make(Node::Op::sub, std::move(left), term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    while (true) {
      if (accept('*')) left = make(Node::Op::mul, std::move(left), unary());
      else if (accept('/')) left = make(Node::Op::div, std::move(left), unary());
      else return left;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok = s_.substr(start, pos_ - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
    if (used != tok.size()) {
      pos_ = start;
      fail("malformed number");
    }
    auto n = make(Node::Op::constant);
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    for (const auto& f : kFunctions) {
      if (id == f.name) {
        if (!accept('(')) fail("expected '(' after " + id);
        auto n = make(Node::Op::call, expr());
        n->fn = f.fn;
        if (!accept(')')) fail("expected ')'");
        return n;
      }
    }
    if (id == "pi") {
      auto n = make(Node::Op::constant);
      n->value = std::numbers::pi;
      return n;
    }
    int var = -1;
    if (id == "x") var = 0;
    else if (id == "y") var = 1;
    else if (id == "z") var = 2;
    else if (id.size() >= 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1]))) {
      bool digits = true;
      for (std::size_t i = 1; i < id.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(id[i]));
      if (digits) {
        const int k = std::stoi(id.substr(1));
        if (k >= 1 && k <= kMaxDim) var = k - 1;
      }
    }
    if (var < 0) {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    max_var_ = std::max(max_var_, var + 1);
    auto n = make(Node::Op::variable);
    n->var = var;
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  NodePtr root = p.parse();
  return Expression(text, std::shared_ptr<const Node>(std::move(root)), p.max_var());
}

double Expression::operator()(const Vec& x) const { return root_->eval(x); }

}  // namespace subeq
