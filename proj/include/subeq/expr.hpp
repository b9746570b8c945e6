#pragma once

// Arithmetic expressions in the spatial variables, used for coefficient fields, domain
// defining functions and boundary data. Grammar: docs/expression_grammar.md.

#include <memory>
#include <string>

#include "subeq/linalg.hpp"

namespace subeq {

class Expression {
 public:
  /// Throws Error(config) with the offending column on a syntax error.
  static Expression parse(const std::string& text);

  /// Evaluates at x; variables beyond x.size() read as 0.
  double operator()(const Vec& x) const;
  const std::string& text() const { return text_; }
  /// Highest variable index referenced (0 for none, 1 for x / x1, ...).
  int max_variable() const { return max_var_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root, int max_var)
      : text_(std::move(text)), root_(std::move(root)), max_var_(max_var) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
  int max_var_;
};

}  // namespace subeq
