#pragma once

/// @file expression.hpp
/// Arithmetic expressions in the single variable xi: literals, + - * /,
/// pow, exp, log. Parsed once, evaluated as 2-jets (value, d1, d2) so the
/// resulting Profile carries exact derivatives.

#include <memory>
#include <string>

#include "qewarp/geometry.hpp"

namespace qewarp {

class Expression {
 public:
  // Throws SpecError on syntax errors.
  static Expression parse(const std::string& text);

  double value(double xi) const;
  double d1(double xi) const;
  double d2(double xi) const;

  // Profile backed by this expression. Evaluation failures inside the domain
  // (log of a nonpositive value, division by zero) throw DomainError.
  Profile profile(Domain domain) const;

  // Implementation detail, defined in the translation unit.
  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

}  // namespace qewarp
