#include "qewarp/expression.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace qewarp {

namespace {

// (u, u', u'') with respect to xi.
struct Jet {
  double v = 0, d1 = 0, d2 = 0;
};

Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }

Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2};
}

Jet operator/(Jet a, Jet b) {
  if (b.v == 0.0) throw DomainError("expression divides by zero");
  Jet w;
  w.v = a.v / b.v;
  w.d1 = (a.d1 - w.v * b.d1) / b.v;
  w.d2 = (a.d2 - 2 * w.d1 * b.d1 - w.v * b.d2) / b.v;
  return w;
}

Jet jet_exp(Jet a) {
  const double e = std::exp(a.v);
  return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

Jet jet_log(Jet a) {
  if (!(a.v > 0.0)) throw DomainError("expression takes log of a nonpositive value");
  const double q = a.d1 / a.v;
  return {std::log(a.v), q, a.d2 / a.v - q * q};
}

Jet jet_pow(Jet a, Jet b) {
  // Constant exponent works for any nonzero base; the general case goes
  // through exp(b log a) and needs a positive base.
  if (b.d1 == 0.0 && b.d2 == 0.0) {
    const double p = b.v;
    if (a.v == 0.0) {
      if (p == 0.0) return {1, 0, 0};
      if (p > 1.0) return {0, 0, 0};
      throw DomainError("expression raises zero to a power below one");
    }
    const double w = std::pow(a.v, p);
    const double w1 = p * std::pow(a.v, p - 1);
    const double w2 = p * (p - 1) * std::pow(a.v, p - 2);
    return {w, w1 * a.d1, w2 * a.d1 * a.d1 + w1 * a.d2};
  }
  return jet_exp(b * jet_log(a));
}

}  // namespace

struct Expression::Node {
  enum class Kind { number, variable, add, sub, mul, div, neg, exp, log, pow };
  Kind kind;
  double number = 0.0;
  std::shared_ptr<const Node> a, b;

  Jet eval(double xi) const {
    switch (kind) {
      case Kind::number:
        return {number, 0, 0};
      case Kind::variable:
        return {xi, 1, 0};
      case Kind::add:
        return a->eval(xi) + b->eval(xi);
      case Kind::sub:
        return a->eval(xi) - b->eval(xi);
      case Kind::mul:
        return a->eval(xi) * b->eval(xi);
      case Kind::div:
        return a->eval(xi) / b->eval(xi);
      case Kind::neg:
        return -a->eval(xi);
      case Kind::exp:
        return jet_exp(a->eval(xi));
      case Kind::log:
        return jet_log(a->eval(xi));
      case Kind::pow:
        return jet_pow(a->eval(xi), b->eval(xi));
    }
    throw Error("unreachable expression node");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double num = 0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->number = num;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw SpecError("unexpected trailing input in expression at offset " +
                      std::to_string(pos_));
    }
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (consume('+')) {
        lhs = make(Kind::add, lhs, term());
      } else if (consume('-')) {
        lhs = make(Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        lhs = make(Kind::mul, lhs, unary());
      } else if (consume('/')) {
        lhs = make(Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    if (consume('-')) return make(Kind::neg, unary());
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SpecError("expression ends unexpectedly");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return identifier();
    }
    throw SpecError(std::string("unexpected character '") + c +
                    "' in expression at offset " + std::to_string(pos_));
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw SpecError("malformed number in expression");
    pos_ += static_cast<size_t>(end - begin);
    return make(Kind::number, nullptr, nullptr, v);
  }

  NodePtr identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "xi") return make(Kind::variable);
    if (name == "exp" || name == "log") {
      expect('(');
      NodePtr a = expr();
      expect(')');
      return make(name == "exp" ? Kind::exp : Kind::log, a);
    }
    if (name == "pow") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make(Kind::pow, a, b);
    }
    throw SpecError("unknown identifier '" + name + "' in expression");
  }

  void expect(char c) {
    skip_ws();
    if (!consume(c)) {
      throw SpecError(std::string("expected '") + c + "' at offset " +
                      std::to_string(pos_));
    }
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root)
    : root_(std::move(root)) {}

Expression Expression::parse(const std::string& text) {
  return Expression(Parser(text).run());
}

double Expression::value(double xi) const { return root_->eval(xi).v; }
double Expression::d1(double xi) const { return root_->eval(xi).d1; }
double Expression::d2(double xi) const { return root_->eval(xi).d2; }

Profile Expression::profile(Domain domain) const {
  auto root = root_;
  return Profile([root](double xi) { return root->eval(xi).v; },
                 [root](double xi) { return root->eval(xi).d1; },
                 [root](double xi) { return root->eval(xi).d2; }, domain);
}

}  // namespace qewarp
