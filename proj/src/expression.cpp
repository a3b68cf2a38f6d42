#include "mdf/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "mdf/error.hpp"

namespace mdf {

struct Expression::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Kind;

NodePtr make_leaf(Kind kind, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->value = value;
  return n;
}

NodePtr make_node(Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) {
      if (pos_ >= text_.size()) throw ParseError(pos_, std::string("expected '") + c + "' but reached end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        lhs = make_node(c == '+' ? Kind::Add : Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        lhs = make_node(c == '*' ? Kind::Mul : Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      NodePtr operand = unary();
      // "-3" is the constant -3, so negative constants round-trip through to_string.
      if (operand->kind == Kind::Constant) return make_leaf(Kind::Constant, -operand->value);
      return make_node(Kind::Neg, operand);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      return make_node(Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    char c = peek();
    if (c == '\0') throw ParseError(pos_, "unexpected end of input");
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "q") return make_leaf(Kind::Variable);
      if (ident == "sqrt") {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make_node(Kind::Sqrt, arg);
      }
      throw ParseError(start, "unknown identifier '" + std::string(ident) + "'");
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t int_digits = digits();
    std::size_t frac_digits = 0;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      frac_digits = digits();
    }
    if (int_digits + frac_digits == 0) throw ParseError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError(save, "malformed exponent");
    }
    std::string literal(text_.substr(start, pos_ - start));
    double value = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(value)) throw ParseError(start, "numeric literal out of range");
    return make_leaf(Kind::Constant, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double q) {
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable: return q;
    case Kind::Add: return eval(*n.lhs, q) + eval(*n.rhs, q);
    case Kind::Sub: return eval(*n.lhs, q) - eval(*n.rhs, q);
    case Kind::Mul: return eval(*n.lhs, q) * eval(*n.rhs, q);
    case Kind::Div: return eval(*n.lhs, q) / eval(*n.rhs, q);
    case Kind::Pow: return std::pow(eval(*n.lhs, q), eval(*n.rhs, q));
    case Kind::Neg: return -eval(*n.lhs, q);
    case Kind::Sqrt: return std::sqrt(eval(*n.lhs, q));
  }
  return std::nan("");
}

void print(const Expression::Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (std::signbit(n.value)) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      break;
    }
    case Kind::Variable: out += 'q'; break;
    case Kind::Add: binary(" + "); break;
    case Kind::Sub: binary(" - "); break;
    case Kind::Mul: binary(" * "); break;
    case Kind::Div: binary(" / "); break;
    case Kind::Pow: binary(" ^ "); break;
    case Kind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case Kind::Sqrt:
      out += "sqrt(";
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

bool equal(const Expression::Node* a, const Expression::Node* b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Kind::Constant) return a->value == b->value;
  return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
}

}  // namespace

Expression::Expression() : root_(make_leaf(Kind::Constant, 0.0)) {}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(make_leaf(Kind::Constant, value)); }

double Expression::operator()(double q) const { return eval(*root_, q); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expression::Kind Expression::kind() const { return root_->kind; }

bool operator==(const Expression& a, const Expression& b) { return equal(a.root_.get(), b.root_.get()); }

}  // namespace mdf
