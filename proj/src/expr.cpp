#include "ruled/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace ruled {

struct Expr::Node {
  enum Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;              // Const
  int fn = -1;                     // Call: index into kFunctions
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct FnEntry {
  const char* name;
  double (*fn)(double);
};

double checked_sqrt(double x) {
  if (x < 0.0) throw EvalError("sqrt of negative value");
  return std::sqrt(x);
}
double checked_log(double x) {
  if (x <= 0.0) throw EvalError("log of non-positive value");
  return std::log(x);
}

const FnEntry kFunctions[] = {
    {"sin", [](double x) { return std::sin(x); }},
    {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},
    {"sqrt", checked_sqrt},
    {"exp", [](double x) { return std::exp(x); }},
    {"log", checked_log},
    {"abs", [](double x) { return std::fabs(x); }},
    {"atan", [](double x) { return std::atan(x); }},
};

NodePtr make(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

class Parser {
 public:
  Parser(const std::string& text, const std::string& var)
      : text_(text), var_(var) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("empty expression", pos_);
    NodePtr e = sum();
    skip_ws();
    if (pos_ < text_.size())
      throw ParseError("unexpected trailing input at offset " +
                           std::to_string(pos_), pos_);
    return e;
  }

 private:
  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = make({Expr::Node::Add, 0, -1, lhs, product()});
      } else if (accept('-')) {
        lhs = make({Expr::Node::Sub, 0, -1, lhs, product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = make({Expr::Node::Mul, 0, -1, lhs, unary()});
      } else if (accept('/')) {
        lhs = make({Expr::Node::Div, 0, -1, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^: -2^2 parses as -(2^2).
  NodePtr unary() {
    skip_ws();
    if (accept('-'))
      return make({Expr::Node::Neg, 0, -1, unary(), nullptr});
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    skip_ws();
    if (accept('^'))
      return make({Expr::Node::Pow, 0, -1, base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of expression at offset " +
                           std::to_string(pos_), pos_);
    char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      NodePtr e = sum();
      skip_ws();
      if (!accept(')'))
        throw ParseError("expected ')' at offset " + std::to_string(pos_),
                         pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_')
      return identifier();
    throw ParseError("unexpected character '" + std::string(1, ch) +
                         "' at offset " + std::to_string(pos_), pos_);
  }

  NodePtr number() {
    std::size_t start = pos_;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(text_.substr(start), &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number at offset " + std::to_string(start),
                       start);
    }
    pos_ = start + used;
    return make({Expr::Node::Const, v, -1, nullptr, nullptr});
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == var_)
      return make({Expr::Node::Var, 0, -1, nullptr, nullptr});
    if (name == "pi")
      return make({Expr::Node::Const, M_PI, -1, nullptr, nullptr});
    if (name == "e")
      return make({Expr::Node::Const, M_E, -1, nullptr, nullptr});
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      for (int i = 0; i < static_cast<int>(std::size(kFunctions)); ++i) {
        if (name == kFunctions[i].name) {
          ++pos_;  // '('
          NodePtr arg = sum();
          skip_ws();
          if (!accept(')'))
            throw ParseError("expected ')' at offset " + std::to_string(pos_),
                             pos_);
          return make({Expr::Node::Call, 0, i, arg, nullptr});
        }
      }
      throw ParseError("unknown function '" + name + "' at offset " +
                           std::to_string(start), start);
    }
    throw ParseError("unknown identifier '" + name + "' at offset " +
                         std::to_string(start), start);
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, double x) {
  switch (n.kind) {
    case Expr::Node::Const: return n.value;
    case Expr::Node::Var: return x;
    case Expr::Node::Neg: return -eval_node(*n.lhs, x);
    case Expr::Node::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Expr::Node::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Expr::Node::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Expr::Node::Div: {
      double d = eval_node(*n.rhs, x);
      if (d == 0.0) throw EvalError("division by zero");
      return eval_node(*n.lhs, x) / d;
    }
    case Expr::Node::Pow: {
      double b = eval_node(*n.lhs, x);
      double p = eval_node(*n.rhs, x);
      double r = std::pow(b, p);
      if (std::isnan(r))
        throw EvalError("pow outside real domain");
      return r;
    }
    case Expr::Node::Call: {
      double r = kFunctions[n.fn].fn(eval_node(*n.lhs, x));
      if (std::isnan(r) || std::isinf(r))
        throw EvalError("non-finite result in function evaluation");
      return r;
    }
  }
  throw EvalError("corrupt expression node");
}

void print_node(const Expr::Node& n, std::ostream& os) {
  // Fully parenthesized; round trip is what matters, not beauty.
  std::ostringstream num;
  switch (n.kind) {
    case Expr::Node::Const:
      num.precision(17);
      num << n.value;
      os << '(' << num.str() << ')';
      return;
    case Expr::Node::Var:
      os << 's';
      return;
    case Expr::Node::Neg:
      os << "(-";
      print_node(*n.lhs, os);
      os << ')';
      return;
    case Expr::Node::Call:
      os << kFunctions[n.fn].name << '(';
      print_node(*n.lhs, os);
      os << ')';
      return;
    default: {
      const char* op = n.kind == Expr::Node::Add   ? "+"
                       : n.kind == Expr::Node::Sub ? "-"
                       : n.kind == Expr::Node::Mul ? "*"
                       : n.kind == Expr::Node::Div ? "/"
                                                   : "^";
      os << '(';
      print_node(*n.lhs, os);
      os << op;
      print_node(*n.rhs, os);
      os << ')';
    }
  }
}

}  // namespace

Expr Expr::parse(const std::string& text, const std::string& var) {
  Expr e;
  e.root_ = Parser(text, var).run();
  e.text_ = text;
  return e;
}

double Expr::eval(double x) const {
  if (!root_) throw EvalError("evaluating empty expression");
  double r = eval_node(*root_, x);
  if (std::isnan(r) || std::isinf(r))
    throw EvalError("non-finite expression value");
  return r;
}

std::string Expr::print() const {
  if (!root_) return "";
  std::ostringstream os;
  print_node(*root_, os);
  return os.str();
}

}  // namespace ruled
