#include "mselab/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mselab/error.hpp"

namespace mselab {

namespace {

enum class Op : unsigned char {
  Const, X1, X2, X3, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt
};

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div ||
         op == Op::Pow;
}

}  // namespace

struct Expr::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double v) {
  return std::make_shared<const Expr::Node>(Expr::Node{Op::Const, v, nullptr, nullptr});
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

double apply_unary(Op op, double x) {
  switch (op) {
    case Op::Neg: return -x;
    case Op::Sin: return std::sin(x);
    case Op::Cos: return std::cos(x);
    case Op::Exp: return std::exp(x);
    case Op::Log: return std::log(x);
    case Op::Sqrt: return std::sqrt(x);
    default: return 0.0;
  }
}

double apply_binary(Op op, double x, double y) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div: return x / y;
    case Op::Pow: {
      // Integer exponents take the repeated-multiplication path so that
      // negative bases work and results match hand-expanded products.
      if (y == std::round(y) && std::abs(y) <= 16.0) {
        int k = static_cast<int>(y);
        double r = 1.0;
        double base = k < 0 ? 1.0 / x : x;
        for (int i = 0; i < std::abs(k); ++i) r *= base;
        return r;
      }
      return std::pow(x, y);
    }
    default: return 0.0;
  }
}

NodePtr make_unary(Op op, NodePtr a) {
  if (is_const(a)) return make_const(apply_unary(op, a->value));
  if (op == Op::Neg && a->op == Op::Neg) return a->a;
  return std::make_shared<const Expr::Node>(Expr::Node{op, 0.0, std::move(a), nullptr});
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(apply_binary(op, a->value, b->value));
  switch (op) {
    case Op::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      if (b->op == Op::Neg) return make_binary(Op::Sub, a, b->a);
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_unary(Op::Neg, b);
      if (b->op == Op::Neg) return make_binary(Op::Add, a, b->a);
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (is_const(a, -1.0)) return make_unary(Op::Neg, b);
      if (is_const(b, -1.0)) return make_unary(Op::Neg, a);
      if (is_const(b) && !is_const(a)) return make_binary(Op::Mul, b, a);
      if (is_const(a) && b->op == Op::Mul && is_const(b->a))
        return make_binary(Op::Mul, make_const(a->value * b->a->value), b->b);
      break;
    case Op::Div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 0.0)) return make_const(1.0);
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0) && is_const(b) && b->value > 0.0) return make_const(0.0);
      break;
    default: break;
  }
  return std::make_shared<const Expr::Node>(Expr::Node{op, 0.0, std::move(a), std::move(b)});
}

NodePtr diff_node(const NodePtr& n, Op var) {
  switch (n->op) {
    case Op::Const: return make_const(0.0);
    case Op::X1:
    case Op::X2:
    case Op::X3: return make_const(n->op == var ? 1.0 : 0.0);
    case Op::Neg: return make_unary(Op::Neg, diff_node(n->a, var));
    case Op::Add: return make_binary(Op::Add, diff_node(n->a, var), diff_node(n->b, var));
    case Op::Sub: return make_binary(Op::Sub, diff_node(n->a, var), diff_node(n->b, var));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, diff_node(n->a, var), n->b),
                         make_binary(Op::Mul, n->a, diff_node(n->b, var)));
    case Op::Div: {
      // (a/b)' = a'/b - a b'/b^2
      auto da = diff_node(n->a, var);
      auto db = diff_node(n->b, var);
      auto t1 = make_binary(Op::Div, da, n->b);
      if (is_const(db, 0.0)) return t1;
      auto t2 = make_binary(Op::Div, make_binary(Op::Mul, n->a, db),
                            make_binary(Op::Mul, n->b, n->b));
      return make_binary(Op::Sub, t1, t2);
    }
    case Op::Pow: {
      auto da = diff_node(n->a, var);
      if (is_const(n->b)) {
        double k = n->b->value;
        return make_binary(Op::Mul,
                           make_binary(Op::Mul, make_const(k),
                                       make_binary(Op::Pow, n->a, make_const(k - 1.0))),
                           da);
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      auto db = diff_node(n->b, var);
      auto inner = make_binary(
          Op::Add, make_binary(Op::Mul, db, make_unary(Op::Log, n->a)),
          make_binary(Op::Div, make_binary(Op::Mul, n->b, da), n->a));
      return make_binary(Op::Mul, n, inner);
    }
    case Op::Sin:
      return make_binary(Op::Mul, make_unary(Op::Cos, n->a), diff_node(n->a, var));
    case Op::Cos:
      return make_unary(Op::Neg,
                        make_binary(Op::Mul, make_unary(Op::Sin, n->a), diff_node(n->a, var)));
    case Op::Exp: return make_binary(Op::Mul, n, diff_node(n->a, var));
    case Op::Log: return make_binary(Op::Div, diff_node(n->a, var), n->a);
    case Op::Sqrt:
      return make_binary(Op::Div, diff_node(n->a, var), make_binary(Op::Mul, make_const(2.0), n));
  }
  return make_const(0.0);
}

NodePtr substitute_x3(const NodePtr& n, double value) {
  switch (n->op) {
    case Op::X3: return make_const(value);
    case Op::Const:
    case Op::X1:
    case Op::X2: return n;
    default: break;
  }
  if (is_binary(n->op))
    return make_binary(n->op, substitute_x3(n->a, value), substitute_x3(n->b, value));
  return make_unary(n->op, substitute_x3(n->a, value));
}

bool mentions(const NodePtr& n, Op var) {
  if (n->op == var) return true;
  if (n->a && mentions(n->a, var)) return true;
  if (n->b && mentions(n->b, var)) return true;
  return false;
}

void print(const NodePtr& n, std::ostringstream& os) {
  switch (n->op) {
    case Op::Const: {
      std::ostringstream v;
      v.precision(17);
      v << n->value;
      if (n->value < 0) os << '(' << v.str() << ')';
      else os << v.str();
      return;
    }
    case Op::X1: os << "x1"; return;
    case Op::X2: os << "x2"; return;
    case Op::X3: os << "x3"; return;
    case Op::Neg: os << "(-"; print(n->a, os); os << ')'; return;
    case Op::Sin: os << "sin("; print(n->a, os); os << ')'; return;
    case Op::Cos: os << "cos("; print(n->a, os); os << ')'; return;
    case Op::Exp: os << "exp("; print(n->a, os); os << ')'; return;
    case Op::Log: os << "log("; print(n->a, os); os << ')'; return;
    case Op::Sqrt: os << "sqrt("; print(n->a, os); os << ')'; return;
    default: break;
  }
  const char* sym = n->op == Op::Add ? "+" : n->op == Op::Sub ? "-" : n->op == Op::Mul ? "*"
                  : n->op == Op::Div ? "/" : "^";
  os << '(';
  print(n->a, os);
  os << sym;
  print(n->b, os);
  os << ')';
}

// ---------------------------------------------------------------- parser

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr n = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(s_) + "': " + msg + " at offset " +
                     std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expression();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string tok(s_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("bad number '" + tok + "'");
    }
    if (used != tok.size()) fail("bad number '" + tok + "'");
    return make_const(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    if (id == "x1") return std::make_shared<const Expr::Node>(Expr::Node{Op::X1, 0.0, nullptr, nullptr});
    if (id == "x2") return std::make_shared<const Expr::Node>(Expr::Node{Op::X2, 0.0, nullptr, nullptr});
    if (id == "x3" || id == "xn")
      return std::make_shared<const Expr::Node>(Expr::Node{Op::X3, 0.0, nullptr, nullptr});
    if (id == "pi") return make_const(std::numbers::pi);
    if (id == "e") return make_const(std::numbers::e);
    Op fn;
    if (id == "sin") fn = Op::Sin;
    else if (id == "cos") fn = Op::Cos;
    else if (id == "exp") fn = Op::Exp;
    else if (id == "log") fn = Op::Log;
    else if (id == "sqrt") fn = Op::Sqrt;
    else fail("unknown identifier '" + id + "'");
    if (!accept('(')) fail("expected '(' after " + id);
    NodePtr arg = expression();
    if (!accept(')')) fail("expected ')'");
    return make_unary(fn, arg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void emit(const NodePtr& n, std::vector<unsigned char>& ops, std::vector<double>& consts,
          int depth, int& max_depth) {
  if (n->a) emit(n->a, ops, consts, depth, max_depth);
  if (n->b) emit(n->b, ops, consts, depth + 1, max_depth);
  if (n->op == Op::Const) consts.push_back(n->value);
  ops.push_back(static_cast<unsigned char>(n->op));
  max_depth = std::max(max_depth, depth + 2);
}

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double value) : node_(make_const(value)) { compile(); }

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) { compile(); }

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

Expr Expr::variable(Var v) {
  Op op = v == Expr::Var::x1 ? Op::X1 : v == Expr::Var::x2 ? Op::X2 : Op::X3;
  return Expr(std::make_shared<const Node>(Node{op, 0.0, nullptr, nullptr}));
}

void Expr::compile() {
  auto prog = std::make_shared<Program>();
  emit(node_, prog->ops, prog->constants, 0, prog->max_depth);
  program_ = std::move(prog);
}

double Expr::eval(double x1, double x2, double x3) const {
  const Program& p = *program_;
  std::array<double, 64> small{};
  std::vector<double> big;
  double* st = small.data();
  if (p.max_depth > static_cast<int>(small.size())) {
    big.resize(static_cast<std::size_t>(p.max_depth));
    st = big.data();
  }
  int top = 0;
  std::size_t ci = 0;
  for (unsigned char raw : p.ops) {
    Op op = static_cast<Op>(raw);
    switch (op) {
      case Op::Const: st[top++] = p.constants[ci++]; break;
      case Op::X1: st[top++] = x1; break;
      case Op::X2: st[top++] = x2; break;
      case Op::X3: st[top++] = x3; break;
      case Op::Neg:
      case Op::Sin:
      case Op::Cos:
      case Op::Exp:
      case Op::Log:
      case Op::Sqrt: st[top - 1] = apply_unary(op, st[top - 1]); break;
      default:
        --top;
        st[top - 1] = apply_binary(op, st[top - 1], st[top]);
        break;
    }
  }
  return st[0];
}

Expr Expr::diff(Var v) const {
  Op op = v == Expr::Var::x1 ? Op::X1 : v == Expr::Var::x2 ? Op::X2 : Op::X3;
  return Expr(diff_node(node_, op));
}

Expr Expr::diff(Var v, int order) const {
  Expr r = *this;
  for (int k = 0; k < order; ++k) r = r.diff(v);
  return r;
}

Expr Expr::at_x3(double value) const { return Expr(substitute_x3(node_, value)); }

bool Expr::is_constant() const { return node_->op == Op::Const; }

bool Expr::is_zero() const { return is_const(node_, 0.0); }

bool Expr::depends_on(Var v) const {
  Op op = v == Expr::Var::x1 ? Op::X1 : v == Expr::Var::x2 ? Op::X2 : Op::X3;
  return mentions(node_, op);
}

std::string Expr::str() const {
  std::ostringstream os;
  print(node_, os);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_binary(Op::Add, a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_binary(Op::Sub, a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_binary(Op::Mul, a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_binary(Op::Div, a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(make_unary(Op::Neg, a.node_)); }
Expr pow(const Expr& a, const Expr& b) { return Expr(make_binary(Op::Pow, a.node_, b.node_)); }
Expr sin(const Expr& a) { return Expr(make_unary(Op::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make_unary(Op::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(make_unary(Op::Exp, a.node_)); }
Expr log(const Expr& a) { return Expr(make_unary(Op::Log, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(make_unary(Op::Sqrt, a.node_)); }

}  // namespace mselab
