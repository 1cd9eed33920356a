#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mselab {

/// Closed-form scalar expression in the coordinates x1, x2 and the
/// transversal coordinate x3 (alias `xn`).
///
/// Grammar: `+ - * / ^`, unary minus, parentheses, numeric literals,
/// the constants `pi` and `e`, and the functions `sin cos exp log sqrt`.
/// `^` is right associative and binds tighter than unary minus, so
/// `-x1^2` is `-(x1^2)`.
///
/// Expressions are immutable values; derivatives are taken symbolically and
/// lightly simplified (constant folding, 0/1 identities). Evaluation goes
/// through a flattened postfix program built once per expression.
class Expr {
public:
  enum class Var { x1 = 0, x2 = 1, x3 = 2 };

  Expr();  // the constant 0
  explicit Expr(double value);

  static Expr parse(std::string_view text);
  static Expr constant(double value) { return Expr(value); }
  static Expr variable(Var v);

  [[nodiscard]] double eval(double x1, double x2, double x3 = 0.0) const;
  [[nodiscard]] Expr diff(Var v) const;
  [[nodiscard]] Expr diff(Var v, int order) const;

  /// Replace x3 by a constant.
  [[nodiscard]] Expr at_x3(double value) const;

  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] bool is_zero() const;
  /// True if the expression tree mentions the variable.
  [[nodiscard]] bool depends_on(Var v) const;
  [[nodiscard]] std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> node);
  void compile();

  struct Program {
    std::vector<unsigned char> ops;
    std::vector<double> constants;
    int max_depth = 0;
  };

  std::shared_ptr<const Node> node_;
  std::shared_ptr<const Program> program_;
};

}  // namespace mselab
