#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tskfit {

// Arithmetic expression over named raw columns, e.g. "v1*v4+v3" or "v2/v1".
//
// Grammar (standard precedence, left associative):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number | identifier | '(' expr ')'
// '×', '÷' and '−' are accepted as aliases of '*', '/' and '-'.
class FeatureExpr {
 public:
  // `name` defaults to the trimmed expression text.
  static FeatureExpr parse(std::string_view text, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  const std::string& text() const noexcept { return text_; }
  // Distinct identifiers in order of first appearance.
  const std::vector<std::string>& variables() const noexcept { return variables_; }

  // `values[k]` is the value of variables()[k]. Throws DivisionByZero or
  // NonFinite; callers attach row context.
  double evaluate(std::span<const double> values) const;

  friend bool operator==(const FeatureExpr& a, const FeatureExpr& b) {
    return a.name_ == b.name_ && a.text_ == b.text_;
  }

  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow };
  struct Instr {
    Op op;
    double value = 0.0;
    int index = 0;
  };

 private:
  FeatureExpr() = default;

  std::string name_;
  std::string text_;
  std::vector<std::string> variables_;
  std::vector<Instr> program_;  // postfix

  friend class ExprParser;
};

// "m1=v1; m3=v1*v4+v3, v2/v1" -> three features. Items are separated by
// ';', ',' or newlines; '#' starts a comment; an item without '=' is named
// by its own text.
std::vector<FeatureExpr> parse_feature_list(std::string_view text);

}  // namespace tskfit
