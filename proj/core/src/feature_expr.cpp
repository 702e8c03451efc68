#include "tskfit/feature_expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "tskfit/error.hpp"

namespace tskfit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

}  // namespace

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : src_(text) {}

  FeatureExpr run(std::string name) {
    FeatureExpr expr;
    out_ = &expr;
    expr.text_ = std::string(trim(src_));
    if (expr.text_.empty()) fail("empty expression");
    expression();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    expr.name_ = name.empty() ? expr.text_ : std::move(name);
    return expr;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                "feature expression '" + std::string(trim(src_)) + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  // Normalized operator at the cursor (multi-byte aliases included), or 0.
  char peek_op(std::size_t* width) {
    skip_space();
    if (pos_ >= src_.size()) return 0;
    auto rest = src_.substr(pos_);
    if (rest.starts_with("\xC3\x97")) return *width = 2, '*';      // ×
    if (rest.starts_with("\xC3\xB7")) return *width = 2, '/';      // ÷
    if (rest.starts_with("\xE2\x88\x92")) return *width = 3, '-';  // −
    const char c = rest.front();
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') return *width = 1, c;
    return 0;
  }

  bool accept(char op) {
    std::size_t width = 0;
    if (peek_op(&width) == op) {
      pos_ += width;
      return true;
    }
    return false;
  }

  void emit(FeatureExpr::Op op, double value = 0.0, int index = 0) { out_->program_.push_back({op, value, index}); }

  void expression() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        emit(FeatureExpr::Op::Add);
      } else if (accept('-')) {
        term();
        emit(FeatureExpr::Op::Sub);
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        emit(FeatureExpr::Op::Mul);
      } else if (accept('/')) {
        unary();
        emit(FeatureExpr::Op::Div);
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      emit(FeatureExpr::Op::Neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      skip_space();
      bool negative = false;
      if (accept('-')) negative = true;
      skip_space();
      const auto begin = src_.data() + pos_;
      int exponent = 0;
      auto [ptr, ec] = std::from_chars(begin, src_.data() + src_.size(), exponent);
      if (ec != std::errc() || ptr == begin) fail("expected integer exponent after '^'");
      pos_ += static_cast<std::size_t>(ptr - begin);
      emit(FeatureExpr::Op::Pow, 0.0, negative ? -exponent : exponent);
    }
  }

  void primary() {
    if (accept('(')) {
      expression();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      std::string ident(src_.substr(start, pos_ - start));
      auto& vars = out_->variables_;
      auto it = std::find(vars.begin(), vars.end(), ident);
      const int index = static_cast<int>(it - vars.begin());
      if (it == vars.end()) vars.push_back(std::move(ident));
      emit(FeatureExpr::Op::Var, 0.0, index);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const auto begin = src_.data() + pos_;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(begin, src_.data() + src_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      emit(FeatureExpr::Op::Const, value);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  FeatureExpr* out_ = nullptr;
};

FeatureExpr FeatureExpr::parse(std::string_view text, std::string name) {
  return ExprParser(text).run(std::move(name));
}

double FeatureExpr::evaluate(std::span<const double> values) const {
  if (values.size() != variables_.size()) {
    throw Error(ErrorKind::ArityMismatch, "feature '" + name_ + "' expects " + std::to_string(variables_.size()) +
                                              " variable values, got " + std::to_string(values.size()));
  }
  std::vector<double> stack;
  stack.reserve(program_.size());
  auto pop = [&stack] {
    const double v = stack.back();
    stack.pop_back();
    return v;
  };
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::Const: stack.push_back(ins.value); break;
      case Op::Var: stack.push_back(values[static_cast<std::size_t>(ins.index)]); break;
      case Op::Neg: stack.back() = -stack.back(); break;
      case Op::Pow: {
        const double base = stack.back();
        if (base == 0.0 && ins.index < 0) {
          throw Error(ErrorKind::DivisionByZero, "feature '" + name_ + "' (" + text_ + "): zero to a negative power");
        }
        stack.back() = std::pow(base, ins.index);
        break;
      }
      default: {
        const double rhs = pop();
        const double lhs = pop();
        double v = 0.0;
        if (ins.op == Op::Add) v = lhs + rhs;
        if (ins.op == Op::Sub) v = lhs - rhs;
        if (ins.op == Op::Mul) v = lhs * rhs;
        if (ins.op == Op::Div) {
          if (rhs == 0.0) throw Error(ErrorKind::DivisionByZero, "feature '" + name_ + "' (" + text_ + ") divides by zero");
          v = lhs / rhs;
        }
        stack.push_back(v);
      }
    }
  }
  const double result = stack.back();
  if (!std::isfinite(result)) {
    throw Error(ErrorKind::NonFinite, "feature '" + name_ + "' (" + text_ + ") evaluated to a non-finite value");
  }
  return result;
}

std::vector<FeatureExpr> parse_feature_list(std::string_view text) {
  std::vector<FeatureExpr> out;
  std::set<std::string> names;
  std::size_t start = 0;
  bool in_comment = false;
  std::string item;
  auto flush = [&] {
    const std::string raw = std::move(item);
    item.clear();
    auto body = trim(raw);
    if (body.empty()) return;
    std::string name;
    if (auto eq = body.find('='); eq != std::string_view::npos) {
      name = std::string(trim(body.substr(0, eq)));
      body = trim(body.substr(eq + 1));
      if (name.empty()) throw Error(ErrorKind::ParseError, "feature definition with empty name");
    }
    auto expr = FeatureExpr::parse(body, name);
    if (!names.insert(expr.name()).second) {
      throw Error(ErrorKind::ParseError, "duplicate feature name '" + expr.name() + "'");
    }
    out.push_back(std::move(expr));
  };
  for (; start < text.size(); ++start) {
    const char c = text[start];
    if (c == '\n') {
      in_comment = false;
      flush();
    } else if (in_comment) {
      continue;
    } else if (c == '#') {
      in_comment = true;
    } else if (c == ';' || c == ',') {
      flush();
    } else {
      item.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace tskfit
