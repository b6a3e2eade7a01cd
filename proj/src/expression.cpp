#include "gmp/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <vector>

#include "gmp/output.hpp"

namespace gmp {

ParseError::ParseError(const std::string& msg, int ln, int col)
    : ConfigError("line " + std::to_string(ln) + ", column " + std::to_string(col) + ": " + msg),
      line(ln),
      column(col),
      message(msg) {}

enum class Op { Const, VarT, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Tanh, Min, Max, Pow, Step, If };

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  Fn fn = Fn::Sin;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_op(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

struct FnInfo {
  std::string_view name;
  Fn fn;
  int arity;
};

constexpr FnInfo kFunctions[] = {
    {"sin", Fn::Sin, 1},   {"cos", Fn::Cos, 1},   {"tan", Fn::Tan, 1},   {"exp", Fn::Exp, 1},
    {"log", Fn::Log, 1},   {"sqrt", Fn::Sqrt, 1}, {"abs", Fn::Abs, 1},   {"tanh", Fn::Tanh, 1},
    {"min", Fn::Min, 2},   {"max", Fn::Max, 2},   {"pow", Fn::Pow, 2},   {"step", Fn::Step, 1},
    {"if", Fn::If, 3},
};

class Parser {
 public:
  Parser(std::string_view text, int line, int offset) : s_(text), line_(line), offset_(offset) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, offset_ + static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_op(Op::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make_op(Op::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_op(Op::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make_op(Op::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_op(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_op(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        pos_ = look;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      pos_ = start;
      fail("malformed number '" + tok + "'");
    }
    return make_const(v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      for (const auto& info : kFunctions) {
        if (info.name != id) continue;
        ++pos_;
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        if (static_cast<int>(args.size()) != info.arity) {
          pos_ = start;
          fail("function '" + std::string(id) + "' takes " + std::to_string(info.arity) + " argument(s)");
        }
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::Call;
        n->fn = info.fn;
        n->args = std::move(args);
        return n;
      }
      pos_ = start;
      fail("unknown function '" + std::string(id) + "'");
    }
    if (id == "t") return make_op(Op::VarT, {});
    if (id == "x") return make_op(Op::VarX, {});
    if (id == "y") return make_op(Op::VarY, {});
    if (id == "pi") return make_const(std::numbers::pi);
    if (id == "e") return make_const(std::numbers::e);
    pos_ = start;
    fail("unknown variable '" + std::string(id) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  int offset_;
};

double eval(const Expression::Node& n, double t, double x, double y) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::VarT:
      return t;
    case Op::VarX:
      return x;
    case Op::VarY:
      return y;
    case Op::Neg:
      return -eval(*n.args[0], t, x, y);
    case Op::Add:
      return eval(*n.args[0], t, x, y) + eval(*n.args[1], t, x, y);
    case Op::Sub:
      return eval(*n.args[0], t, x, y) - eval(*n.args[1], t, x, y);
    case Op::Mul:
      return eval(*n.args[0], t, x, y) * eval(*n.args[1], t, x, y);
    case Op::Div:
      return eval(*n.args[0], t, x, y) / eval(*n.args[1], t, x, y);
    case Op::Pow:
      return std::pow(eval(*n.args[0], t, x, y), eval(*n.args[1], t, x, y));
    case Op::Call:
      break;
  }
  auto arg = [&](int k) { return eval(*n.args[static_cast<std::size_t>(k)], t, x, y); };
  switch (n.fn) {
    case Fn::Sin:
      return std::sin(arg(0));
    case Fn::Cos:
      return std::cos(arg(0));
    case Fn::Tan:
      return std::tan(arg(0));
    case Fn::Exp:
      return std::exp(arg(0));
    case Fn::Log:
      return std::log(arg(0));
    case Fn::Sqrt:
      return std::sqrt(arg(0));
    case Fn::Abs:
      return std::abs(arg(0));
    case Fn::Tanh:
      return std::tanh(arg(0));
    case Fn::Min:
      return std::min(arg(0), arg(1));
    case Fn::Max:
      return std::max(arg(0), arg(1));
    case Fn::Pow:
      return std::pow(arg(0), arg(1));
    case Fn::Step:
      return arg(0) >= 0.0 ? 1.0 : 0.0;
    case Fn::If:
      return arg(0) > 0.0 ? arg(1) : arg(2);
  }
  return 0.0;
}

bool uses_time(const Expression::Node& n) {
  if (n.op == Op::VarT) return true;
  for (const auto& a : n.args)
    if (uses_time(*a)) return true;
  return false;
}

}  // namespace

Expression::Expression() : root_(make_const(0.0)), text_("0") {}

Expression Expression::parse(std::string_view text, int line, int column_offset) {
  Expression e;
  e.root_ = Parser(text, line, column_offset).parse();
  e.text_ = std::string(text);
  while (!e.text_.empty() && (e.text_.back() == ' ' || e.text_.back() == '\t')) e.text_.pop_back();
  while (!e.text_.empty() && (e.text_.front() == ' ' || e.text_.front() == '\t')) e.text_.erase(0, 1);
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.root_ = make_const(value);
  e.text_ = format_number(value);
  return e;
}

double Expression::operator()(double t, double x, double y) const { return eval(*root_, t, x, y); }

bool Expression::depends_on_time() const { return uses_time(*root_); }

}  // namespace gmp
