#include "liftkit/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace liftkit::expr {

namespace {

struct FuncInfo {
  const char* name;
  Func func;
  int arity;
};

constexpr std::array<FuncInfo, 11> kFunctions{{
    {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1},
    {"tan", Func::Tan, 1},
    {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},
    {"atan", Func::Atan, 1},
    {"tanh", Func::Tanh, 1},
    {"min", Func::Min, 2},
    {"max", Func::Max, 2},
}};

const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

const char* function_name(Func f) {
  for (const auto& info : kFunctions) {
    if (info.func == f) return info.name;
  }
  return "?";
}

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t begin = 0;
  std::size_t end = 0;
  double number = 0.0;
  std::string_view text;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Name: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.begin = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      t.end = pos_;
      return t;
    }
    const char c = src_[pos_];
    // U+2212 MINUS SIGN
    if (src_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      t.kind = Tok::Minus;
      t.end = pos_;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t p = pos_;
      while (p < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[p])) || src_[p] == '.')) ++p;
      if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
        if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
          while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) ++q;
          p = q;
        }
      }
      const auto res = std::from_chars(src_.data() + pos_, src_.data() + p, t.number);
      if (res.ec != std::errc() || res.ptr != src_.data() + p) {
        throw ParseError("malformed number", pos_, {"number"});
      }
      t.kind = Tok::Number;
      pos_ = p;
      t.end = pos_;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t p = pos_;
      while (p < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_')) ++p;
      t.kind = Tok::Name;
      t.text = src_.substr(pos_, p - pos_);
      pos_ = p;
      t.end = pos_;
      return t;
    }
    ++pos_;
    t.end = pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", t.begin,
                         {"number", "identifier", "'('", "'-'"});
    }
    return t;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : lex_(src), vars_(vars) {
    advance();
  }

  // Tuple form "(e1, e2, ...)" spanning the whole input.
  std::vector<int> parse_tuple() {
    expect(Tok::LParen);
    std::vector<int> roots{parse_expr()};
    while (cur_.kind == Tok::Comma) {
      advance();
      roots.push_back(parse_expr());
    }
    expect(Tok::RParen);
    expect_end();
    return roots;
  }

  int parse_single() {
    const int root = parse_expr();
    expect_end();
    return root;
  }

  std::vector<Node> take_nodes() { return std::move(nodes_); }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(std::vector<Tok> expected) const {
    std::vector<std::string> names;
    std::string msg = "syntax error at offset " + std::to_string(cur_.begin) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      names.emplace_back(describe(expected[i]));
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += names.back();
    }
    msg += ", found " + std::string(describe(cur_.kind));
    throw ParseError(msg, cur_.begin, std::move(names));
  }

  void expect(Tok k) {
    if (cur_.kind != k) fail({k});
    advance();
  }

  void expect_end() {
    if (cur_.kind != Tok::End) {
      fail({Tok::End, Tok::Plus, Tok::Minus, Tok::Star, Tok::Slash, Tok::Caret});
    }
  }

  int add(Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(Op op, int l, int r) {
    Node n;
    n.op = op;
    n.lhs = l;
    n.rhs = r;
    n.span = {nodes_[l].span.begin, nodes_[r].span.end};
    return add(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      lhs = binary(op, lhs, parse_term());
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      lhs = binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  int parse_factor() {
    const int base = parse_atom();
    if (cur_.kind == Tok::Caret) {
      advance();
      return binary(Op::Pow, base, parse_factor());
    }
    return base;
  }

  int parse_atom() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::Number: {
        advance();
        Node n;
        n.op = Op::Const;
        n.value = t.number;
        n.span = {t.begin, t.end};
        return add(n);
      }
      case Tok::Minus: {
        advance();
        const int inner = parse_atom();
        Node n;
        n.op = Op::Neg;
        n.lhs = inner;
        n.span = {t.begin, nodes_[inner].span.end};
        return add(n);
      }
      case Tok::LParen: {
        advance();
        const int inner = parse_expr();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Name: {
        advance();
        if (cur_.kind == Tok::LParen) return parse_call(t);
        const auto it = std::find(vars_.begin(), vars_.end(), t.text);
        Node n;
        n.span = {t.begin, t.end};
        if (it != vars_.end()) {
          n.op = Op::Var;
          n.var = static_cast<int>(it - vars_.begin());
        } else if (t.text == "pi") {
          n.op = Op::Const;
          n.value = std::numbers::pi;
        } else if (find_function(t.text)) {
          throw ParseError("function '" + std::string(t.text) + "' requires arguments", t.end, {"'('"});
        } else {
          throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.begin, {"identifier"});
        }
        return add(n);
      }
      default:
        fail({Tok::Number, Tok::Name, Tok::LParen, Tok::Minus});
    }
  }

  int parse_call(const Token& name) {
    const FuncInfo* info = find_function(name.text);
    if (!info) {
      throw ParseError("unknown function '" + std::string(name.text) + "'", name.begin, {"function name"});
    }
    expect(Tok::LParen);
    std::vector<int> args{parse_expr()};
    while (cur_.kind == Tok::Comma) {
      advance();
      args.push_back(parse_expr());
    }
    const std::size_t close = cur_.end;
    expect(Tok::RParen);
    if (static_cast<int>(args.size()) != info->arity) {
      throw ParseError("arity mismatch: " + std::string(info->name) + " takes " + std::to_string(info->arity) +
                           " argument(s), got " + std::to_string(args.size()),
                       name.begin, {});
    }
    Node n;
    n.op = Op::Call;
    n.func = info->func;
    n.lhs = args[0];
    if (args.size() > 1) n.rhs = args[1];
    n.span = {name.begin, close};
    return add(n);
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
  Token cur_;
  std::vector<Node> nodes_;
};

// Scalar semantics shared by the double and dual evaluators.

[[noreturn]] void domain_fail(const std::string& what, const Node& n) { throw EvalDomainError(what, n.span); }

double checked(double v, const Node& n) {
  if (!std::isfinite(v)) domain_fail("non-finite intermediate value", n);
  return v;
}

Dual checked(Dual v, const Node& n) {
  if (!std::isfinite(v.v) || !std::isfinite(v.d)) domain_fail("non-finite intermediate value", n);
  return v;
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

double ipow(double b, long long e) {
  double result = 1.0;
  bool neg = e < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  while (k) {
    if (k & 1ULL) result *= b;
    b *= b;
    k >>= 1ULL;
  }
  return neg ? 1.0 / result : result;
}

double power(double b, double e, const Node& n) {
  if (b == 0.0 && e < 0.0) domain_fail("zero raised to a negative power", n);
  if (is_integer(e)) return ipow(b, static_cast<long long>(e));
  if (b < 0.0) domain_fail("negative base with non-integer exponent", n);
  return std::pow(b, e);
}

double apply(Func f, double a, double b, const Node& n) {
  switch (f) {
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Tan: return std::tan(a);
    case Func::Exp: return std::exp(a);
    case Func::Log:
      if (a <= 0.0) domain_fail("log of a non-positive value", n);
      return std::log(a);
    case Func::Sqrt:
      if (a < 0.0) domain_fail("sqrt of a negative value", n);
      return std::sqrt(a);
    case Func::Abs: return std::abs(a);
    case Func::Atan: return std::atan(a);
    case Func::Tanh: return std::tanh(a);
    case Func::Min: return std::min(a, b);
    case Func::Max: return std::max(a, b);
  }
  return 0.0;
}

Dual apply(Func f, Dual a, Dual b, const Node& n) {
  switch (f) {
    case Func::Sin: return {std::sin(a.v), std::cos(a.v) * a.d};
    case Func::Cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
    case Func::Tan: {
      const double t = std::tan(a.v);
      return {t, (1.0 + t * t) * a.d};
    }
    case Func::Exp: {
      const double e = std::exp(a.v);
      return {e, e * a.d};
    }
    case Func::Log:
      if (a.v <= 0.0) domain_fail("log of a non-positive value", n);
      return {std::log(a.v), a.d / a.v};
    case Func::Sqrt: {
      if (a.v < 0.0) domain_fail("sqrt of a negative value", n);
      const double s = std::sqrt(a.v);
      if (s == 0.0) {
        if (a.d != 0.0) domain_fail("sqrt is not differentiable at 0", n);
        return {0.0, 0.0};
      }
      return {s, a.d / (2.0 * s)};
    }
    case Func::Abs: {
      const double sign = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
      return {std::abs(a.v), sign * a.d};
    }
    case Func::Atan: return {std::atan(a.v), a.d / (1.0 + a.v * a.v)};
    case Func::Tanh: {
      const double t = std::tanh(a.v);
      return {t, (1.0 - t * t) * a.d};
    }
    case Func::Min: return a.v <= b.v ? a : b;
    case Func::Max: return a.v >= b.v ? a : b;
  }
  return {};
}

struct Evaluator {
  const std::vector<Node>& nodes;
  const Eigen::VectorXd& x;
  int seed;

  double value(int i) const {
    const Node& n = nodes[i];
    switch (n.op) {
      case Op::Const: return n.value;
      case Op::Var: return x[n.var];
      case Op::Neg: return -value(n.lhs);
      case Op::Add: return checked(value(n.lhs) + value(n.rhs), n);
      case Op::Sub: return checked(value(n.lhs) - value(n.rhs), n);
      case Op::Mul: return checked(value(n.lhs) * value(n.rhs), n);
      case Op::Div: {
        const double a = value(n.lhs);
        const double b = value(n.rhs);
        if (b == 0.0) domain_fail("division by zero", n);
        return checked(a / b, n);
      }
      case Op::Pow: return checked(power(value(n.lhs), value(n.rhs), n), n);
      case Op::Call: {
        const double a = value(n.lhs);
        const double b = n.rhs >= 0 ? value(n.rhs) : 0.0;
        return checked(apply(n.func, a, b, n), n);
      }
    }
    return 0.0;
  }

  Dual dual(int i) const {
    const Node& n = nodes[i];
    switch (n.op) {
      case Op::Const: return {n.value, 0.0};
      case Op::Var: return {x[n.var], n.var == seed ? 1.0 : 0.0};
      case Op::Neg: {
        const Dual a = dual(n.lhs);
        return {-a.v, -a.d};
      }
      case Op::Add: {
        const Dual a = dual(n.lhs);
        const Dual b = dual(n.rhs);
        return checked(Dual{a.v + b.v, a.d + b.d}, n);
      }
      case Op::Sub: {
        const Dual a = dual(n.lhs);
        const Dual b = dual(n.rhs);
        return checked(Dual{a.v - b.v, a.d - b.d}, n);
      }
      case Op::Mul: {
        const Dual a = dual(n.lhs);
        const Dual b = dual(n.rhs);
        return checked(Dual{a.v * b.v, a.d * b.v + a.v * b.d}, n);
      }
      case Op::Div: {
        const Dual a = dual(n.lhs);
        const Dual b = dual(n.rhs);
        if (b.v == 0.0) domain_fail("division by zero", n);
        return checked(Dual{a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}, n);
      }
      case Op::Pow: {
        const Dual a = dual(n.lhs);
        const Dual b = dual(n.rhs);
        const double v = power(a.v, b.v, n);
        double d = 0.0;
        if (a.d != 0.0) {
          // d/da a^b = b a^(b-1)
          d += b.v == 0.0 ? 0.0 : b.v * power(a.v, b.v - 1.0, n) * a.d;
        }
        if (b.d != 0.0) {
          if (a.v > 0.0) {
            d += v * std::log(a.v) * b.d;
          } else if (!(a.v == 0.0 && b.v > 0.0)) {
            domain_fail("exponent derivative undefined for non-positive base", n);
          }
        }
        return checked(Dual{v, d}, n);
      }
      case Op::Call: {
        const Dual a = dual(n.lhs);
        const Dual b = n.rhs >= 0 ? dual(n.rhs) : Dual{};
        return checked(apply(n.func, a, b, n), n);
      }
    }
    return {};
  }
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const std::vector<Node>& nodes, int i, const std::vector<std::string>& vars) {
  const Node& n = nodes[i];
  auto bin = [&](const char* op) {
    return "(" + print(nodes, n.lhs, vars) + " " + op + " " + print(nodes, n.rhs, vars) + ")";
  };
  switch (n.op) {
    case Op::Const: return format_number(n.value);
    case Op::Var: return vars[n.var];
    case Op::Neg: return "(-" + print(nodes, n.lhs, vars) + ")";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return bin("^");
    case Op::Call: {
      std::string s = std::string(function_name(n.func)) + "(" + print(nodes, n.lhs, vars);
      if (n.rhs >= 0) s += ", " + print(nodes, n.rhs, vars);
      return s + ")";
    }
  }
  return {};
}

void check_arity(const Ast& a, const Eigen::VectorXd& x) {
  if (x.size() != a.arity()) {
    throw InputError("expression expects " + std::to_string(a.arity()) + " variable(s), got " +
                     std::to_string(x.size()));
  }
}

}  // namespace

Ast::Ast(std::vector<Node> nodes, int root, std::shared_ptr<const std::vector<std::string>> vars)
    : nodes_(std::move(nodes)), root_(root), vars_(std::move(vars)) {}

double Ast::eval(const Eigen::VectorXd& x) const {
  check_arity(*this, x);
  return Evaluator{nodes_, x, -1}.value(root_);
}

Dual Ast::eval_dual(const Eigen::VectorXd& x, int seed) const {
  check_arity(*this, x);
  return Evaluator{nodes_, x, seed}.dual(root_);
}

std::string Ast::to_string() const { return print(nodes_, root_, *vars_); }

std::vector<Ast> parse(std::string_view source, const std::vector<std::string>& variables) {
  auto vars = std::make_shared<const std::vector<std::string>>(variables);
  for (const auto& v : variables) {
    if (find_function(v)) throw InputError("variable name '" + v + "' shadows a function");
  }

  // Tuple form first; fall back to a single expression ("(x+1)*2" starts with
  // a parenthesis too). Report whichever attempt got further.
  std::vector<Ast> out;
  std::size_t first_non_space = 0;
  while (first_non_space < source.size() && std::isspace(static_cast<unsigned char>(source[first_non_space]))) {
    ++first_non_space;
  }
  if (first_non_space < source.size() && source[first_non_space] == '(') {
    try {
      Parser p(source, *vars);
      auto roots = p.parse_tuple();
      auto nodes = p.take_nodes();
      for (int r : roots) out.emplace_back(nodes, r, vars);
      return out;
    } catch (const ParseError& tuple_err) {
      try {
        Parser p(source, *vars);
        const int r = p.parse_single();
        out.emplace_back(p.take_nodes(), r, vars);
        return out;
      } catch (const ParseError& single_err) {
        if (tuple_err.offset() >= single_err.offset()) throw tuple_err;
        throw;
      }
    }
  }
  Parser p(source, *vars);
  const int r = p.parse_single();
  out.emplace_back(p.take_nodes(), r, vars);
  return out;
}

Ast parse_scalar(std::string_view source, const std::vector<std::string>& variables) {
  auto comps = parse(source, variables);
  if (comps.size() != 1) {
    throw InputError("expected a scalar expression, got " + std::to_string(comps.size()) + " components");
  }
  return std::move(comps.front());
}

Eigen::VectorXd eval(const std::vector<Ast>& components, const Eigen::VectorXd& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(components.size()));
  for (std::size_t i = 0; i < components.size(); ++i) out[static_cast<Eigen::Index>(i)] = components[i].eval(x);
  return out;
}

Eigen::MatrixXd jacobian_ad(const std::vector<Ast>& components, const Eigen::VectorXd& x) {
  const auto rows = static_cast<Eigen::Index>(components.size());
  Eigen::MatrixXd jac(rows, x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      jac(i, j) = components[static_cast<std::size_t>(i)].eval_dual(x, static_cast<int>(j)).d;
    }
  }
  return jac;
}

std::string to_string(const std::vector<Ast>& components) {
  if (components.size() == 1) return components.front().to_string();
  std::string s = "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) s += ", ";
    s += components[i].to_string();
  }
  return s + ")";
}

std::vector<std::string> free_names(std::string_view source) {
  std::set<std::string> names;
  Lexer lex(source);
  Token prev;
  for (Token t = lex.next(); t.kind != Tok::End; t = lex.next()) {
    if (prev.kind == Tok::Name && t.kind != Tok::LParen) names.emplace(prev.text);
    prev = t;
  }
  if (prev.kind == Tok::Name) names.emplace(prev.text);
  names.erase("pi");

  static const std::array<const char*, 4> kPreferred{"x", "y", "z", "w"};
  std::vector<std::string> ordered;
  for (const char* p : kPreferred) {
    if (names.erase(p)) ordered.emplace_back(p);
  }
  ordered.insert(ordered.end(), names.begin(), names.end());
  return ordered;
}

}  // namespace liftkit::expr
