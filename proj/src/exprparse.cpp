#include "usp/exprparse.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace usp {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Const final : Expr {
  double v;
  explicit Const(double v) : v(v) {}
  double eval(double, double) const override { return v; }
  std::string print() const override { return fmt_double(v); }
};

struct NamedConst final : Expr {
  std::string name;
  double v;
  NamedConst(std::string n, double v) : name(std::move(n)), v(v) {}
  double eval(double, double) const override { return v; }
  std::string print() const override { return name; }
};

struct Var final : Expr {
  char name;
  explicit Var(char c) : name(c) {}
  double eval(double x, double y) const override { return name == 'x' ? x : y; }
  std::string print() const override { return std::string(1, name); }
};

struct Neg final : Expr {
  ExprPtr a;
  explicit Neg(ExprPtr a) : a(std::move(a)) {}
  double eval(double x, double y) const override { return -a->eval(x, y); }
  std::string print() const override { return "(-" + a->print() + ")"; }
};

struct Bin final : Expr {
  char op;
  ExprPtr a, b;
  Bin(char op, ExprPtr a, ExprPtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
  double eval(double x, double y) const override {
    double u = a->eval(x, y), v = b->eval(x, y);
    switch (op) {
      case '+': return u + v;
      case '-': return u - v;
      case '*': return u * v;
      case '/':
        if (v == 0.0) throw DomainError("division by zero in " + print());
        return u / v;
      default: {
        double r = std::pow(u, v);
        if (!std::isfinite(r)) throw DomainError("non-finite power in " + print());
        return r;
      }
    }
  }
  std::string print() const override {
    return "(" + a->print() + op + b->print() + ")";
  }
};

struct Call final : Expr {
  std::string fn;
  ExprPtr a;
  Call(std::string fn, ExprPtr a) : fn(std::move(fn)), a(std::move(a)) {}
  double eval(double x, double y) const override {
    double v = a->eval(x, y);
    if (fn == "sin") return std::sin(v);
    if (fn == "cos") return std::cos(v);
    if (fn == "exp") return std::exp(v);
    if (fn == "abs") return std::abs(v);
    if (fn == "log") {
      if (v <= 0.0) throw DomainError("log of nonpositive value in " + print());
      return std::log(v);
    }
    // sqrt
    if (v < 0.0) throw DomainError("sqrt of negative value in " + print());
    return std::sqrt(v);
  }
  std::string print() const override { return fn + "(" + a->print() + ")"; }
};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr run() {
    ExprPtr e = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at byte " + std::to_string(pos_), pos_);
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

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr sum() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+'))
        e = std::make_shared<Bin>('+', e, term());
      else if (accept('-'))
        e = std::make_shared<Bin>('-', e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (accept('*'))
        e = std::make_shared<Bin>('*', e, unary());
      else if (accept('/'))
        e = std::make_shared<Bin>('/', e, unary());
      else
        return e;
    }
  }

  // Unary minus binds looser than ^: -x^2 parses as -(x^2).
  ExprPtr unary() {
    if (accept('-')) return std::make_shared<Neg>(unary());
    if (accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) {
      // Right-associative; the exponent may itself carry a unary minus.
      return std::make_shared<Bin>('^', base, unary());
    }
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    // Scientific exponent.
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;  // bare identifier 'e' follows the number: "2e" means 2*? no — reject
      }
    }
    try {
      size_t used = 0;
      double v = std::stod(s_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) {
        pos_ = start;
        fail("malformed number");
      }
      return std::make_shared<Const>(v);
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  ExprPtr identifier() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "x" || name == "y") return std::make_shared<Var>(name[0]);
    if (name == "pi") return std::make_shared<NamedConst>("pi", std::numbers::pi);
    if (name == "e") return std::make_shared<NamedConst>("e", std::numbers::e);
    if (name == "sin" || name == "cos" || name == "exp" || name == "log" || name == "sqrt" ||
        name == "abs") {
      if (!accept('(')) fail("expected '(' after function name '" + name + "'");
      ExprPtr arg = sum();
      if (!accept(')')) fail("expected ')'");
      return std::make_shared<Call>(name, arg);
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& src) { return Parser(src).run(); }

}  // namespace usp
