#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sgcalc/errors.hpp"
#include "sgcalc/expr.hpp"

namespace sgcalc {

namespace {

// Shortest decimal that parses back to the same double.
std::string format_double(double d) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, d);
    if (std::strtod(buf, nullptr) == d) break;
  }
  return buf;
}

const char* group_name(BracketGroup g) {
  switch (g) {
    case BracketGroup::X: return "x";
    case BracketGroup::Xi: return "xi";
    case BracketGroup::XTangential: return "x'";
    case BracketGroup::XiTangential: return "xi'";
  }
  return "?";
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Const: {
      const cplx c = e.constant_value();
      if (c.imag() == 0.0) {
        out += format_double(c.real());
      } else {
        out += "(c " + format_double(c.real()) + " " + format_double(c.imag()) + ")";
      }
      return;
    }
    case Expr::Kind::Variable: {
      const Var v = e.variable();
      out += v.kind == VarKind::X ? "(var x " : "(var xi ";
      out += std::to_string(v.index + 1) + ")";
      return;
    }
    case Expr::Kind::Bracket:
      out += std::string("(bracket ") + group_name(e.group()) + " " + format_double(e.real_exponent()) + ")";
      return;
    case Expr::Kind::Pow:
      out += "(pow ";
      print(e.args().front(), out);
      out += " " + std::to_string(e.int_exponent()) + ")";
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Mul:
      out += e.kind() == Expr::Kind::Add ? "(add" : "(mul";
      for (const Expr& a : e.args()) {
        out += ' ';
        print(a, out);
      }
      out += ')';
      return;
  }
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse_all() {
    Expr e = parse();
    skip_ws();
    if (pos_ != text_.size()) error("trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) error("expected atom");
    return text_.substr(start, pos_ - start);
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail(ErrorCode::ParseError, "bad number '" + std::string(tok) + "'");
    }
    return v;
  }

  int integer(std::string_view tok) const {
    const double v = number(tok);
    if (v != std::floor(v)) fail(ErrorCode::ParseError, "expected integer, got '" + std::string(tok) + "'");
    return static_cast<int>(v);
  }

  void expect_close() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') error("expected ')'");
    ++pos_;
  }

  bool at_close() {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == ')';
  }

  int variable_index(std::string_view tok) const {
    const int i = integer(tok);
    if (i < 1 || i > dim_) fail(ErrorCode::ParseError, "variable index out of range 1.." + std::to_string(dim_));
    return i - 1;
  }

  Expr parse() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    if (text_[pos_] != '(') {
      const std::string_view tok = atom();
      if (tok == "i") return Expr(cplx(0.0, 1.0));
      return Expr(number(tok));
    }
    ++pos_;
    const std::string_view head = atom();
    Expr result;
    if (head == "c") {
      const double re = number(atom());
      const double im = number(atom());
      result = Expr(cplx(re, im));
    } else if (head == "var") {
      const std::string_view kind = atom();
      const int idx = variable_index(atom());
      if (kind == "x") {
        result = Expr::x(idx);
      } else if (kind == "xi") {
        result = Expr::xi(idx);
      } else {
        error("unknown variable kind '" + std::string(kind) + "'");
      }
    } else if (head == "bracket") {
      const std::string_view g = atom();
      double p = 1.0;
      if (!at_close()) p = number(atom());
      BracketGroup group;
      if (g == "x") group = BracketGroup::X;
      else if (g == "xi") group = BracketGroup::Xi;
      else if (g == "x'") group = BracketGroup::XTangential;
      else if (g == "xi'") group = BracketGroup::XiTangential;
      else error("unknown bracket group '" + std::string(g) + "'");
      result = Expr::bracket(group, dim_, p);
    } else if (head == "pow") {
      Expr base = parse();
      const int n = integer(atom());
      result = pow(base, n);
    } else if (head == "add" || head == "mul") {
      std::vector<Expr> args;
      while (!at_close()) args.push_back(parse());
      result = head == "add" ? Expr::sum(std::move(args)) : Expr::product(std::move(args));
    } else if (head == "sub") {
      Expr a = parse();
      Expr b = parse();
      result = a - b;
    } else if (head == "neg") {
      result = -parse();
    } else if (head == "div") {
      Expr a = parse();
      Expr b = parse();
      result = a / b;
    } else {
      error("unknown operator '" + std::string(head) + "'");
    }
    expect_close();
    return result;
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_prefix(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

Expr parse_prefix(std::string_view text, int dim) { return Parser(text, dim).parse_all(); }

}  // namespace sgcalc
