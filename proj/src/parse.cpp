#include "liesym/parse.hpp"

#include <cctype>

namespace liesym {

namespace {

const std::pair<const char*, Head> kHeads[] = {
    {"exp", Head::Exp},   {"ln", Head::Ln},     {"sin", Head::Sin},   {"cos", Head::Cos},   {"tan", Head::Tan},
    {"cot", Head::Cot},   {"sec", Head::Sec},   {"csc", Head::Csc},   {"sinh", Head::Sinh}, {"cosh", Head::Cosh},
    {"tanh", Head::Tanh}, {"coth", Head::Coth}, {"sech", Head::Sech}, {"csch", Head::Csch},
};

class Parser {
 public:
  Parser(const std::string& s, const ParseContext& c) : s_(s), ctx_(c) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) throw ValueError("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return factor();
  }

  Expr factor() {
    Expr b = primary();
    if (accept('^')) {
      Expr ex;
      if (accept('-'))
        ex = -primary();
      else
        ex = primary();
      try {
        return pow_expr(b, ex);
      } catch (const std::domain_error& err) {
        throw ValueError(err.what(), pos_);
      }
    }
    return b;
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    mpz_class ip(s_.substr(start, pos_ - start));
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string frac = s_.substr(fs, pos_ - fs);
      if (frac.empty()) return Expr(Rational(ip));
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      Rational q(ip * scale + mpz_class(frac), scale);
      q.canonicalize();
      return Expr(q);
    }
    return Expr(Rational(ip));
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  int primes() {
    int n = 0;
    while (pos_ < s_.size() && s_[pos_] == '\'') ++pos_, ++n;
    return n;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    std::size_t start = pos_;
    std::string id = ident();

    for (const auto& [name, h] : kHeads)
      if (id == name) {
        expect('(');
        Expr a = expr();
        expect(')');
        try {
          return trans(h, a);
        } catch (const std::domain_error& err) {
          throw ValueError(err.what(), start);
        }
      }
    if (id == "abs") {
      expect('(');
      Expr a = expr();
      expect(')');
      if (!a.is_constant()) throw ValueError("abs() needs a constant argument", start);
      return Expr(abs(a.constant_value()));
    }
    if (auto it = ctx_.values.find(id); it != ctx_.values.end()) return it->second;
    if (id == "sqrt") {
      expect('(');
      Expr a = expr();
      expect(')');
      try {
        return sqrt(a);
      } catch (const std::domain_error& err) {
        throw ValueError(err.what(), start);
      }
    }
    if (ctx_.params.count(id)) return param(id);
    if (ctx_.rvars.count(id)) return rvar(id);
    if (id == "t") return var_t();
    if (id == "x") return var_x();
    if (id == "y") return var_y();
    if (id == "u") return var_u();

    auto split = id.find('_');
    std::string head = id.substr(0, split);
    std::string sub = split == std::string::npos ? "" : id.substr(split + 1);
    if (split != std::string::npos && sub.empty()) throw ParseError("empty derivative suffix in '" + id + "'", start);

    if (head == "u") {
      int k[3] = {0, 0, 0};
      for (char ch : sub) {
        if (ch == 't')
          ++k[0];
        else if (ch == 'x')
          ++k[1];
        else if (ch == 'y')
          ++k[2];
        else
          throw ParseError(std::string(1, ch) + " is not an independent variable", start);
      }
      return jet(k[0], k[1], k[2]);
    }
    if (head == "F" || head == "G" || head == "H") {
      int f = head[0] - 'F';
      int order = 0;
      for (char ch : sub) {
        if (ch != 'u') throw ParseError("arbitrary elements depend on u only", start);
        ++order;
      }
      if (sub.empty()) {
        order = primes();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
          ++pos_;
          skip();
          if (ident() != "u") fail("arbitrary elements take argument u");
          expect(')');
        }
      }
      return arb(f, order);
    }
    if (ctx_.allow_coef && (head == "tau" || head == "xi" || head == "zeta" || head == "eta")) {
      int f = head == "tau" ? 0 : head == "xi" ? 1 : head == "zeta" ? 2 : 3;
      std::array<int, 4> mi{0, 0, 0, 0};
      for (char ch : sub) {
        auto p = std::string("txyu").find(ch);
        if (p == std::string::npos) throw ParseError("bad coefficient derivative in '" + id + "'", start);
        ++mi[p];
      }
      return coef(f, mi);
    }
    if (ctx_.rfuns.count(head)) {
      if (sub.empty()) {
        int n = primes();
        std::string d;
        for (int i = 0; i < n; ++i) d += ctx_.prime_var;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
          // optional argument list, e.g. w(p,z) or v(s)
          int depth = 0;
          do {
            if (s_[pos_] == '(') ++depth;
            if (s_[pos_] == ')') --depth;
            ++pos_;
          } while (pos_ < s_.size() && depth > 0);
        }
        return rfun(head, d);
      }
      for (char ch : sub)
        if (!ctx_.rvars.count(std::string(1, ch)) && std::string("txy").find(ch) == std::string::npos)
          throw ParseError(std::string(1, ch) + " is not a reduced variable", start);
      return rfun(head, sub);
    }
    throw ParseError("unknown identifier '" + id + "'", start);
  }
};

}  // namespace

Expr parse(const std::string& text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

Rational parse_rational(const std::string& text) {
  Expr e = parse(text, ParseContext{});
  if (!e.is_constant()) throw ParseError("expected a rational number: " + text, 0);
  return e.constant_value();
}

std::map<std::string, Rational> parse_bindings(const std::string& text) {
  std::map<std::string, Rational> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value in '" + item + "'", start);
    std::string name = item.substr(0, eq);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(0, 1);
    out[name] = parse_rational(item.substr(eq + 1));
    start = end + 1;
  }
  return out;
}

}  // namespace liesym
