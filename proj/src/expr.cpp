#include "liesym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace liesym {

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("zero exponent denominator");
  if (d < 0) n = -n, d = -d;
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

Exponent Exponent::from_rational(const Rational& q) {
  if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p())
    throw std::overflow_error("exponent out of range");
  return Exponent(q.get_num().get_si(), q.get_den().get_si());
}

std::int64_t Exponent::floor() const {
  std::int64_t q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

Exponent operator+(Exponent a, Exponent b) { return Exponent(a.num * b.den + b.num * a.den, a.den * b.den); }
Exponent operator-(Exponent a, Exponent b) { return Exponent(a.num * b.den - b.num * a.den, a.den * b.den); }
Exponent operator*(Exponent a, Exponent b) { return Exponent(a.num * b.num, a.den * b.den); }
bool operator<(Exponent a, Exponent b) { return a.num * b.den < b.num * a.den; }

const char* head_name(Head h) {
  static const char* names[] = {"exp",  "ln",   "sin",  "cos",  "tan",  "cot",  "sec",
                                "csc",  "sinh", "cosh", "tanh", "coth", "sech", "csch"};
  return names[static_cast<int>(h)];
}

// ---------------------------------------------------------------- ordering

namespace {
int sgn(int v) { return (v > 0) - (v < 0); }
int cmp_str(const std::string& a, const std::string& b) { return sgn(a.compare(b)); }
int degree3(const AtomData& d) { return d.idx[0] + d.idx[1] + d.idx[2]; }
}  // namespace

int compare(const AtomData& a, const AtomData& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case AtomKind::Base:
      return sgn(int(a.tag) - int(b.tag));
    case AtomKind::Dep:
      return 0;
    case AtomKind::Jet: {
      if (int c = sgn(degree3(a) - degree3(b))) return c;
      for (int i = 0; i < 3; ++i)
        if (a.idx[i] != b.idx[i]) return a.idx[i] > b.idx[i] ? -1 : 1;
      return 0;
    }
    case AtomKind::Param:
    case AtomKind::RVar:
      return cmp_str(a.name, b.name);
    case AtomKind::Arb:
      if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
      return sgn(int(a.idx[0]) - int(b.idx[0]));
    case AtomKind::Coef: {
      if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
      int da = a.idx[0] + a.idx[1] + a.idx[2] + a.idx[3];
      int db = b.idx[0] + b.idx[1] + b.idx[2] + b.idx[3];
      if (da != db) return da < db ? -1 : 1;
      for (int i = 0; i < 4; ++i)
        if (a.idx[i] != b.idx[i]) return a.idx[i] > b.idx[i] ? -1 : 1;
      return 0;
    }
    case AtomKind::RFun:
      if (int c = cmp_str(a.name, b.name)) return c;
      if (a.sub.size() != b.sub.size()) return a.sub.size() < b.sub.size() ? -1 : 1;
      return cmp_str(a.sub, b.sub);
    case AtomKind::Power:
      return compare(a.arg, b.arg);
    case AtomKind::Trans:
      if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
      return compare(a.arg, b.arg);
  }
  return 0;
}

bool operator<(Atom a, Atom b) { return a != b && compare(*a, *b) < 0; }

int compare(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return compare(*a[i].first, *b[i].first);
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------- interning

namespace {
struct AtomPtrLess {
  using is_transparent = void;
  bool operator()(const std::unique_ptr<AtomData>& a, const std::unique_ptr<AtomData>& b) const {
    return compare(*a, *b) < 0;
  }
  bool operator()(const std::unique_ptr<AtomData>& a, const AtomData& b) const { return compare(*a, b) < 0; }
  bool operator()(const AtomData& a, const std::unique_ptr<AtomData>& b) const { return compare(a, *b) < 0; }
};

std::mutex& intern_mutex() {
  static std::mutex m;
  return m;
}
std::set<std::unique_ptr<AtomData>, AtomPtrLess>& intern_table() {
  static auto* t = new std::set<std::unique_ptr<AtomData>, AtomPtrLess>();
  return *t;
}
}  // namespace

Atom intern(AtomData d) {
  std::lock_guard<std::mutex> lock(intern_mutex());
  auto& table = intern_table();
  auto it = table.find(d);
  if (it != table.end()) return Atom(it->get());
  auto [pos, ok] = table.insert(std::make_unique<AtomData>(std::move(d)));
  return Atom(pos->get());
}

Atom base_atom(int i) {
  static const Atom cache[3] = {
      intern({AtomKind::Base, 0, {}, "", "", Expr()}),
      intern({AtomKind::Base, 1, {}, "", "", Expr()}),
      intern({AtomKind::Base, 2, {}, "", "", Expr()}),
  };
  return cache[i];
}

Atom dep_atom() {
  static const Atom a = intern({AtomKind::Dep, 0, {}, "", "", Expr()});
  return a;
}

Atom jet_atom(int at, int ax, int ay) {
  if (at + ax + ay == 0) return dep_atom();
  AtomData d;
  d.kind = AtomKind::Jet;
  d.idx = {std::uint8_t(at), std::uint8_t(ax), std::uint8_t(ay), 0};
  return intern(std::move(d));
}

Atom param_atom(const std::string& name) {
  AtomData d;
  d.kind = AtomKind::Param;
  d.name = name;
  return intern(std::move(d));
}

Atom arb_atom(int f, int order) {
  AtomData d;
  d.kind = AtomKind::Arb;
  d.tag = std::uint8_t(f);
  d.idx[0] = std::uint8_t(order);
  return intern(std::move(d));
}

Atom coef_atom(int f, std::array<int, 4> mi) {
  AtomData d;
  d.kind = AtomKind::Coef;
  d.tag = std::uint8_t(f);
  for (int i = 0; i < 4; ++i) d.idx[i] = std::uint8_t(mi[i]);
  return intern(std::move(d));
}

Atom rvar_atom(const std::string& name) {
  AtomData d;
  d.kind = AtomKind::RVar;
  d.name = name;
  return intern(std::move(d));
}

Atom rfun_atom(const std::string& name, std::string sub) {
  std::sort(sub.begin(), sub.end());
  AtomData d;
  d.kind = AtomKind::RFun;
  d.name = name;
  d.sub = std::move(sub);
  return intern(std::move(d));
}

namespace {
Atom trans_atom(Head h, Expr arg) {
  AtomData d;
  d.kind = AtomKind::Trans;
  d.tag = std::uint8_t(h);
  d.arg = std::move(arg);
  return intern(std::move(d));
}
Atom power_atom(Expr base) {
  AtomData d;
  d.kind = AtomKind::Power;
  d.arg = std::move(base);
  return intern(std::move(d));
}
bool is_head(Atom a, Head h) { return a->kind == AtomKind::Trans && a->tag == std::uint8_t(h); }
}  // namespace

// ---------------------------------------------------------------- Expr basics

namespace {
const std::vector<Term>& empty_terms() {
  static const std::vector<Term> e;
  return e;
}
}  // namespace

const std::vector<Term>& Expr::terms() const { return data_ ? *data_ : empty_terms(); }

Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& v) {
  if (v != 0) data_ = std::make_shared<const std::vector<Term>>(std::vector<Term>{Term{{}, v}});
}

bool Expr::is_constant() const { return terms().empty() || (size() == 1 && terms()[0].mono.empty()); }

Rational Expr::constant_value() const {
  if (terms().empty()) return 0;
  if (!is_constant()) throw std::logic_error("expression is not constant: " + to_string(*this));
  return terms()[0].coeff;
}

bool Expr::contains(const std::function<bool(Atom)>& pred) const {
  for (const auto& t : terms())
    for (const auto& [a, e] : t.mono) {
      if (pred(a)) return true;
      if ((a->kind == AtomKind::Power || a->kind == AtomKind::Trans) && a->arg.contains(pred)) return true;
    }
  return false;
}

namespace {
bool needs_fixup(const Monomial& m) {
  int exps = 0;
  for (const auto& [a, e] : m) {
    if (a->kind == AtomKind::Power) {
      if (a->arg.is_constant()) {
        if (e.floor() != 0) return true;
      } else if (!(e < Exponent(1))) {
        return true;
      }
    } else if (is_head(a, Head::Exp)) {
      ++exps;
      if (e != Exponent(1)) return true;
    }
  }
  return exps > 1;
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      Exponent e = a[i].second + b[j].second;
      if (!e.is_zero()) out.emplace_back(a[i].first, e);
      ++i, ++j;
    } else if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

Rational rational_pow(const Rational& c, std::int64_t n) {
  mpz_class num = c.get_num(), den = c.get_den();
  if (n < 0) {
    if (c == 0) throw std::domain_error("division by zero");
    std::swap(num, den);
    n = -n;
  }
  mpz_class rn, rd;
  mpz_pow_ui(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

std::vector<std::pair<mpz_class, int>> factorize(mpz_class n) {
  std::vector<std::pair<mpz_class, int>> out;
  if (n < 0) n = -n;
  for (unsigned long p = 2; p < 100000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      int k = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++k;
      }
      out.emplace_back(mpz_class(p), k);
    }
    if (mpz_class(p) * p > n) break;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

Expr canonical_product(Monomial m, Rational c);
Expr make_exp(const Expr& arg);
}  // namespace

Expr Expr::from_term(Term t) { return canonical_product(std::move(t.mono), std::move(t.coeff)); }

Expr Expr::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return compare(a.mono, b.mono) < 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && compare(out.back().mono, t.mono) == 0) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  Expr e;
  if (!out.empty()) e.data_ = std::make_shared<const std::vector<Term>>(std::move(out));
  return e;
}

Expr Expr::from_sorted(std::vector<Term> terms) {
  Expr e;
  if (!terms.empty()) e.data_ = std::make_shared<const std::vector<Term>>(std::move(terms));
  return e;
}

Expr Expr::atom(Atom a, Exponent e) {
  if (e.is_zero()) return Expr(1);
  return canonical_product(Monomial{{a, e}}, Rational(1));
}

namespace {
Expr canonical_product(Monomial m, Rational c) {
  if (c == 0) return Expr();
  auto by_atom = [](const Factor& x, const Factor& y) { return x.first < y.first; };
  if (!std::is_sorted(m.begin(), m.end(), by_atom) ||
      std::adjacent_find(m.begin(), m.end(), [](const Factor& x, const Factor& y) { return x.first == y.first; }) != m.end()) {
    std::stable_sort(m.begin(), m.end(), by_atom);
    Monomial merged;
    for (auto& f : m) {
      if (!merged.empty() && merged.back().first == f.first)
        merged.back().second = merged.back().second + f.second;
      else
        merged.push_back(f);
    }
    m.clear();
    for (auto& f : merged)
      if (!f.second.is_zero()) m.push_back(f);
  }
  if (!needs_fixup(m)) return Expr::from_terms({Term{std::move(m), std::move(c)}});
  Monomial kept;
  Expr extra(1);
  Expr exp_arg;
  int exp_count = 0;
  Factor exp_factor;
  for (auto& [a, e] : m) {
    if (is_head(a, Head::Exp)) {
      exp_arg += Expr(e.to_rational()) * a->arg;
      exp_factor = {a, e};
      ++exp_count;
      continue;
    }
    if (a->kind == AtomKind::Power) {
      if (a->arg.is_constant()) {
        std::int64_t n = e.floor();
        if (n != 0) {
          c *= rational_pow(a->arg.constant_value(), n);
          e = e - Exponent(n);
        }
      } else if (!(e < Exponent(1))) {
        std::int64_t n = e.floor();
        Expr b = a->arg, p(1);
        for (std::int64_t k = 0; k < n; ++k) p *= b;
        extra *= p;
        e = e - Exponent(n);
      }
      if (e.is_zero()) continue;
    }
    kept.emplace_back(a, e);
  }
  if (exp_count == 1 && exp_factor.second == Exponent(1)) {
    kept.push_back(exp_factor);
    std::sort(kept.begin(), kept.end(), [](const Factor& x, const Factor& y) { return x.first < y.first; });
  } else if (exp_count > 0) {
    extra *= make_exp(exp_arg);
  }
  Expr head = Expr::from_terms({Term{std::move(kept), std::move(c)}});
  if (extra == Expr(1)) return head;
  return head * extra;
}

Expr make_exp(const Expr& arg) {
  Expr extra(1);
  std::vector<Term> rest;
  for (const auto& t : arg.terms()) {
    if (t.mono.size() == 1 && is_head(t.mono[0].first, Head::Ln) && t.mono[0].second == Exponent(1)) {
      extra *= pow(t.mono[0].first->arg, t.coeff);
    } else {
      rest.push_back(t);
    }
  }
  if (rest.empty()) return extra;
  Expr r = Expr::from_terms(std::move(rest));
  Expr base = Expr::from_terms({Term{Monomial{{trans_atom(Head::Exp, r), Exponent(1)}}, Rational(1)}});
  return extra == Expr(1) ? base : base * extra;
}
}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = compare(x[i].mono, y[j].mono);
    if (c == 0) {
      Rational s = x[i].coeff + y[j].coeff;
      if (s != 0) out.push_back(Term{x[i].mono, s});
      ++i, ++j;
    } else if (c < 0) {
      out.push_back(x[i++]);
    } else {
      out.push_back(y[j++]);
    }
  }
  while (i < x.size()) out.push_back(x[i++]);
  while (j < y.size()) out.push_back(y[j++]);
  return Expr::from_sorted(std::move(out));
}

Expr operator-(const Expr& a) {
  std::vector<Term> t = a.terms();
  for (auto& x : t) x.coeff = -x.coeff;
  return Expr::from_sorted(std::move(t));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_constant() || b.is_constant()) {
    const Expr& k = a.is_constant() ? a : b;
    const Expr& o = a.is_constant() ? b : a;
    Rational c = k.constant_value();
    if (c == 1) return o;
    std::vector<Term> t = o.terms();
    for (auto& x : t) x.coeff *= c;
    return Expr::from_sorted(std::move(t));
  }
  std::vector<Term> simple;
  simple.reserve(a.size() * b.size());
  Expr extra;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      Monomial m = merge(x.mono, y.mono);
      Rational c = x.coeff * y.coeff;
      if (needs_fixup(m))
        extra += canonical_product(std::move(m), std::move(c));
      else
        simple.push_back(Term{std::move(m), std::move(c)});
    }
  Expr r = Expr::from_terms(std::move(simple));
  return extra.is_zero() ? r : r + extra;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return a * pow(b, Exponent(-1));
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

int compare(const Expr& a, const Expr& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  if (&x == &y) return 0;
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(x[i].mono, y[i].mono)) return c;
    if (int c = cmp(x[i].coeff, y[i].coeff)) return c < 0 ? -1 : 1;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------- shorthands

Expr var_t() { return Expr::atom(base_atom(0)); }
Expr var_x() { return Expr::atom(base_atom(1)); }
Expr var_y() { return Expr::atom(base_atom(2)); }
Expr var_u() { return Expr::atom(dep_atom()); }
Expr base_var(int i) { return Expr::atom(base_atom(i)); }
Expr jet(int at, int ax, int ay) { return Expr::atom(jet_atom(at, ax, ay)); }
Expr param(const std::string& name) { return Expr::atom(param_atom(name)); }
Expr arb(int f, int order) { return Expr::atom(arb_atom(f, order)); }
Expr coef(int f, std::array<int, 4> mi) { return Expr::atom(coef_atom(f, mi)); }
Expr rvar(const std::string& name) { return Expr::atom(rvar_atom(name)); }
Expr rfun(const std::string& name, const std::string& sub) { return Expr::atom(rfun_atom(name, sub)); }

// ---------------------------------------------------------------- content

Rational content(const Expr& e) {
  if (e.is_zero()) return 1;
  mpz_class g = 0, l = 1;
  for (const auto& t : e.terms()) {
    mpz_class n = abs(t.coeff.get_num());
    g = gcd(g, n);
    l = lcm(l, t.coeff.get_den());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

Expr primitive_part(const Expr& e) {
  if (e.is_zero()) return e;
  Rational c = content(e);
  if (e.terms()[0].coeff < 0) c = -c;
  Rational inv = 1 / c;
  return e * Expr(inv);
}

// ---------------------------------------------------------------- transcendentals

namespace {
bool is_odd_head(Head h) {
  switch (h) {
    case Head::Sin:
    case Head::Tan:
    case Head::Cot:
    case Head::Csc:
    case Head::Sinh:
    case Head::Tanh:
    case Head::Coth:
    case Head::Csch:
      return true;
    default:
      return false;
  }
}

Expr ln_of_rational(const Rational& c) {
  if (c <= 0) throw std::domain_error("ln of non-positive constant");
  Expr r;
  for (auto& [p, k] : factorize(c.get_num()))
    r += Expr(k) * Expr::atom(trans_atom(Head::Ln, Expr(Rational(p))));
  for (auto& [p, k] : factorize(c.get_den()))
    r -= Expr(k) * Expr::atom(trans_atom(Head::Ln, Expr(Rational(p))));
  return r;
}
}  // namespace

Expr ln(const Expr& a) {
  if (a.is_zero()) throw std::domain_error("ln(0)");
  if (a.is_constant()) {
    Rational c = a.constant_value();
    if (c == 1) return Expr();
    return ln_of_rational(c);
  }
  if (a.is_single_term()) {
    const Term& t = a.terms()[0];
    if (t.coeff < 0) return Expr::atom(trans_atom(Head::Ln, a));
    Expr r = t.coeff == 1 ? Expr() : ln_of_rational(t.coeff);
    for (const auto& [at, e] : t.mono) {
      Expr k(e.to_rational());
      if (is_head(at, Head::Exp))
        r += k * at->arg;
      else if (at->kind == AtomKind::Power)
        r += k * (at->arg.is_constant() ? ln_of_rational(at->arg.constant_value())
                                        : Expr::atom(trans_atom(Head::Ln, at->arg)));
      else
        r += k * Expr::atom(trans_atom(Head::Ln, Expr::atom(at)));
    }
    return r;
  }
  Rational c = content(a);
  Expr b = a * Expr(Rational(1) / c);
  if (c == 1) return Expr::atom(trans_atom(Head::Ln, a));
  return ln_of_rational(c) + Expr::atom(trans_atom(Head::Ln, b));
}

Expr exp(const Expr& a) { return make_exp(a); }

Expr trans(Head h, const Expr& arg) {
  if (h == Head::Exp) return exp(arg);
  if (h == Head::Ln) return ln(arg);
  if (arg.is_zero()) {
    switch (h) {
      case Head::Sin:
      case Head::Tan:
      case Head::Sinh:
      case Head::Tanh:
        return Expr();
      case Head::Cos:
      case Head::Sec:
      case Head::Cosh:
      case Head::Sech:
        return Expr(1);
      default:
        throw std::domain_error(std::string(head_name(h)) + "(0) is undefined");
    }
  }
  if (arg.terms()[0].coeff < 0) {
    Expr f = Expr::atom(trans_atom(h, -arg));
    return is_odd_head(h) ? -f : f;
  }
  return Expr::atom(trans_atom(h, arg));
}

Expr sin(const Expr& a) { return trans(Head::Sin, a); }
Expr cos(const Expr& a) { return trans(Head::Cos, a); }

// ---------------------------------------------------------------- powers

namespace {
Expr pow_rational(const Rational& c, Exponent r) {
  if (r.is_integer()) return Expr(rational_pow(c, r.num));
  if (c < 0) throw std::domain_error("fractional power of negative constant");
  if (c == 0) {
    if (r < Exponent(0)) throw std::domain_error("negative power of zero");
    return Expr();
  }
  Expr res(1);
  for (auto& [p, k] : factorize(c.get_num()))
    res *= Expr::atom(power_atom(Expr(Rational(p))), Exponent(k) * r);
  for (auto& [p, k] : factorize(c.get_den()))
    res *= Expr::atom(power_atom(Expr(Rational(p))), Exponent(-k) * r);
  return res;
}
}  // namespace

Expr pow(const Expr& base, Exponent r) {
  if (r.is_zero()) return Expr(1);
  if (base.is_zero()) {
    if (Exponent(0) < r) return Expr();
    throw std::domain_error("negative power of zero");
  }
  if (r.is_integer() && r.num > 0) {
    Expr result(1), b = base;
    std::int64_t n = r.num;
    while (n) {
      if (n & 1) result *= b;
      n >>= 1;
      if (n) b = b * b;
    }
    return result;
  }
  if (base.is_single_term()) {
    const Term& t = base.terms()[0];
    Expr res = pow_rational(t.coeff, r);
    for (const auto& [a, e] : t.mono) {
      Exponent ne = e * r;
      if (is_head(a, Head::Exp)) {
        res *= make_exp(Expr(ne.to_rational()) * a->arg);
      } else {
        if (a->kind == AtomKind::Trans && !ne.is_integer())
          throw std::domain_error("fractional power of transcendental atom");
        res *= Expr::atom(a, ne);
      }
    }
    return res;
  }
  Rational k = content(base);
  Expr b = base * Expr(Rational(1) / k);
  if (r.is_integer() && b.terms()[0].coeff < 0) {
    b = -b;
    k = -k;
  }
  return pow_rational(k, r) * Expr::atom(power_atom(b), r);
}

Expr pow(const Expr& base, const Rational& r) { return pow(base, Exponent::from_rational(r)); }

Expr pow_expr(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant()) return pow(base, exponent.constant_value());
  return exp(exponent * ln(base));
}

Expr sqrt(const Expr& a) { return pow(a, Exponent(1, 2)); }

// ---------------------------------------------------------------- rewrite table

namespace {
Head reciprocal(Head h, bool& ok) {
  ok = true;
  switch (h) {
    case Head::Sin: return Head::Csc;
    case Head::Csc: return Head::Sin;
    case Head::Cos: return Head::Sec;
    case Head::Sec: return Head::Cos;
    case Head::Tan: return Head::Cot;
    case Head::Cot: return Head::Tan;
    case Head::Sinh: return Head::Csch;
    case Head::Csch: return Head::Sinh;
    case Head::Cosh: return Head::Sech;
    case Head::Sech: return Head::Cosh;
    case Head::Tanh: return Head::Coth;
    case Head::Coth: return Head::Tanh;
    default: ok = false; return h;
  }
}

// Square rule: f(A)^2 -> replacement in terms of another head.
bool square_rule(Head h, const Expr& arg, Expr& out) {
  auto sq = [&](Head g) { return Expr::atom(trans_atom(g, arg), 2); };
  switch (h) {
    case Head::Sech: out = Expr(1) - sq(Head::Tanh); return true;
    case Head::Csch: out = sq(Head::Coth) - Expr(1); return true;
    case Head::Sec: out = Expr(1) + sq(Head::Tan); return true;
    case Head::Csc: out = Expr(1) + sq(Head::Cot); return true;
    case Head::Sin: out = Expr(1) - sq(Head::Cos); return true;
    case Head::Cosh: out = Expr(1) + sq(Head::Sinh); return true;
    default: return false;
  }
}

// One rewrite step on a term; returns false when the term is already in normal form.
bool rewrite_term(const Term& t, Expr& out) {
  for (std::size_t i = 0; i < t.mono.size(); ++i) {
    Atom a = t.mono[i].first;
    Exponent e = t.mono[i].second;
    if (a->kind != AtomKind::Trans || is_head(a, Head::Exp) || is_head(a, Head::Ln)) continue;
    Head h = static_cast<Head>(a->tag);
    bool ok;
    Head r = reciprocal(h, ok);
    Monomial rest = t.mono;
    rest.erase(rest.begin() + long(i));
    if (e < Exponent(0)) {
      out = Expr::from_term(Term{rest, t.coeff}) * Expr::atom(trans_atom(r, a->arg), Exponent(0) - e);
      return true;
    }
    for (std::size_t j = 0; j < t.mono.size(); ++j) {
      Atom b = t.mono[j].first;
      if (j == i || b->kind != AtomKind::Trans || b->tag != std::uint8_t(r) || b->arg != a->arg) continue;
      Exponent f = t.mono[j].second;
      if (f < Exponent(0)) continue;
      Exponent m = f < e ? f : e;
      Monomial n = t.mono;
      n[i].second = n[i].second - m;
      n[j].second = n[j].second - m;
      n.erase(std::remove_if(n.begin(), n.end(), [](const Factor& x) { return x.second.is_zero(); }), n.end());
      out = Expr::from_term(Term{n, t.coeff});
      return true;
    }
    Expr rep;
    if (e.is_integer() && e.num >= 2 && square_rule(h, a->arg, rep)) {
      std::int64_t q = e.num / 2, rem = e.num % 2;
      Expr f = Expr::from_term(Term{rest, t.coeff});
      if (rem) f *= Expr::atom(a);
      out = f * pow(rep, Exponent(q));
      return true;
    }
  }
  return false;
}
}  // namespace

Expr normal_form(const Expr& e) {
  Expr cur = e;
  for (int iter = 0; iter < 64; ++iter) {
    bool changed = false;
    std::vector<Term> keep;
    Expr acc;
    for (const auto& t : cur.terms()) {
      Expr r;
      if (rewrite_term(t, r)) {
        changed = true;
        acc += r;
      } else {
        keep.push_back(t);
      }
    }
    if (!changed) return cur;
    cur = Expr::from_terms(std::move(keep)) + acc;
  }
  return cur;
}

// ---------------------------------------------------------------- substitution

Expr subst(const Expr& e, const SubstMap& m) {
  if (m.empty()) return e;
  std::unordered_map<const AtomData*, std::pair<bool, Expr>> cache;  // changed, image
  std::function<const std::pair<bool, Expr>&(Atom)> image = [&](Atom a) -> const std::pair<bool, Expr>& {
    auto it = cache.find(a.get());
    if (it != cache.end()) return it->second;
    std::pair<bool, Expr> r{false, Expr()};
    auto f = m.find(a);
    if (f != m.end()) {
      r = {true, f->second};
    } else if (a->kind == AtomKind::Trans || a->kind == AtomKind::Power) {
      Expr na = subst(a->arg, m);
      if (na != a->arg) r = {true, a->kind == AtomKind::Trans ? trans(Head(a->tag), na) : na};
    }
    return cache.emplace(a.get(), std::move(r)).first->second;
  };
  std::vector<Term> same;
  Expr acc;
  for (const auto& t : e.terms()) {
    bool changed = false;
    for (const auto& [a, x] : t.mono)
      if (image(a).first) {
        changed = true;
        break;
      }
    if (!changed) {
      same.push_back(t);
      continue;
    }
    Expr prod(t.coeff);
    Monomial rest;
    for (const auto& [a, x] : t.mono) {
      const auto& im = image(a);
      if (!im.first) {
        rest.emplace_back(a, x);
        continue;
      }
      if (a->kind == AtomKind::Power) {
        prod *= pow(im.second, x);
      } else {
        prod *= pow(im.second, x);
      }
    }
    if (!rest.empty()) prod *= Expr::from_term(Term{rest, Rational(1)});
    acc += prod;
  }
  return Expr::from_terms(std::move(same)) + acc;
}

// ---------------------------------------------------------------- differentiation

namespace {
Expr trans_derivative(Atom a) {
  const Expr& A = a->arg;
  auto f = [&](Head h, Exponent e = 1) { return Expr::atom(trans_atom(h, A), e); };
  switch (static_cast<Head>(a->tag)) {
    case Head::Exp: return Expr::atom(a);
    case Head::Ln: return pow(A, Exponent(-1));
    case Head::Sin: return f(Head::Cos);
    case Head::Cos: return -f(Head::Sin);
    case Head::Tan: return Expr(1) + f(Head::Tan, 2);
    case Head::Cot: return -(Expr(1) + f(Head::Cot, 2));
    case Head::Sec: return f(Head::Sec) * f(Head::Tan);
    case Head::Csc: return -(f(Head::Csc) * f(Head::Cot));
    case Head::Sinh: return f(Head::Cosh);
    case Head::Cosh: return f(Head::Sinh);
    case Head::Tanh: return Expr(1) - f(Head::Tanh, 2);
    case Head::Coth: return Expr(1) - f(Head::Coth, 2);
    case Head::Sech: return -(f(Head::Sech) * f(Head::Tanh));
    case Head::Csch: return -(f(Head::Csch) * f(Head::Coth));
  }
  return Expr();
}
}  // namespace

Expr derive(const Expr& e, const LeafDerivative& leaf) {
  std::unordered_map<const AtomData*, Expr> cache;
  auto datom = [&](Atom a) -> const Expr& {
    auto it = cache.find(a.get());
    if (it != cache.end()) return it->second;
    Expr d;
    if (a->kind == AtomKind::Power) {
      d = a->arg.is_constant() ? Expr() : derive(a->arg, leaf);
    } else if (a->kind == AtomKind::Trans) {
      Expr inner = derive(a->arg, leaf);
      if (!inner.is_zero()) d = trans_derivative(a) * inner;
    } else {
      d = leaf(a);
    }
    return cache.emplace(a.get(), std::move(d)).first->second;
  };
  Expr acc;
  std::vector<Term> simple;
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      const Expr& d = datom(t.mono[i].first);
      if (d.is_zero()) continue;
      Monomial m = t.mono;
      Exponent ex = m[i].second;
      Rational c = t.coeff * ex.to_rational();
      m[i].second = ex - Exponent(1);
      if (m[i].second.is_zero()) m.erase(m.begin() + long(i));
      if (m.empty() || !needs_fixup(m)) {
        if (d.is_constant()) {
          simple.push_back(Term{std::move(m), c * d.constant_value()});
          continue;
        }
      }
      acc += canonical_product(std::move(m), c) * d;
    }
  }
  return Expr::from_terms(std::move(simple)) + acc;
}

Expr pdiff(const Expr& e, Atom var) {
  return derive(e, [var](Atom b) -> Expr {
    if (b == var) return Expr(1);
    switch (var->kind) {
      case AtomKind::Dep:
        if (b->kind == AtomKind::Arb) return arb(b->tag, b->idx[0] + 1);
        if (b->kind == AtomKind::Coef)
          return coef(b->tag, {b->idx[0], b->idx[1], b->idx[2], b->idx[3] + 1});
        return Expr();
      case AtomKind::Base:
        if (b->kind == AtomKind::RFun) return rfun(b->name, b->sub + "txy"[var->tag]);
        if (b->kind == AtomKind::Coef) {
          std::array<int, 4> mi = {b->idx[0], b->idx[1], b->idx[2], b->idx[3]};
          ++mi[var->tag];
          return coef(b->tag, mi);
        }
        return Expr();
      case AtomKind::RVar:
        if (b->kind == AtomKind::RFun) return rfun(b->name, b->sub + var->name);
        return Expr();
      default:
        return Expr();
    }
  });
}

// ---------------------------------------------------------------- splitting

Expr monomial_expr(const Monomial& m) { return Expr::from_term(Term{m, Rational(1)}); }

std::map<Monomial, Expr, MonomialLess> split_by(const Expr& e, const std::function<bool(Atom)>& selected) {
  std::map<Monomial, std::vector<Term>, MonomialLess> groups;
  for (const auto& t : e.terms()) {
    Monomial key, rest;
    for (const auto& f : t.mono) (selected(f.first) ? key : rest).push_back(f);
    groups[key].push_back(Term{std::move(rest), t.coeff});
  }
  std::map<Monomial, Expr, MonomialLess> out;
  for (auto& [k, v] : groups) {
    Expr x = Expr::from_terms(std::move(v));
    if (!x.is_zero()) out.emplace(k, std::move(x));
  }
  return out;
}

void collect_atoms(const Expr& e, std::vector<Atom>& out, bool recursive) {
  for (const auto& t : e.terms())
    for (const auto& [a, x] : t.mono) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      if (recursive && (a->kind == AtomKind::Power || a->kind == AtomKind::Trans)) collect_atoms(a->arg, out, true);
    }
}

bool depends_on(const Expr& e, Atom a) {
  return e.contains([a](Atom b) { return b == a; });
}

// ---------------------------------------------------------------- printing

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {
std::string exponent_str(Exponent e) {
  if (e.is_integer() && e.num > 0) return std::to_string(e.num);
  if (e.is_integer()) return "(" + std::to_string(e.num) + ")";
  return "(" + std::to_string(e.num) + "/" + std::to_string(e.den) + ")";
}
}  // namespace

std::string to_string(Atom a) {
  static const char* coef_names[] = {"tau", "xi", "zeta", "eta"};
  static const char* arb_names[] = {"F", "G", "H"};
  static const char letters[] = {'t', 'x', 'y', 'u'};
  const AtomData& d = *a;
  switch (d.kind) {
    case AtomKind::Base: return std::string(1, letters[d.tag]);
    case AtomKind::Dep: return "u";
    case AtomKind::Jet: {
      std::string s = "u_";
      for (int i = 0; i < 3; ++i) s.append(d.idx[i], letters[i]);
      return s;
    }
    case AtomKind::Param:
    case AtomKind::RVar: return d.name;
    case AtomKind::Arb: {
      std::string s = arb_names[d.tag];
      if (d.idx[0]) s += "_" + std::string(d.idx[0], 'u');
      return s;
    }
    case AtomKind::Coef: {
      std::string s = coef_names[d.tag], sub;
      for (int i = 0; i < 4; ++i) sub.append(d.idx[i], letters[i]);
      return sub.empty() ? s : s + "_" + sub;
    }
    case AtomKind::RFun: return d.sub.empty() ? d.name : d.name + "_" + d.sub;
    case AtomKind::Power: return "(" + to_string(d.arg) + ")";
    case AtomKind::Trans: return std::string(head_name(Head(d.tag))) + "(" + to_string(d.arg) + ")";
  }
  return "?";
}

std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    std::string body;
    for (const auto& [a, x] : t.mono) {
      if (!body.empty()) body += "*";
      std::string s = to_string(a);
      if (a->kind == AtomKind::Power && a->arg.is_constant()) s = a->arg.constant_value().get_str();
      body += s;
      if (x != Exponent(1)) body += "^" + exponent_str(x);
    }
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    std::string piece;
    if (body.empty())
      piece = c.get_str();
    else if (c == 1)
      piece = body;
    else
      piece = c.get_str() + "*" + body;
    if (first)
      out = neg ? "-" + piece : piece;
    else
      out += neg ? " - " + piece : " + " + piece;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- numeric evaluation

namespace {
double eval_atom(Atom a, const NumericPoint& p, std::unordered_map<const AtomData*, double>& cache) {
  auto it = cache.find(a.get());
  if (it != cache.end()) return it->second;
  double v;
  if (a->kind == AtomKind::Power) {
    v = eval_numeric(a->arg, p);
  } else if (a->kind == AtomKind::Trans) {
    double x = eval_numeric(a->arg, p);
    switch (Head(a->tag)) {
      case Head::Exp: v = std::exp(x); break;
      case Head::Ln:
        if (!(x > 0)) throw std::domain_error("ln of non-positive value");
        v = std::log(x);
        break;
      case Head::Sin: v = std::sin(x); break;
      case Head::Cos: v = std::cos(x); break;
      case Head::Tan: v = std::tan(x); break;
      case Head::Cot: v = 1 / std::tan(x); break;
      case Head::Sec: v = 1 / std::cos(x); break;
      case Head::Csc: v = 1 / std::sin(x); break;
      case Head::Sinh: v = std::sinh(x); break;
      case Head::Cosh: v = std::cosh(x); break;
      case Head::Tanh: v = std::tanh(x); break;
      case Head::Coth: v = 1 / std::tanh(x); break;
      case Head::Sech: v = 1 / std::cosh(x); break;
      case Head::Csch: v = 1 / std::sinh(x); break;
      default: v = 0;
    }
  } else {
    auto f = p.find(a);
    if (f == p.end()) throw std::out_of_range("missing assignment for " + to_string(a));
    v = f->second;
  }
  cache.emplace(a.get(), v);
  return v;
}
}  // namespace

double eval_numeric(const Expr& e, const NumericPoint& p) {
  std::unordered_map<const AtomData*, double> cache;
  double sum = 0;
  for (const auto& t : e.terms()) {
    double prod = t.coeff.get_d();
    for (const auto& [a, x] : t.mono) {
      double b = eval_atom(a, p, cache);
      if (x.is_integer()) {
        prod *= std::pow(b, double(x.num));
      } else {
        if (b < 0) throw std::domain_error("fractional power of negative value");
        prod *= std::pow(b, double(x.num) / double(x.den));
      }
    }
    sum += prod;
  }
  return sum;
}

Expr clear_denominators(const Expr& e) {
  Expr cur = e;
  for (int iter = 0; iter < 16; ++iter) {
    std::map<Atom, Exponent> lo;
    for (const auto& t : cur.terms())
      for (const auto& [a, x] : t.mono)
        if (a->kind == AtomKind::Power && !a->arg.is_constant() && x < Exponent(0)) {
          auto it = lo.find(a);
          if (it == lo.end() || x < it->second) lo[a] = x;
        }
    if (lo.empty()) return cur;
    // shift exponents inside each term so the compound bases meet their own powers before expansion
    Expr next;
    for (const auto& t : cur.terms()) {
      Term s{{}, t.coeff};
      std::map<Atom, Exponent> ex(t.mono.begin(), t.mono.end());
      for (auto& [a, x] : lo) ex[a] = ex[a] - x;
      for (auto& [a, x] : ex)
        if (!x.is_zero()) s.mono.emplace_back(a, x);
      next += Expr::from_term(std::move(s));
    }
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------- exact division

namespace {
// Lexicographic monomial order compatible with multiplication.
int lex_cmp(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i].first == b[j].first) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
      ++i, ++j;
      continue;
    }
    bool take_a = j >= b.size() || (i < a.size() && a[i].first < b[j].first);
    if (take_a) return Exponent(0) < a[i].second ? 1 : -1;
    return Exponent(0) < b[j].second ? -1 : 1;
  }
  return 0;
}

const Term& leading(const Expr& e) {
  const Term* best = &e.terms()[0];
  for (const auto& t : e.terms())
    if (lex_cmp(t.mono, best->mono) > 0) best = &t;
  return *best;
}
}  // namespace

Expr exact_divide(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_zero()) return a;
  if (b.is_single_term()) return a * pow(b, Exponent(-1));
  Expr q, r = a;
  const Term& lb = leading(b);
  Expr lb_inv = pow(Expr::from_term(Term{lb.mono, lb.coeff}), Exponent(-1));
  for (int it = 0; !r.is_zero(); ++it) {
    if (it > 20000) throw std::runtime_error("exact_divide did not terminate");
    const Term& lr = leading(r);
    Expr step = Expr::from_term(Term{lr.mono, lr.coeff}) * lb_inv;
    q += step;
    r -= step * b;
  }
  return q;
}

}  // namespace liesym
