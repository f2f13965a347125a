#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace liesym {

using Rational = mpq_class;

// Small exact rational used for atom exponents.
struct Exponent {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Exponent() = default;
  Exponent(std::int64_t n) : num(n), den(1) {}  // NOLINT
  Exponent(std::int64_t n, std::int64_t d);

  bool is_integer() const { return den == 1; }
  bool is_zero() const { return num == 0; }
  Rational to_rational() const { return Rational(num, den); }
  static Exponent from_rational(const Rational& q);
  std::int64_t floor() const;

  friend Exponent operator+(Exponent a, Exponent b);
  friend Exponent operator-(Exponent a, Exponent b);
  friend Exponent operator*(Exponent a, Exponent b);
  friend bool operator==(Exponent a, Exponent b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }
  friend bool operator<(Exponent a, Exponent b);
};

enum class AtomKind : std::uint8_t {
  Base,    // t, x, y
  Dep,     // u
  Jet,     // u_alpha, |alpha| >= 1
  Param,   // declared symbolic constant
  Arb,     // F, G, H and their u-derivatives
  Coef,    // tau, xi, zeta, eta and partial derivatives (determining-system unknowns)
  RVar,    // reduced independent variable
  RFun,    // reduced dependent function and its derivatives
  Power,   // radical or compound base raised through the monomial exponent
  Trans,   // transcendental head applied to an argument
};

enum class Head : std::uint8_t { Exp, Ln, Sin, Cos, Tan, Cot, Sec, Csc, Sinh, Cosh, Tanh, Coth, Sech, Csch };

const char* head_name(Head h);

class Expr;
struct AtomData;

// Interned atom handle; equality is identity.
class Atom {
 public:
  Atom() = default;
  explicit Atom(const AtomData* p) : p_(p) {}
  const AtomData& operator*() const { return *p_; }
  const AtomData* operator->() const { return p_; }
  const AtomData* get() const { return p_; }
  friend bool operator==(Atom a, Atom b) { return a.p_ == b.p_; }
  friend bool operator!=(Atom a, Atom b) { return a.p_ != b.p_; }
  friend bool operator<(Atom a, Atom b);

 private:
  const AtomData* p_ = nullptr;
};

struct AtomHash {
  std::size_t operator()(Atom a) const { return std::hash<const void*>()(a.get()); }
};

using Factor = std::pair<Atom, Exponent>;
using Monomial = std::vector<Factor>;  // sorted by atom, nonzero exponents

int compare(const Monomial& a, const Monomial& b);
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

struct Term {
  Monomial mono;
  Rational coeff;
};

class Expr {
 public:
  Expr() = default;
  Expr(int v);                 // NOLINT
  Expr(long v);                // NOLINT
  Expr(const Rational& v);     // NOLINT
  static Expr atom(Atom a, Exponent e = 1);
  static Expr from_terms(std::vector<Term> terms);  // sorts and combines
  static Expr from_term(Term t);                    // canonicalizes a single product
  static Expr from_sorted(std::vector<Term> terms);  // terms already canonical, sorted, nonzero

  const std::vector<Term>& terms() const;
  std::size_t size() const { return terms().size(); }
  bool is_zero() const { return terms().empty(); }
  bool is_constant() const;
  bool is_single_term() const { return size() == 1; }
  Rational constant_value() const;  // requires is_constant()
  bool contains(const std::function<bool(Atom)>& pred) const;  // recursive into arguments

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  friend int compare(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  std::shared_ptr<const std::vector<Term>> data_;
};

struct AtomData {
  AtomKind kind = AtomKind::Base;
  std::uint8_t tag = 0;                // base index, arb/coef function index, head
  std::array<std::uint8_t, 4> idx{};   // jet (t,x,y), coef (t,x,y,u), arb order in idx[0]
  std::string name;                    // param / rvar / rfun name
  std::string sub;                     // rfun derivative letters, sorted
  Expr arg;                            // power base or transcendental argument
};

int compare(const AtomData& a, const AtomData& b);

// Atom construction.
Atom intern(AtomData d);
Atom base_atom(int i);  // 0=t 1=x 2=y
Atom dep_atom();
Atom jet_atom(int at, int ax, int ay);
Atom param_atom(const std::string& name);
Atom arb_atom(int f, int order);  // f: 0=F 1=G 2=H
Atom coef_atom(int f, std::array<int, 4> mi);  // f: 0=tau 1=xi 2=zeta 3=eta
Atom rvar_atom(const std::string& name);
Atom rfun_atom(const std::string& name, std::string sub);

// Expression shorthands.
Expr var_t();
Expr var_x();
Expr var_y();
Expr var_u();
Expr base_var(int i);
Expr jet(int at, int ax, int ay);
Expr param(const std::string& name);
Expr arb(int f, int order = 0);
Expr coef(int f, std::array<int, 4> mi = {0, 0, 0, 0});
Expr rvar(const std::string& name);
Expr rfun(const std::string& name, const std::string& sub = "");

// Transcendentals and powers.
Expr trans(Head h, const Expr& arg);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr pow(const Expr& base, Exponent r);
Expr pow(const Expr& base, const Rational& r);
Expr pow_expr(const Expr& base, const Expr& exponent);  // symbolic exponent via exp(e*ln b)
Expr sqrt(const Expr& a);

// Rewrite table to fixpoint; arithmetic already keeps polynomial canonical form.
Expr normal_form(const Expr& e);

// Substitution of leaf atoms (recursive into arguments).
using SubstMap = std::map<Atom, Expr>;
Expr subst(const Expr& e, const SubstMap& m);

// Generic derivation: leaf(a) gives the derivative of a leaf atom; Power/Trans use the chain rule.
using LeafDerivative = std::function<Expr(Atom)>;
Expr derive(const Expr& e, const LeafDerivative& leaf);
Expr pdiff(const Expr& e, Atom a);

// Coefficient splitting by atom subset: selected(a) atoms form the key monomial.
std::map<Monomial, Expr, MonomialLess> split_by(const Expr& e, const std::function<bool(Atom)>& selected);
Expr monomial_expr(const Monomial& m);

// Content handling.
Rational content(const Expr& e);          // positive; coefficients / content are coprime integers
Expr primitive_part(const Expr& e);       // e / content with leading coefficient positive

// Atom collection.
void collect_atoms(const Expr& e, std::vector<Atom>& out, bool recursive = true);
bool depends_on(const Expr& e, Atom a);

std::string to_string(const Expr& e);
std::string to_string(Atom a);
std::string to_string(const Rational& q);

// Numeric evaluation.
using NumericPoint = std::map<Atom, double>;
double eval_numeric(const Expr& e, const NumericPoint& p);

// Multiplies by powers of compound bases until none appears with a negative exponent.
Expr clear_denominators(const Expr& e);

// Exact division of polynomials in atoms; throws if not exact.
Expr exact_divide(const Expr& a, const Expr& b);

}  // namespace liesym
