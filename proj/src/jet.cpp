#include "liesym/jet.hpp"

#include <stdexcept>

namespace liesym {

VectorField VectorField::generic() { return {coef(0), coef(1), coef(2), coef(3)}; }

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {a.tau + b.tau, a.xi + b.xi, a.zeta + b.zeta, a.eta + b.eta};
}
VectorField operator-(const VectorField& a, const VectorField& b) {
  return {a.tau - b.tau, a.xi - b.xi, a.zeta - b.zeta, a.eta - b.eta};
}
VectorField operator*(const Expr& k, const VectorField& v) { return {k * v.tau, k * v.xi, k * v.zeta, k * v.eta}; }

VectorField map_field(const VectorField& v, const std::function<Expr(const Expr&)>& f) {
  return {f(v.tau), f(v.xi), f(v.zeta), f(v.eta)};
}

Expr apply_field(const VectorField& v, const Expr& f) {
  Expr r;
  for (int i = 0; i < 3; ++i)
    if (!v[i].is_zero()) r += v[i] * pdiff(f, base_atom(i));
  if (!v.eta.is_zero()) r += v.eta * pdiff(f, dep_atom());
  return r;
}

VectorField parse_field(const std::string& text, ParseContext ctx) {
  static const char* marks[] = {"dt", "dx", "dy", "du"};
  for (const char* m : marks) ctx.params.insert(m);
  Expr e = parse(text, ctx);
  VectorField v;
  auto is_mark = [](Atom a) {
    return a->kind == AtomKind::Param && (a->name == "dt" || a->name == "dx" || a->name == "dy" || a->name == "du");
  };
  for (auto& [key, c] : split_by(e, is_mark)) {
    if (key.size() != 1 || key[0].second != Exponent(1))
      throw ParseError("field components must be linear in dt, dx, dy, du: " + text, 0);
    const std::string& n = key[0].first->name;
    int i = n == "dt" ? 0 : n == "dx" ? 1 : n == "dy" ? 2 : 3;
    v[i] = c;
  }
  return v;
}

std::string to_string(const VectorField& v) {
  static const char* marks[] = {"dt", "dx", "dy", "du"};
  std::string out;
  for (int i = 0; i < 4; ++i) {
    const Expr& c = v[i];
    if (c.is_zero()) continue;
    std::string piece;
    bool neg = false;
    if (c.is_single_term()) {
      std::string s = to_string(c);
      if (s[0] == '-') neg = true, s.erase(0, 1);
      piece = s == "1" ? marks[i] : s + "*" + marks[i];
    } else {
      piece = "(" + to_string(c) + ")*" + marks[i];
    }
    if (out.empty())
      out = neg ? "-" + piece : piece;
    else
      out += (neg ? " - " : " + ") + piece;
  }
  return out.empty() ? "0" : out;
}

bool is_point_field(const VectorField& v) {
  auto jetlike = [](Atom a) { return a->kind == AtomKind::Jet; };
  for (int i = 0; i < 4; ++i)
    if (v[i].contains(jetlike)) return false;
  return true;
}

Expr total_derivative(const Expr& e, int i) {
  Expr ui = jet(i == 0, i == 1, i == 2);
  return derive(e, [&](Atom a) -> Expr {
    switch (a->kind) {
      case AtomKind::Base:
        return a->tag == i ? Expr(1) : Expr();
      case AtomKind::Dep:
        return ui;
      case AtomKind::Jet: {
        MultiIndex m = {a->idx[0], a->idx[1], a->idx[2]};
        ++m[i];
        return jet(m[0], m[1], m[2]);
      }
      case AtomKind::Arb:
        return arb(a->tag, a->idx[0] + 1) * ui;
      case AtomKind::Coef: {
        std::array<int, 4> mi = {a->idx[0], a->idx[1], a->idx[2], a->idx[3]};
        std::array<int, 4> mu = mi;
        ++mi[i];
        ++mu[3];
        return coef(a->tag, mi) + coef(a->tag, mu) * ui;
      }
      default:
        return Expr();
    }
  });
}

Expr total_derivative(const Expr& e, const MultiIndex& alpha) {
  Expr r = e;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < alpha[i]; ++k) r = total_derivative(r, i);
  return r;
}

Expr characteristic(const VectorField& v) {
  return v.eta - v.tau * jet(1, 0, 0) - v.xi * jet(0, 1, 0) - v.zeta * jet(0, 0, 1);
}

std::vector<MultiIndex> multi_indices(int order) {
  std::vector<MultiIndex> out;
  for (int n = 1; n <= order; ++n)
    for (int a = n; a >= 0; --a)
      for (int b = n - a; b >= 0; --b) out.push_back({a, b, n - a - b});
  return out;
}

namespace {
// Memoized D^alpha Q built by one total derivative from a smaller index.
class CharacteristicDerivatives {
 public:
  explicit CharacteristicDerivatives(const VectorField& v) : q_(characteristic(v)) {}
  const Expr& get(const MultiIndex& a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    Expr r;
    if (a[0] + a[1] + a[2] == 0) {
      r = q_;
    } else {
      int i = a[2] ? 2 : a[1] ? 1 : 0;
      MultiIndex b = a;
      --b[i];
      r = total_derivative(get(b), i);
    }
    return memo_.emplace(a, std::move(r)).first->second;
  }

 private:
  Expr q_;
  std::map<MultiIndex, Expr> memo_;
};

Expr prolongation_coeff(const VectorField& v, CharacteristicDerivatives& dq, const MultiIndex& a) {
  Expr r = dq.get(a);
  for (int i = 0; i < 3; ++i) {
    if (v[i].is_zero()) continue;
    MultiIndex b = a;
    ++b[i];
    r += v[i] * jet(b[0], b[1], b[2]);
  }
  return r;
}
}  // namespace

ProlongedField prolong(const VectorField& v, int order) {
  if (order < 1) throw std::invalid_argument("prolongation order must be >= 1");
  ProlongedField p{v, order, {}};
  CharacteristicDerivatives dq(v);
  for (const auto& a : multi_indices(order)) p.coeffs.emplace(a, prolongation_coeff(v, dq, a));
  return p;
}

Expr apply_prolonged(const VectorField& v, int order, const Expr& L) {
  std::vector<Atom> atoms;
  collect_atoms(L, atoms, true);
  CharacteristicDerivatives dq(v);
  Expr r = apply_field(v, L);
  for (Atom a : atoms) {
    if (a->kind != AtomKind::Jet) continue;
    MultiIndex m = {a->idx[0], a->idx[1], a->idx[2]};
    if (m[0] + m[1] + m[2] > order) throw std::invalid_argument("equation order exceeds prolongation order");
    r += prolongation_coeff(v, dq, m) * pdiff(L, a);
  }
  return r;
}

int jet_order(const Expr& e) {
  std::vector<Atom> atoms;
  collect_atoms(e, atoms, true);
  int o = 0;
  for (Atom a : atoms)
    if (a->kind == AtomKind::Jet) o = std::max(o, a->idx[0] + a->idx[1] + a->idx[2]);
  return o;
}

}  // namespace liesym
