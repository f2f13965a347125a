#include "liesym/determine.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace liesym {

namespace {
bool is_arb(Atom a) { return a->kind == AtomKind::Arb; }
bool is_jet(Atom a) { return a->kind == AtomKind::Jet; }
bool is_coef(Atom a) { return a->kind == AtomKind::Coef; }
bool has_t_jet(const Expr& e) {
  return e.contains([](Atom a) { return a->kind == AtomKind::Jet && a->idx[0] > 0; });
}
}  // namespace

int Equation::order() const { return std::max(1, jet_order(phi)); }

bool Equation::has_generic() const { return phi.contains(is_arb); }

Equation Equation::from_class(std::optional<Expr> F, std::optional<Expr> G, std::optional<Expr> H, std::string name) {
  Equation eq;
  eq.name = std::move(name);
  eq.in_class = true;
  eq.spec = {F, G, H};
  Expr f = F ? *F : arb(0), g = G ? *G : arb(1), h = H ? *H : arb(2);
  Expr flux = total_derivative(f, MultiIndex{0, 3, 0}) + total_derivative(g, MultiIndex{0, 1, 2}) +
              total_derivative(h, MultiIndex{0, 1, 0});
  eq.phi = -flux;
  if (eq.phi.is_zero()) throw std::invalid_argument("degenerate equation: u_t = 0");
  return eq;
}

Equation Equation::from_lhs(const Expr& L, std::string name) {
  auto parts = split_by(L, [](Atom a) { return a->kind == AtomKind::Jet && a->idx[0] == 1 && a->idx[1] == 0 && a->idx[2] == 0; });
  Monomial ut = {{jet_atom(1, 0, 0), Exponent(1)}};
  auto it = parts.find(ut);
  if (it == parts.end() || it->second != Expr(1))
    throw std::invalid_argument("equation must have the form u_t + ... with unit coefficient");
  Equation eq;
  eq.name = std::move(name);
  eq.phi = jet(1, 0, 0) - L;
  if (has_t_jet(eq.phi)) throw std::invalid_argument("right side of u_t contains t-derivatives");
  if (eq.phi.is_zero()) throw std::invalid_argument("degenerate equation: u_t = 0");
  return eq;
}

Equation substitute_params(const Equation& eq, const std::map<std::string, Rational>& values) {
  SubstMap m;
  for (const auto& [k, v] : values) m[param_atom(k)] = Expr(v);
  Equation out = eq;
  out.phi = subst(eq.phi, m);
  for (auto& s : out.spec)
    if (s) s = subst(*s, m);
  out.clearing = subst(eq.clearing, m);
  if (out.phi.is_zero()) throw std::invalid_argument("degenerate equation after parameter substitution");
  std::vector<std::string> left;
  for (const auto& p : eq.params)
    if (!values.count(p)) left.push_back(p);
  out.params = left;
  return out;
}

Expr on_manifold(const Expr& e, const Equation& eq) {
  if (!has_t_jet(e)) return e;
  std::map<MultiIndex, Expr> rep;
  std::function<const Expr&(const MultiIndex&)> get = [&](const MultiIndex& a) -> const Expr& {
    auto it = rep.find(a);
    if (it != rep.end()) return it->second;
    Expr r;
    if (a[0] == 1) {
      r = total_derivative(eq.phi, MultiIndex{0, a[1], a[2]});
    } else {
      Expr prev = get({a[0] - 1, a[1], a[2]});
      Expr d = total_derivative(prev, 0);
      // d contains u_t-type jets of order one in t only
      std::vector<Atom> atoms;
      collect_atoms(d, atoms, true);
      SubstMap m;
      for (Atom b : atoms)
        if (b->kind == AtomKind::Jet && b->idx[0] > 0) m[b] = get({b->idx[0], b->idx[1], b->idx[2]});
      r = subst(d, m);
    }
    return rep.emplace(a, std::move(r)).first->second;
  };
  std::vector<Atom> atoms;
  collect_atoms(e, atoms, true);
  SubstMap m;
  for (Atom b : atoms)
    if (b->kind == AtomKind::Jet && b->idx[0] > 0) m[b] = get({b->idx[0], b->idx[1], b->idx[2]});
  return subst(e, m);
}

Expr restricted_criterion(const Equation& eq, const VectorField& v) {
  if (!is_point_field(v)) throw std::invalid_argument("not a point symmetry: coefficients depend on jet variables");
  Expr crit = apply_prolonged(v, std::max(eq.order(), 1), eq.lhs());
  if (eq.clearing != Expr(1)) crit = crit * eq.clearing;
  return normal_form(on_manifold(crit, eq));
}

std::map<Monomial, Expr, MonomialLess> criterion_coefficients(const Equation& eq) {
  return split_by(restricted_criterion(eq, VectorField::generic()), is_jet);
}

bool assumed_nonzero(Atom a) {
  switch (a->kind) {
    case AtomKind::Param:
    case AtomKind::Dep:
      return true;
    case AtomKind::Power:
      return a->arg.is_constant();
    case AtomKind::Arb:
      return (a->tag < 2 && a->idx[0] == 1) || (a->tag == 2 && a->idx[0] == 2);
    case AtomKind::Trans:
      return a->tag == std::uint8_t(Head::Exp);
    default:
      return false;
  }
}

Expr normalize_equation(const Expr& e) {
  if (e.is_zero()) return e;
  std::map<Atom, Exponent> lo;
  bool first = true;
  for (const auto& t : e.terms()) {
    std::map<Atom, Exponent> here;
    for (const auto& [a, x] : t.mono)
      if (assumed_nonzero(a)) here[a] = x;
    if (first) {
      lo = here;
      first = false;
      continue;
    }
    for (auto& [a, x] : lo) {
      auto it = here.find(a);
      Exponent v = it == here.end() ? Exponent(0) : it->second;
      if (v < x) x = v;
    }
    for (auto& [a, x] : here)
      if (!lo.count(a) && x < Exponent(0)) lo[a] = x;
  }
  Expr scale(1);
  for (auto& [a, x] : lo)
    if (!x.is_zero()) scale *= Expr::atom(a, Exponent(0) - x);
  return primitive_part(scale == Expr(1) ? e : e * scale);
}

namespace {
DeterminingSystem assemble(std::vector<DetEquation> raw) {
  std::map<Expr, DetEquation> uniq;
  for (auto& d : raw) {
    d.expr = normalize_equation(d.expr);
    if (d.expr.is_zero()) continue;
    d.classifying = d.expr.contains(is_arb);
    auto it = uniq.find(d.expr);
    if (it == uniq.end()) {
      uniq.emplace(d.expr, std::move(d));
    } else {
      for (auto& s : d.sources) it->second.sources.push_back(s);
    }
  }
  DeterminingSystem ds;
  for (auto& [k, v] : uniq) ds.equations.push_back(std::move(v));
  return ds;
}
}  // namespace

DeterminingSystem determining_system(const Equation& eq) {
  std::vector<DetEquation> raw;
  for (auto& [key, c] : criterion_coefficients(eq)) raw.push_back(DetEquation{c, {key}, false});
  return assemble(std::move(raw));
}

DeterminingSystem split_arbitrary(const DeterminingSystem& ds) {
  std::vector<DetEquation> raw;
  for (const auto& d : ds.equations) {
    if (!d.classifying) {
      raw.push_back(d);
      continue;
    }
    for (auto& [key, c] : split_by(d.expr, is_arb)) {
      DetEquation n{c, {}, false};
      for (const auto& s : d.sources) {
        Monomial m = s;
        m.insert(m.end(), key.begin(), key.end());
        n.sources.push_back(m);
      }
      raw.push_back(std::move(n));
    }
  }
  return assemble(std::move(raw));
}

namespace {
bool divides(Atom z, Atom a) {
  if (z->tag != a->tag) return false;
  for (int i = 0; i < 4; ++i)
    if (a->idx[i] < z->idx[i]) return false;
  return true;
}
}  // namespace

DeterminingSystem simplify_system(const DeterminingSystem& ds) {
  std::vector<Atom> zeros;
  std::vector<DetEquation> cur = ds.equations;
  auto is_zeroed = [&](Atom a) {
    for (Atom z : zeros)
      if (divides(z, a)) return true;
    return false;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& d : cur) {
      if (d.expr.size() != 1) continue;
      const Monomial& m = d.expr.terms()[0].mono;
      int coefs = 0, other = 0;
      Atom c;
      for (const auto& [a, e] : m) {
        if (is_coef(a))
          ++coefs, c = a;
        else if (!assumed_nonzero(a))
          ++other;
      }
      if (coefs == 1 && other == 0 && !is_zeroed(c)) {
        zeros.push_back(c);
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<DetEquation> next;
    for (auto& d : cur) {
      std::vector<Term> kept;
      for (const auto& t : d.expr.terms()) {
        bool z = false;
        for (const auto& [a, e] : t.mono)
          if (is_coef(a) && is_zeroed(a)) z = true;
        if (!z) kept.push_back(t);
      }
      Expr e = Expr::from_terms(std::move(kept));
      if (!e.is_zero()) next.push_back(DetEquation{e, d.sources, d.classifying});
    }
    cur = assemble(std::move(next)).equations;
  }
  std::vector<DetEquation> out;
  for (Atom z : zeros) {
    bool minimal = true;
    for (Atom w : zeros)
      if (w != z && divides(w, z)) minimal = false;
    if (minimal) out.push_back(DetEquation{Expr::atom(z), {}, false});
  }
  for (auto& d : cur) out.push_back(d);
  return assemble(std::move(out));
}

Expr substitute_field(const Expr& det_eq, const VectorField& v) {
  std::vector<Atom> atoms;
  collect_atoms(det_eq, atoms, false);
  SubstMap m;
  for (Atom a : atoms) {
    if (!is_coef(a)) continue;
    Expr f = v[a->tag];
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < a->idx[i]; ++k) f = pdiff(f, base_atom(i));
    for (int k = 0; k < a->idx[3]; ++k) f = pdiff(f, dep_atom());
    m[a] = f;
  }
  return normal_form(subst(det_eq, m));
}

std::vector<std::string> DeterminingSystem::lines() const {
  std::vector<std::string> out;
  for (const auto& d : equations) out.push_back(to_string(d.expr) + " = 0");
  return out;
}

std::string DeterminingSystem::report() const {
  std::ostringstream os;
  for (const auto& l : lines()) os << l << "\n";
  return os.str();
}

}  // namespace liesym
