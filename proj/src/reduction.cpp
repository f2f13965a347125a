#include "liesym/reduction.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "liesym/symsolve.hpp"

namespace liesym {

namespace {
const char kSlot[3] = {'t', 'x', 'y'};

bool is_rfun(Atom a) { return a->kind == AtomKind::RFun; }
bool not_param(Atom a) { return !is_param_only(a); }

int identity_index(const Expr& def) {
  for (int i = 0; i < 3; ++i)
    if (def == base_var(i)) return i;
  return -1;
}

bool is_identity_var(const std::pair<std::string, Expr>& v) {
  int i = identity_index(v.second);
  return i >= 0 && v.first == std::string(1, kSlot[i]);
}

Atom var_atom(const std::pair<std::string, Expr>& v) {
  return is_identity_var(v) ? base_atom(identity_index(v.second)) : rvar_atom(v.first);
}

bool param_only(const Expr& e) { return !e.contains(not_param); }

bool vanishes(const Expr& e) {
  Expr n = normal_form(e);
  return n.is_zero() || normal_form(clear_denominators(n)).is_zero();
}
}  // namespace

std::string ReductionAnsatz::describe() const {
  std::ostringstream os;
  os << "u = " << to_string(mu);
  for (const auto& [n, d] : vars) os << ", " << n << " = " << to_string(d);
  return os.str();
}

ReductionAnsatz make_ansatz(const std::string& u, const std::vector<std::pair<std::string, std::string>>& defs,
                            const std::string& fname, const std::vector<std::string>& params,
                            const std::map<std::string, Expr>& values) {
  ParseContext ctx;
  ctx.params.insert(params.begin(), params.end());
  ctx.values = values;
  ctx.allow_coef = false;
  ReductionAnsatz a;
  a.fname = fname;
  for (const auto& [n, text] : defs) {
    if (n.size() != 1) throw std::invalid_argument("reduced variable names are single letters: " + n);
    Expr d = normal_form(parse(text, ctx));
    auto slot = std::string("txy").find(n[0]);
    if (slot != std::string::npos && d != base_var(int(slot)))
      throw std::invalid_argument("reduced variable " + n + " must be defined as itself");
    a.vars.emplace_back(n, d);
  }
  ctx.rfuns = {fname};
  a.mu = normal_form(parse(u, ctx));
  return a;
}

Expr ansatz_derivative(const Expr& e, const ReductionAnsatz& a, int i) {
  Atom v = base_atom(i);
  return derive(e, [&](Atom b) -> Expr {
    if (b == v) return Expr(1);
    if (b->kind == AtomKind::RFun && b->name == a.fname) {
      Expr r;
      for (const auto& var : a.vars) {
        Expr d = pdiff(var.second, v);
        if (!d.is_zero()) r += rfun(b->name, b->sub + var.first) * d;
      }
      return r;
    }
    return Expr();
  });
}

namespace {
Expr characteristic_on(const VectorField& Q, const ReductionAnsatz& a) {
  Expr r = subst(Q.eta, {{dep_atom(), a.mu}});
  for (int i = 0; i < 3; ++i)
    if (!Q[i].is_zero()) r -= subst(Q[i], {{dep_atom(), a.mu}}) * ansatz_derivative(a.mu, a, i);
  return normal_form(r);
}
}  // namespace

AnnihilationReport check_annihilation(const std::vector<VectorField>& gens, const ReductionAnsatz& a) {
  AnnihilationReport rep;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (const auto& [n, d] : a.vars) {
      Expr q = normal_form(apply_field(gens[g], d));
      if (!vanishes(q)) {
        rep.ok = false;
        rep.failures.push_back("Q" + std::to_string(g + 1) + "(" + n + ") = " + to_string(q));
      }
    }
    Expr c = characteristic_on(gens[g], a);
    if (!vanishes(c)) {
      rep.ok = false;
      rep.failures.push_back("Q" + std::to_string(g + 1) + "[u] = " + to_string(c));
    }
  }
  return rep;
}

// ---------------------------------------------------------------- invariants

namespace {
struct Slot {
  int letter;  // 0 t, 1 x, 2 y
  Expr def;
};

struct State {
  std::vector<Slot> slots;
  Expr phi, psi;  // mu = phi + psi * W
};

const Expr& placeholder() {
  static const Expr w = param("_W");
  return w;
}

// a / b when b is a single term, or when a is a single-term multiple of b
std::optional<Expr> divide(const Expr& a, const Expr& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Expr();
  try {
    if (b.is_single_term()) return normal_form(exact_divide(a, b));
    Expr q = normal_form(exact_divide(Expr::from_term(a.terms()[0]), Expr::from_term(b.terms()[0])));
    if (normal_form(a - q * b).is_zero()) return q;
    for (const auto& t : b.terms()) {
      q = normal_form(exact_divide(Expr::from_term(a.terms()[0]), Expr::from_term(t)));
      if (normal_form(a - q * b).is_zero()) return q;
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// Antiderivative of r along the pivot I: termwise when I is a base variable, else r * I (r invariant).
std::optional<Expr> along(const Expr& r, const Expr& I) {
  int b = identity_index(I);
  if (b < 0) return normal_form(r * I);
  Atom v = base_atom(b);
  Expr out;
  for (const auto& t : r.terms()) {
    Exponent x = 0;
    Term nt{{}, t.coeff};
    for (const auto& [a, e] : t.mono) {
      if (a == v) {
        x = e;
        continue;
      }
      if ((a->kind == AtomKind::Power || a->kind == AtomKind::Trans) && depends_on(a->arg, v)) return std::nullopt;
      nt.mono.push_back({a, e});
    }
    if (x == Exponent(-1)) return std::nullopt;
    Exponent x1 = x + Exponent(1);
    nt.coeff /= x1.to_rational();
    nt.mono.push_back({v, x1});
    std::sort(nt.mono.begin(), nt.mono.end(), [](const Factor& p, const Factor& q) { return p.first < q.first; });
    out += Expr::from_term(std::move(nt));
  }
  return normal_form(out);
}

std::optional<Rational> rational_of(const std::optional<Expr>& e) {
  if (!e || !e->is_constant()) return std::nullopt;
  return e->constant_value();
}

// Successor states for processing Q; empty when Q is outside the supported family.
std::vector<State> step(const State& s, const VectorField& Q, bool& trivial) {
  std::vector<State> out;
  const std::size_t n = s.slots.size();
  std::vector<Expr> c(n);
  bool any = false;
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = normal_form(apply_field(Q, s.slots[j].def));
    any = any || !c[j].is_zero();
  }
  Expr mu = s.phi + s.psi * placeholder();
  Expr num = subst(Q.eta, {{dep_atom(), mu}});
  for (int i = 0; i < 3; ++i)
    if (!Q[i].is_zero()) num -= Q[i] * pdiff(mu, base_atom(i));
  auto qw = divide(normal_form(subst(num, {{dep_atom(), mu}})), s.psi);
  if (!qw) return out;
  Expr kappa, m;
  for (auto& [key, coeff] : split_by(*qw, [](Atom a) { return a == placeholder().terms()[0].mono[0].first; })) {
    if (key.empty())
      m = coeff;
    else if (key.size() == 1 && key[0].second == Exponent(1))
      kappa = coeff;
    else
      return out;
  }
  if (!any) {
    if (kappa.is_zero() && m.is_zero()) {
      trivial = true;
      out.push_back(s);
      return out;
    }
    throw std::domain_error("transversality fails for " + to_string(Q));
  }
  static const int pref[3] = {0, 2, 1};
  for (int want : pref) {
    std::size_t k = n;
    for (std::size_t j = 0; j < n; ++j)
      if (s.slots[j].letter == want) k = j;
    if (k == n || c[k].is_zero()) continue;
    const Expr& Ik = s.slots[k].def;
    // scaling family
    std::vector<Rational> lam(n);
    bool diag = true;
    for (std::size_t j = 0; j < n && diag; ++j) {
      if (c[j].is_zero()) continue;
      auto l = rational_of(divide(c[j], s.slots[j].def));
      if (!l) diag = false;
      else lam[j] = *l;
    }
    auto kap = kappa.is_zero() ? std::optional<Rational>(Rational(0)) : rational_of(std::optional<Expr>(kappa));
    if (diag && kap && lam[k] != 0 && (m.is_zero() || *kap != 0)) {
      State nx;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        Expr d = lam[j] == 0 ? s.slots[j].def
                             : s.slots[j].def * pow(Ik, Exponent::from_rational(-lam[j] / lam[k]));
        nx.slots.push_back({s.slots[j].letter, normal_form(d)});
      }
      nx.phi = m.is_zero() ? s.phi : normal_form(s.phi - s.psi * m * Expr(1 / *kap));
      nx.psi = normal_form(*kap == 0 ? s.psi : s.psi * pow(Ik, Exponent::from_rational(*kap / lam[k])));
      out.push_back(std::move(nx));
    }
    // translation family
    State nx;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (j == k) continue;
      auto r = divide(c[j], c[k]);
      if (!r) {
        ok = false;
        break;
      }
      auto prim = along(*r, Ik);
      if (!prim) {
        ok = false;
        break;
      }
      nx.slots.push_back({s.slots[j].letter, normal_form(s.slots[j].def - *prim)});
    }
    if (!ok) continue;
    if (kappa.is_zero()) {
      auto sig = divide(m, c[k]);
      if (!sig) continue;
      auto prim = along(*sig, Ik);
      if (!prim) continue;
      nx.phi = normal_form(s.phi + s.psi * *prim);
      nx.psi = s.psi;
    } else {
      auto rho = divide(kappa, c[k]);
      auto shift = divide(m, kappa);
      if (!rho || !shift) continue;
      auto prim = along(*rho, Ik);
      if (!prim) continue;
      nx.phi = normal_form(s.phi - s.psi * *shift);
      nx.psi = normal_form(s.psi * exp(*prim));
    }
    out.push_back(std::move(nx));
  }
  return out;
}

ReductionAnsatz finish(const State& s, const std::string& fname) {
  ReductionAnsatz a;
  a.fname = fname;
  bool y_named = false;
  for (const auto& sl : s.slots) y_named = y_named || (sl.letter == 2 && identity_index(sl.def) < 0);
  for (const auto& sl : s.slots) {
    int id = identity_index(sl.def);
    std::string name;
    if (id >= 0 && s.slots.size() > 1)
      name = std::string(1, kSlot[id]);
    else if (s.slots.size() == 1)
      name = "s";
    else if (sl.letter == 1)
      name = "z";
    else if (sl.letter == 2)
      name = "p";
    else
      name = y_named ? "q" : "p";
    a.vars.emplace_back(name, sl.def);
  }
  Expr W = s.slots.empty() ? param("c") : rfun(fname);
  a.mu = normal_form(s.phi + s.psi * W);
  return a;
}
}  // namespace

ReductionAnsatz invariants(const std::vector<VectorField>& gens, const std::string& fname) {
  for (const auto& g : gens)
    if (!is_point_field(g)) throw std::invalid_argument("characteristics not in solvable family");
  std::vector<std::size_t> perm(gens.size());
  std::iota(perm.begin(), perm.end(), 0);
  State init{{{0, var_t()}, {1, var_x()}, {2, var_y()}}, Expr(0), Expr(1)};
  std::optional<ReductionAnsatz> found;
  std::function<void(const State&, std::size_t)> dfs = [&](const State& s, std::size_t d) {
    if (found) return;
    if (d == perm.size()) {
      if (s.slots.size() + gens.size() < 3) return;  // some generator acted trivially: not a reduction by all
      ReductionAnsatz a = finish(s, fname);
      if (check_annihilation(gens, a).ok) found = a;
      return;
    }
    bool trivial = false;
    for (const State& nx : step(s, gens[perm[d]], trivial)) {
      if (trivial) continue;
      dfs(nx, d + 1);
      if (found) return;
    }
  };
  do {
    dfs(init, 0);
    if (found) return *found;
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw std::invalid_argument("characteristics not in solvable family");
}

// ---------------------------------------------------------------- reduction

std::optional<Expr> express_in(const Expr& e0, const ReductionAnsatz& a) {
  Expr e = normal_form(e0);
  std::vector<int> kept;
  std::vector<std::pair<std::string, Expr>> moving;
  for (const auto& v : a.vars) {
    if (is_identity_var(v))
      kept.push_back(identity_index(v.second));
    else
      moving.push_back(v);
  }
  std::vector<int> free;
  for (int i : {0, 2, 1})
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) free.push_back(i);
  const std::size_t m = moving.size();
  if (m > free.size()) return std::nullopt;
  auto verify = [&](const Expr& cand) {
    SubstMap back;
    for (const auto& v : moving) back[rvar_atom(v.first)] = v.second;
    return normal_form(subst(cand, back) - e).is_zero();
  };
  if (m == 0) {
    for (int i : free)
      if (depends_on(e, base_atom(i))) return std::nullopt;
    return e;
  }
  // choose which free variables to fix; fixing order follows `free`
  std::vector<int> mask(free.size(), 0);
  std::fill(mask.end() - m, mask.end(), 1);  // 1 = solved for
  static const int values[] = {1, 0, 2};
  do {
    std::vector<int> fixed, solved;
    for (std::size_t i = 0; i < free.size(); ++i) (mask[i] ? solved : fixed).push_back(free[i]);
    for (int val : values) {
      try {
        SubstMap fix;
        for (int f : fixed) fix[base_atom(f)] = Expr(val);
        Matrix<Expr> A(m, std::vector<Expr>(m));
        std::vector<Expr> b(m);
        bool affine = true;
        for (std::size_t r = 0; r < m && affine; ++r) {
          Expr d = normal_form(subst(moving[r].second, fix));
          for (auto& [key, coeff] : split_by(d, [&](Atom x) {
                 return std::find_if(solved.begin(), solved.end(), [&](int s) { return base_atom(s) == x; }) != solved.end();
               })) {
            if (key.empty()) {
              b[r] = coeff;
              continue;
            }
            if (key.size() != 1 || key[0].second != Exponent(1)) {
              affine = false;
              break;
            }
            for (std::size_t s = 0; s < m; ++s)
              if (base_atom(solved[s]) == key[0].first) A[r][s] = coeff;
          }
        }
        if (!affine) continue;
        // Cramer on m <= 3
        auto det = [](const Matrix<Expr>& M) -> Expr {
          const std::size_t k = M.size();
          if (k == 1) return M[0][0];
          if (k == 2) return normal_form(M[0][0] * M[1][1] - M[0][1] * M[1][0]);
          return normal_form(M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                             M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                             M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]));
        };
        Expr D = normal_form(det(A));
        if (D.is_zero() || !D.is_single_term()) continue;
        SubstMap sol = fix;
        for (std::size_t s = 0; s < m; ++s) {
          Matrix<Expr> As = A;
          for (std::size_t r = 0; r < m; ++r) As[r][s] = rvar(moving[r].first) - b[r];
          sol[base_atom(solved[s])] = normal_form(exact_divide(det(As), D));
        }
        Expr cand = normal_form(subst(e, sol));
        if (verify(cand)) return cand;
      } catch (const std::exception&) {
      }
    }
  } while (std::next_permutation(mask.begin(), mask.end()));
  return std::nullopt;
}

Expr normalize_reduced(const Expr& e0) {
  Expr e = normal_form(e0);
  if (e.is_zero()) return e;
  std::map<Atom, Exponent> lo;
  for (const auto& t : e.terms())
    for (const auto& [a, x] : t.mono)
      if ((a->kind == AtomKind::Base || a->kind == AtomKind::RVar || a->kind == AtomKind::Param) && x < Exponent(0))
        if (!lo.count(a) || x < lo[a]) lo[a] = x;
  Expr scale(1);
  for (auto& [a, x] : lo) scale *= Expr::atom(a, Exponent(0) - x);
  e = normal_form(e * scale);
  e = normal_form(clear_denominators(e));
  return primitive_part(e);
}

Expr reduce(const Equation& eq, const ReductionAnsatz& a) {
  Expr lhs = eq.lhs();
  std::vector<Atom> atoms;
  collect_atoms(lhs, atoms, true);
  std::map<MultiIndex, Expr> cache{{MultiIndex{0, 0, 0}, a.mu}};
  std::function<const Expr&(MultiIndex)> D = [&](MultiIndex al) -> const Expr& {
    auto it = cache.find(al);
    if (it != cache.end()) return it->second;
    int i = al[0] > 0 ? 0 : al[1] > 0 ? 1 : 2;
    MultiIndex prev = al;
    --prev[i];
    Expr r = normal_form(ansatz_derivative(D(prev), a, i));
    return cache.emplace(al, std::move(r)).first->second;
  };
  SubstMap m{{dep_atom(), a.mu}};
  for (Atom b : atoms)
    if (b->kind == AtomKind::Jet) m[b] = D({b->idx[0], b->idx[1], b->idx[2]});
  Expr R = normal_form(subst(lhs, m));
  if (R.is_zero()) return R;

  if (a.rank() == 0) {
    auto parts = split_by(R, not_param);
    if (parts.size() == 1) return normalize_reduced(parts.begin()->second);
    throw std::domain_error("algebraic reduction leaves several independent terms: " + to_string(R));
  }
  auto parts = split_by(R, is_rfun);
  std::vector<Expr> divisors;
  for (auto& [key, c] : parts)
    if (c.is_single_term()) divisors.push_back(c);
  std::string last_bad;
  for (const Expr& dv : divisors) {
    Expr out;
    bool ok = true;
    for (auto& [key, c] : parts) {
      auto q = express_in(exact_divide(c, dv), a);
      if (!q) {
        ok = false;
        last_bad = to_string(monomial_expr(key)) + " with coefficient " + to_string(normal_form(exact_divide(c, dv)));
        break;
      }
      out += *q * monomial_expr(key);
    }
    if (ok) return normalize_reduced(out);
  }
  throw std::domain_error("reduced equation depends on the original variables: " +
                          (last_bad.empty() ? to_string(R) : last_bad));
}

bool same_up_to_multiple(const Expr& a0, const Expr& b0) {
  Expr a = normal_form(a0), b = normal_form(b0);
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  auto pa = split_by(a, is_rfun), pb = split_by(b, is_rfun);
  if (pa.size() != pb.size()) return false;
  for (auto& [k, v] : pa)
    if (!pb.count(k)) return false;
  if (pa.size() == 1 && pa.begin()->first.empty()) {
    if (param_only(a) && param_only(b)) return primitive_part(a) == primitive_part(b) || primitive_part(a) == primitive_part(-b);
  }
  const Expr& a0c = pa.begin()->second;
  const Expr& b0c = pb.begin()->second;
  for (auto& [k, v] : pa)
    if (!normal_form(v * b0c - a0c * pb.at(k)).is_zero()) return false;
  return true;
}

}  // namespace liesym
