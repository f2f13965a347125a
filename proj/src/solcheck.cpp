#include "liesym/solcheck.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "liesym/parse.hpp"

namespace liesym {

std::string SolResult::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::SymbolicZero: os << "symbolic_zero"; break;
    case Kind::Numeric: os << "numeric(max=" << max_abs << ", points=" << points << ")"; break;
    case Kind::SymbolicNonzero: os << "symbolic_nonzero(" << to_string(residual) << ")"; break;
    case Kind::NoPoints: os << "no admissible grid points"; break;
  }
  return os.str();
}

namespace {
Expr derivative(const Expr& sol, int at, int ax, int ay) {
  Expr r = sol;
  for (int k = 0; k < at; ++k) r = pdiff(r, base_atom(0));
  for (int k = 0; k < ax; ++k) r = pdiff(r, base_atom(1));
  for (int k = 0; k < ay; ++k) r = pdiff(r, base_atom(2));
  return r;
}

SubstMap solution_map(const Expr& lhs, const Expr& sol) {
  std::vector<Atom> atoms;
  collect_atoms(lhs, atoms, true);
  SubstMap m{{dep_atom(), sol}};
  for (Atom a : atoms)
    if (a->kind == AtomKind::Jet) m[a] = derivative(sol, a->idx[0], a->idx[1], a->idx[2]);
    else if (a->kind == AtomKind::Arb)
      throw std::invalid_argument("equation still has arbitrary elements");
  return m;
}

void guards_into(const Expr& e, std::vector<Expr>& out) {
  for (const auto& t : e.terms())
    for (const auto& [a, x] : t.mono) {
      bool singular_power = x < Exponent(0) || !x.is_integer();
      switch (a->kind) {
        case AtomKind::Base:
        case AtomKind::Param:
          if (singular_power) out.push_back(Expr::atom(a));
          break;
        case AtomKind::Power:
          out.push_back(a->arg);
          guards_into(a->arg, out);
          break;
        case AtomKind::Trans: {
          const Expr& g = a->arg;
          switch (Head(a->tag)) {
            case Head::Tan:
            case Head::Sec: out.push_back(cos(g)); break;
            case Head::Cot:
            case Head::Csc: out.push_back(sin(g)); break;
            case Head::Coth:
            case Head::Csch: out.push_back(trans(Head::Sinh, g)); break;
            case Head::Ln: out.push_back(g); break;
            case Head::Sin:
            case Head::Cos:
            case Head::Sinh:
            case Head::Cosh:
            case Head::Tanh:
            case Head::Sech:
            case Head::Exp:
              if (x < Exponent(0)) out.push_back(Expr::atom(a));
              break;
          }
          guards_into(g, out);
          break;
        }
        default:
          break;
      }
    }
}
}  // namespace

Expr substitute_solution(const Equation& eq, const Expr& sol) {
  Expr lhs = eq.lhs();
  return normal_form(subst(lhs, solution_map(lhs, sol)));
}

std::vector<Expr> singular_guards(const Expr& e) {
  std::vector<Expr> out;
  guards_into(normal_form(e), out);
  return out;
}

double numeric_residual(const Equation& eq, const Expr& sol, const GridOptions& opt, int* used) {
  Expr lhs = eq.lhs();
  SubstMap m = solution_map(lhs, sol);
  std::vector<Expr> guards;
  for (auto& [a, e] : m) guards_into(e, guards);
  double worst = 0;
  int count = 0;
  const double step = opt.n > 1 ? (opt.hi - opt.lo) / (opt.n - 1) : 0;
  for (int i = 0; i < opt.n; ++i)
    for (int j = 0; j < opt.n; ++j)
      for (int k = 0; k < opt.n; ++k) {
        NumericPoint base{{base_atom(0), opt.lo + i * step + opt.shift},
                          {base_atom(1), opt.lo + j * step + 2 * opt.shift},
                          {base_atom(2), opt.lo + k * step + 3 * opt.shift}};
        try {
          bool near = false;
          for (const auto& g : guards)
            if (std::fabs(eval_numeric(g, base)) < opt.margin) {
              near = true;
              break;
            }
          if (near) continue;
          NumericPoint p = base;
          for (auto& [a, e] : m) p[a] = eval_numeric(e, base);
          double v = eval_numeric(lhs, p);
          if (!std::isfinite(v)) continue;
          worst = std::max(worst, std::fabs(v));
          ++count;
        } catch (const std::domain_error&) {
        }
      }
  if (used) *used = count;
  return worst;
}

SolResult check_solution(const Equation& eq, const Expr& sol, const GridOptions& opt) {
  SolResult r;
  r.residual = substitute_solution(eq, sol);
  if (r.residual.is_zero()) return r;
  bool blocked = r.residual.contains([](Atom a) { return a->kind == AtomKind::Trans || a->kind == AtomKind::Power; });
  if (!blocked) {
    r.kind = SolResult::Kind::SymbolicNonzero;
    return r;
  }
  r.max_abs = numeric_residual(eq, sol, opt, &r.points);
  r.kind = r.points == 0 ? SolResult::Kind::NoPoints : SolResult::Kind::Numeric;
  return r;
}

namespace {
Rational coefficient(const Expr& e) {
  Expr n = normal_form(e);
  if (!n.is_constant()) throw std::invalid_argument("flow: coefficient " + to_string(n) + " is not constant");
  return n.constant_value();
}

// x' = lambda x + mu, x(0) = x0, at parameter s
Expr affine_flow(const Expr& x0, const Rational& lambda, const Rational& mu, const Rational& s) {
  if (lambda == 0) return x0 + Expr(mu * s);
  Expr g = exp(Expr(lambda * s));
  return g * x0 + Expr(mu / lambda) * (g - Expr(1));
}
}  // namespace

Expr flow_solution(const VectorField& Q, const Rational& s, const Expr& sol) {
  const Expr t = var_t(), x = var_x(), y = var_y(), u = var_u();
  SubstMap zero_txyu{{base_atom(0), Expr(0)}, {base_atom(1), Expr(0)}, {base_atom(2), Expr(0)}, {dep_atom(), Expr(0)}};
  auto lin = [&](const Expr& c, Atom v) { return coefficient(pdiff(c, v)); };
  auto cst = [&](const Expr& c) { return coefficient(subst(c, zero_txyu)); };
  auto only = [&](const Expr& c, std::initializer_list<Atom> allowed) {
    std::vector<Atom> atoms;
    collect_atoms(c, atoms, true);
    for (Atom a : atoms) {
      bool ok = a->kind == AtomKind::Param;
      for (Atom b : allowed) ok = ok || a == b;
      if (!ok) throw std::invalid_argument("flow: unsupported generator " + to_string(Q));
    }
  };
  only(Q[0], {base_atom(0)});
  only(Q[1], {base_atom(0), base_atom(1)});
  only(Q[2], {base_atom(2)});
  only(Q[3], {dep_atom()});
  Rational a = lin(Q[0], base_atom(0)), b = cst(Q[0]);
  Rational c = lin(Q[1], base_atom(1)), d = lin(Q[1], base_atom(0)), e = cst(Q[1]);
  Rational f = lin(Q[2], base_atom(2)), g = cst(Q[2]);
  Rational k = lin(Q[3], dep_atom()), m = cst(Q[3]);
  for (int i = 0; i < 4; ++i) {
    Expr chk = Q[i] - (i == 0 ? Expr(a) * t + Expr(b) : i == 1 ? Expr(c) * x + Expr(d) * t + Expr(e)
                       : i == 2 ? Expr(f) * y + Expr(g) : Expr(k) * u + Expr(m));
    if (!normal_form(chk).is_zero()) throw std::invalid_argument("flow: unsupported generator " + to_string(Q));
  }
  if (d != 0 && (a != 0 || c != 0)) throw std::invalid_argument("flow: coupled t-x scaling not supported");
  // pull the point back by -s, evaluate, push u forward by s
  Expr t0 = affine_flow(t, a, b, -s);
  Expr x0 = d == 0 ? affine_flow(x, c, e, -s) : x - Expr(d) * (t * Expr(s) - Expr(b * s * s / 2)) - Expr(e * s);
  Expr y0 = affine_flow(y, f, g, -s);
  Expr pulled = subst(sol, {{base_atom(0), t0}, {base_atom(1), x0}, {base_atom(2), y0}});
  return normal_form(subst(affine_flow(u, k, m, s), {{dep_atom(), pulled}}));
}

std::vector<Rational> default_lattice() {
  return {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2), Rational(2), Rational(-2), Rational(3), Rational(-3)};
}

Constraint parse_constraint(const std::string& text) {
  static const std::pair<const char*, Relation> ops[] = {
      {"!=", Relation::NonZero}, {">", Relation::Positive}, {"<", Relation::Negative}, {"=", Relation::Zero}};
  for (auto& [op, rel] : ops) {
    auto p = text.find(op);
    if (p == std::string::npos) continue;
    std::string rhs = text.substr(p + std::string(op).size());
    if (rhs.find_first_not_of(" 0") != std::string::npos || rhs.find('0') == std::string::npos)
      throw std::invalid_argument("constraint must compare with 0: " + text);
    std::string lhs = text.substr(0, p);
    lhs.erase(lhs.find_last_not_of(' ') + 1);
    lhs.erase(0, lhs.find_first_not_of(' '));
    return Constraint{text, lhs, rel};
  }
  throw std::invalid_argument("constraint without relation: " + text);
}

namespace {
bool holds(const Expr& v, Relation rel) {
  double x;
  if (v.is_constant()) {
    x = v.constant_value().get_d();
  } else {
    x = eval_numeric(v, {});
  }
  switch (rel) {
    case Relation::Positive: return x > 1e-12;
    case Relation::Negative: return x < -1e-12;
    case Relation::NonZero: return std::fabs(x) > 1e-12;
    case Relation::Zero: return std::fabs(x) <= 1e-12;
  }
  return false;
}
}  // namespace

std::vector<Instance> instantiate(const SolutionSpec& spec, int limit) {
  std::vector<Instance> out;
  const std::size_t n = spec.constants.size();
  std::vector<std::size_t> pos(n, 0);
  for (const auto& c : spec.constants)
    if (c.values.empty()) throw std::invalid_argument("empty domain for constant " + c.name);
  while (true) {
    ParseContext ctx;
    std::map<std::string, Rational> w;
    for (std::size_t i = 0; i < n; ++i) {
      w[spec.constants[i].name] = spec.constants[i].values[pos[i]];
      ctx.values[spec.constants[i].name] = Expr(spec.constants[i].values[pos[i]]);
    }
    bool ok = true;
    try {
      for (const auto& [name, text] : spec.defines) ctx.values[name] = normal_form(parse(text, ctx));
      for (const auto& c : spec.constraints)
        if (!holds(normal_form(parse(c.expr, ctx)), c.rel)) {
          ok = false;
          break;
        }
    } catch (const std::domain_error&) {
      ok = false;
    } catch (const ValueError&) {
      ok = false;
    } catch (const std::invalid_argument&) {
      ok = false;  // e.g. division by zero while binding
    }
    if (ok) {
      Instance inst;
      inst.witness = w;
      inst.eq = Equation::from_lhs(parse(spec.lhs, ctx));
      inst.sol = normal_form(parse(spec.u, ctx));
      out.push_back(std::move(inst));
      if (int(out.size()) >= limit) break;
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++pos[i] < spec.constants[i].values.size()) break;
      pos[i] = 0;
      if (i == 0) {
        i = n + 1;
        break;
      }
    }
    if (n == 0 || i == n + 1) break;
  }
  if (out.empty()) throw std::runtime_error("no admissible constant witness on the lattice");
  return out;
}

}  // namespace liesym
