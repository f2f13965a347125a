#include "liesym/symsolve.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace liesym {

bool is_param_only(Atom a) {
  switch (a->kind) {
    case AtomKind::Param:
      return true;
    case AtomKind::Power:
    case AtomKind::Trans: {
      std::vector<Atom> inner;
      collect_atoms(a->arg, inner, false);
      for (Atom b : inner)
        if (!is_param_only(b)) return false;
      return true;
    }
    default:
      return false;
  }
}

namespace {
bool not_param(Atom a) { return !is_param_only(a); }
}  // namespace

AnsatzBasis AnsatzBasis::polynomial(int degree) {
  AnsatzBasis b;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a)
      for (int c = d - a; c >= 0; --c)
        for (int e = d - a - c; e >= 0; --e) {
          int f = d - a - c - e;
          b.functions.push_back(pow(var_t(), Exponent(a)) * pow(var_x(), Exponent(c)) * pow(var_y(), Exponent(e)) *
                                pow(var_u(), Exponent(f)));
        }
  return b;
}

AnsatzBasis AnsatzBasis::y_trig_extension() {
  Expr c = cos(Expr(2) * var_y()), s = sin(Expr(2) * var_y());
  return AnsatzBasis{{c, s, var_u() * c, var_u() * s}};
}

AnsatzBasis AnsatzBasis::y_exp_extension() {
  Expr p = exp(Expr(2) * var_y()), m = exp(Expr(-2) * var_y());
  return AnsatzBasis{{p, m, var_u() * p, var_u() * m}};
}

AnsatzBasis AnsatzBasis::operator+(const AnsatzBasis& o) const {
  AnsatzBasis r = *this;
  r.functions.insert(r.functions.end(), o.functions.begin(), o.functions.end());
  return r;
}

bool AnsatzBasis::independent() const {
  // Normal forms are canonical, so independence over the constants is a rank question on monomials.
  std::map<Monomial, std::size_t, MonomialLess> rows;
  std::vector<std::map<Monomial, Expr, MonomialLess>> parts;
  for (const auto& f : functions) {
    parts.push_back(split_by(normal_form(f), not_param));
    for (auto& [k, v] : parts.back()) rows.emplace(k, rows.size());
  }
  Matrix<Expr> m(rows.size(), std::vector<Expr>(functions.size()));
  for (std::size_t j = 0; j < parts.size(); ++j)
    for (auto& [k, v] : parts[j]) m[rows[k]][j] = v;
  return rank(m, functions.size()) == functions.size();
}

std::string Residual::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::SymbolicZero: os << "symbolic_zero"; break;
    case Kind::Nonzero: os << "nonzero(" << to_string(expr) << ")"; break;
    case Kind::Numeric: os << "numeric(" << max_abs << ")"; break;
  }
  return os.str();
}

Residual residual_of(const Expr& e0, std::uint64_t seed, int points) {
  Expr e = normal_form(e0);
  if (e.is_zero()) return {};
  Expr cleared = normal_form(clear_denominators(e));
  if (cleared.is_zero()) return {};
  bool blocked = cleared.contains([](Atom a) { return a->kind == AtomKind::Trans || a->kind == AtomKind::Power; });
  if (!blocked) return {Residual::Kind::Nonzero, e, 0};
  std::vector<Atom> atoms;
  collect_atoms(e, atoms, true);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.5, 2.0), base(0.2, 1.2), jetd(-1.0, 1.0), par(0.5, 1.5);
  double worst = 0;
  int done = 0;
  for (int k = 0; k < points * 4 && done < points; ++k) {
    NumericPoint p;
    for (Atom a : atoms) {
      switch (a->kind) {
        case AtomKind::Dep: p[a] = pos(rng); break;
        case AtomKind::Base: p[a] = base(rng); break;
        case AtomKind::Param: p[a] = par(rng); break;
        case AtomKind::Power:
        case AtomKind::Trans: break;
        default: p[a] = jetd(rng); break;
      }
    }
    try {
      double v = eval_numeric(e, p);
      if (!std::isfinite(v)) continue;
      worst = std::max(worst, std::fabs(v));
      ++done;
    } catch (const std::domain_error&) {
    }
  }
  if (done == 0) return {Residual::Kind::Nonzero, e, 0};
  return {Residual::Kind::Numeric, e, worst};
}

Residual check_symmetry(const Equation& eq, const VectorField& v, std::uint64_t seed) {
  if (v.is_zero()) return {};
  return residual_of(restricted_criterion(eq, v), seed);
}

namespace {
Expr derivative_of(const Expr& f, const std::array<std::uint8_t, 4>& idx) {
  Expr r = f;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < idx[i]; ++k) r = pdiff(r, base_atom(i));
  for (int k = 0; k < idx[3]; ++k) r = pdiff(r, dep_atom());
  return r;
}

VectorField field_from_coords(const std::vector<Expr>& x, const AnsatzBasis& b) {
  VectorField v;
  std::size_t n = b.size();
  for (int f = 0; f < 4; ++f)
    for (std::size_t j = 0; j < n; ++j)
      if (!x[f * n + j].is_zero()) v[f] += x[f * n + j] * b.functions[j];
  return v;
}
}  // namespace

SymmetryAlgebraResult solve_system(const DeterminingSystem& ds, const AnsatzBasis& basis) {
  const std::size_t n = basis.size(), ncols = 4 * n;
  std::map<std::pair<const AtomData*, std::size_t>, Expr> dcache;
  Matrix<Expr> rows;
  for (const auto& d : ds.equations) {
    auto parts = split_by(d.expr, [](Atom a) { return a->kind == AtomKind::Coef; });
    std::map<Monomial, std::vector<Expr>, MonomialLess> eq_rows;
    for (auto& [key, coeff] : parts) {
      if (key.size() != 1 || key[0].second != Exponent(1))
        throw std::invalid_argument("determining equation is not linear in the unknowns");
      Atom a = key[0].first;
      for (std::size_t j = 0; j < n; ++j) {
        auto ck = std::make_pair(a.get(), j);
        auto it = dcache.find(ck);
        if (it == dcache.end()) it = dcache.emplace(ck, derivative_of(basis.functions[j], a->idx)).first;
        if (it->second.is_zero()) continue;
        Expr contrib = normal_form(coeff * it->second);
        for (auto& [mk, mv] : split_by(contrib, not_param)) {
          auto& row = eq_rows[mk];
          if (row.empty()) row.assign(ncols, Expr());
          row[a->tag * n + j] += mv;
        }
      }
    }
    for (auto& [k, r] : eq_rows) {
      bool nz = false;
      for (auto& e : r) nz = nz || !e.is_zero();
      if (nz) rows.push_back(std::move(r));
    }
  }
  bool rational = true;
  for (auto& r : rows)
    for (auto& e : r) rational = rational && e.is_constant();

  SymmetryAlgebraResult res;
  Matrix<Expr> null;
  if (rational) {
    Matrix<Rational> q(rows.size(), std::vector<Rational>(ncols));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < ncols; ++j) q[i][j] = rows[i][j].constant_value();
    for (auto& v : nullspace(q, ncols)) {
      std::vector<Expr> e(ncols);
      for (std::size_t j = 0; j < ncols; ++j) e[j] = Expr(v[j]);
      null.push_back(std::move(e));
    }
  } else {
    null = nullspace(rows, ncols, &res.assumptions);
  }
  res.dimension = int(null.size());
  for (auto& x : null) res.basis.push_back(field_from_coords(x, basis));
  res.coords = std::move(null);
  return res;
}

SymmetryAlgebraResult solve_ansatz(const Equation& eq, const AnsatzBasis& basis) {
  return solve_system(determining_system(eq), basis);
}

std::optional<std::vector<Expr>> ansatz_coordinates(const VectorField& v, const AnsatzBasis& basis) {
  const std::size_t n = basis.size();
  std::vector<std::map<Monomial, Expr, MonomialLess>> parts;
  std::map<Monomial, std::size_t, MonomialLess> rowid;
  for (const auto& f : basis.functions) {
    parts.push_back(split_by(normal_form(f), not_param));
    for (auto& [k, x] : parts.back()) rowid.emplace(k, rowid.size());
  }
  std::vector<Expr> out(4 * n);
  for (int f = 0; f < 4; ++f) {
    auto target = split_by(normal_form(v[f]), not_param);
    for (auto& [k, x] : target)
      if (!rowid.count(k)) return std::nullopt;
    // augmented system [basis | target]
    Matrix<Expr> m(rowid.size(), std::vector<Expr>(n + 1));
    for (std::size_t j = 0; j < n; ++j)
      for (auto& [k, x] : parts[j]) m[rowid[k]][j] = x;
    for (auto& [k, x] : target) m[rowid[k]][n] = x;
    Echelon<Expr> e = row_reduce(m, n + 1);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
      if (e.pivots[i] == int(n)) return std::nullopt;
      out[f * n + e.pivots[i]] = e.rows[i][n];
    }
  }
  return out;
}

bool contains_field(const SymmetryAlgebraResult& r, const VectorField& v, const AnsatzBasis& basis) {
  auto c = ansatz_coordinates(v, basis);
  if (!c) return false;
  return in_span(r.coords, *c, 4 * basis.size());
}

ImplicationReport check_implied(const DeterminingSystem& sys, const std::vector<Expr>& claims, const AnsatzBasis& basis) {
  SymmetryAlgebraResult sol = solve_system(sys, basis);
  ImplicationReport rep;
  for (const auto& c : claims) {
    bool ok = true;
    for (const auto& v : sol.basis)
      if (!substitute_field(c, v).is_zero()) {
        ok = false;
        break;
      }
    (ok ? rep.implied : rep.not_implied).push_back(to_string(c) + " = 0");
  }
  return rep;
}

}  // namespace liesym
