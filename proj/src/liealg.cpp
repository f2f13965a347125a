#include "liesym/liealg.hpp"

#include <sstream>
#include <stdexcept>

#include "liesym/symsolve.hpp"

namespace liesym {

namespace {
bool not_param(Atom a) { return !is_param_only(a); }

Rational factorial(int n) {
  Rational r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}
}  // namespace

VectorField commutator(const VectorField& v, const VectorField& w) {
  VectorField r;
  for (int k = 0; k < 4; ++k) r[k] = normal_form(apply_field(v, w[k]) - apply_field(w, v[k]));
  return r;
}

VectorField combine(const std::vector<Expr>& coords, const std::vector<VectorField>& basis) {
  VectorField r;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!coords[i].is_zero()) r = r + coords[i] * basis[i];
  return map_field(r, [](const Expr& e) { return normal_form(e); });
}

std::optional<std::vector<Expr>> coordinates(const VectorField& v, const std::vector<VectorField>& basis) {
  const std::size_t n = basis.size();
  std::map<std::pair<int, Monomial>, std::size_t> rowid;
  std::vector<std::array<std::map<Monomial, Expr, MonomialLess>, 4>> parts(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const VectorField& f = j < n ? basis[j] : v;
    for (int k = 0; k < 4; ++k) {
      parts[j][k] = split_by(normal_form(f[k]), not_param);
      for (auto& [m, c] : parts[j][k]) rowid.emplace(std::make_pair(k, m), rowid.size());
    }
  }
  Matrix<Expr> mat(rowid.size(), std::vector<Expr>(n + 1));
  for (std::size_t j = 0; j <= n; ++j)
    for (int k = 0; k < 4; ++k)
      for (auto& [m, c] : parts[j][k]) mat[rowid[{k, m}]][j] = c;
  Echelon<Expr> e = row_reduce(mat, n + 1);
  std::vector<Expr> out(n);
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivots[i] == int(n)) return std::nullopt;
    out[e.pivots[i]] = normal_form(e.rows[i][n]);
  }
  return out;
}

LieAlgebra structure_constants(const std::vector<VectorField>& basis, std::vector<std::string> labels) {
  LieAlgebra g;
  g.basis = basis;
  const std::size_t n = basis.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i + 1));
  g.labels = std::move(labels);
  g.c.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto co = coordinates(commutator(basis[i], basis[j]), basis);
      if (!co) {
        g.closed = false;
        g.open_pairs.emplace_back(int(i), int(j));
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) {
        g.c[i][j][k] = (*co)[k];
        g.c[j][i][k] = normal_form(-(*co)[k]);
      }
    }
  return g;
}

bool antisymmetric(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!normal_form(g.c[i][j][k] + g.c[j][i][k]).is_zero()) return false;
  return true;
}

std::vector<Expr> unit(std::size_t n, std::size_t k) {
  std::vector<Expr> e(n);
  e[k] = Expr(1);
  return e;
}

std::vector<Expr> bracket_coords(const LieAlgebra& g, const std::vector<Expr>& a, const std::vector<Expr>& b) {
  const std::size_t n = g.dim();
  std::vector<Expr> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      Expr ab = a[i] * b[j];
      for (std::size_t k = 0; k < n; ++k)
        if (!g.c[i][j][k].is_zero()) r[k] += ab * g.c[i][j][k];
    }
  }
  for (auto& e : r) e = normal_form(e);
  return r;
}

bool jacobi_holds(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        auto ei = unit(n, i), ej = unit(n, j), ek = unit(n, k);
        auto a = bracket_coords(g, bracket_coords(g, ei, ej), ek);
        auto b = bracket_coords(g, bracket_coords(g, ej, ek), ei);
        auto c = bracket_coords(g, bracket_coords(g, ek, ei), ej);
        for (std::size_t m = 0; m < n; ++m)
          if (!normal_form(a[m] + b[m] + c[m]).is_zero()) return false;
      }
  return true;
}

const char* ad_kind_name(AdKind k) {
  switch (k) {
    case AdKind::Nilpotent: return "nilpotent";
    case AdKind::Diagonal: return "diagonal";
    default: return "other";
  }
}

Matrix<Expr> ad_matrix(const LieAlgebra& g, int i) {
  const std::size_t n = g.dim();
  Matrix<Expr> m(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m[k][j] = g.c[i][j][k];
  return m;
}

namespace {
std::vector<Expr> mul(const Matrix<Expr>& m, const std::vector<Expr>& v) {
  std::vector<Expr> r(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!m[k][j].is_zero() && !v[j].is_zero()) r[k] += m[k][j] * v[j];
    r[k] = normal_form(r[k]);
  }
  return r;
}

bool all_zero(const std::vector<Expr>& v) {
  for (auto& e : v)
    if (!e.is_zero()) return false;
  return true;
}

bool is_nilpotent(const Matrix<Expr>& m) {
  const std::size_t n = m.size();
  for (std::size_t j = 0; j < n; ++j) {
    auto v = unit(n, j);
    for (std::size_t k = 0; k < n && !all_zero(v); ++k) v = mul(m, v);
    if (!all_zero(v)) return false;
  }
  return true;
}
}  // namespace

AdKind classify(const Matrix<Expr>& m) {
  if (is_nilpotent(m)) return AdKind::Nilpotent;
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && !m[a][b].is_zero()) return AdKind::Other;
  return AdKind::Diagonal;
}

std::vector<Expr> adjoint_series(const LieAlgebra& g, int i, const Expr& eps, const std::vector<Expr>& w, int order) {
  Matrix<Expr> m = ad_matrix(g, i);
  std::vector<Expr> term = w, out = w;
  for (int k = 1; k <= order; ++k) {
    term = mul(m, term);
    Expr scale = pow(-eps, Exponent(k)) * Expr(Rational(1) / factorial(k));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += scale * term[j];
  }
  for (auto& e : out) e = normal_form(e);
  return out;
}

std::vector<Expr> adjoint_action(const LieAlgebra& g, int i, const Expr& eps, const std::vector<Expr>& w) {
  Matrix<Expr> m = ad_matrix(g, i);
  switch (classify(m)) {
    case AdKind::Nilpotent:
      return adjoint_series(g, i, eps, w, int(g.dim()));
    case AdKind::Diagonal: {
      std::vector<Expr> out(w.size());
      for (std::size_t j = 0; j < w.size(); ++j)
        out[j] = normal_form(m[j][j].is_zero() ? w[j] : w[j] * exp(-eps * m[j][j]));
      return out;
    }
    default:
      throw std::domain_error("adjoint action of " + g.labels[i] + " is neither nilpotent nor diagonal");
  }
}

SubalgebraCheck check_subalgebra(const std::vector<VectorField>& candidate, const LieAlgebra& parent) {
  for (std::size_t i = 0; i < candidate.size(); ++i)
    if (!coordinates(candidate[i], parent.basis))
      throw std::invalid_argument("element " + to_string(candidate[i]) + " is outside the parent algebra");
  SubalgebraCheck r{true, ""};
  for (std::size_t i = 0; i < candidate.size(); ++i)
    for (std::size_t j = i + 1; j < candidate.size(); ++j) {
      VectorField b = commutator(candidate[i], candidate[j]);
      if (!coordinates(b, candidate)) {
        auto pc = coordinates(b, parent.basis);
        r.closed = false;
        r.witness = "[e" + std::to_string(i + 1) + ", e" + std::to_string(j + 1) + "] = " +
                    (pc ? format_combo(*pc, parent.labels) : to_string(b));
        return r;
      }
    }
  return r;
}

std::string format_combo(const std::vector<Expr>& coords, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k].is_zero()) continue;
    std::string c = to_string(coords[k]);
    bool neg = !c.empty() && c[0] == '-';
    bool compound = coords[k].size() > 1;
    std::string body;
    if (coords[k] == Expr(1) || coords[k] == Expr(-1))
      body = labels[k];
    else if (compound)
      body = "(" + c + ")*" + labels[k];
    else
      body = (neg ? c.substr(1) : c) + "*" + labels[k];
    if (out.empty())
      out = (!compound && neg ? "-" : "") + body;
    else
      out += (!compound && neg ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

namespace {
std::string grid(const std::vector<std::string>& labels, const std::string& corner,
                 const std::function<std::string(std::size_t, std::size_t)>& cell) {
  const std::size_t n = labels.size();
  std::vector<std::vector<std::string>> rows(n + 1, std::vector<std::string>(n + 1));
  rows[0][0] = corner;
  for (std::size_t j = 0; j < n; ++j) rows[0][j + 1] = labels[j];
  for (std::size_t i = 0; i < n; ++i) {
    rows[i + 1][0] = labels[i];
    for (std::size_t j = 0; j < n; ++j) rows[i + 1][j + 1] = cell(i, j);
  }
  std::vector<std::size_t> w(n + 1, 0);
  for (auto& r : rows)
    for (std::size_t j = 0; j <= n; ++j) w[j] = std::max(w[j], r[j].size());
  std::ostringstream os;
  for (auto& r : rows) {
    for (std::size_t j = 0; j <= n; ++j) {
      os << r[j];
      if (j < n) os << std::string(w[j] - r[j].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}
}  // namespace

std::string commutator_table(const LieAlgebra& g) {
  return grid(g.labels, "[vi,vj]", [&](std::size_t i, std::size_t j) { return format_combo(g.c[i][j], g.labels); });
}

std::string adjoint_table(const LieAlgebra& g, const Expr& eps) {
  return grid(g.labels, "Ad", [&](std::size_t i, std::size_t j) {
    try {
      return format_combo(adjoint_action(g, int(i), eps, unit(g.dim(), j)), g.labels);
    } catch (const std::domain_error&) {
      return std::string("?");
    }
  });
}

}  // namespace liesym
