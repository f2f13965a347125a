#include "liesym/equivalence.hpp"

#include <algorithm>
#include <stdexcept>

#include "liesym/jet.hpp"
#include "liesym/linalg.hpp"
#include "liesym/parse.hpp"

namespace liesym {

EquivTransform EquivTransform::identity() {
  EquivTransform t;
  for (auto& q : t.e) q = 0;
  t[1] = t[2] = t[3] = t[4] = 1;
  return t;
}

bool EquivTransform::nondegenerate() const { return (*this)[1] * (*this)[2] * (*this)[3] * (*this)[4] != 0; }

EquivTransform compose(const EquivTransform& a, const EquivTransform& b) {
  EquivTransform r;
  r[1] = a[1] * b[1];
  r[6] = b[1] * a[6] + b[6];
  r[2] = a[2] * b[2];
  r[5] = b[2] * a[5] + b[5] * a[1];
  r[7] = b[2] * a[7] + b[5] * a[6] + b[7];
  r[3] = a[3] * b[3];
  r[8] = b[3] * a[8] + b[8];
  r[4] = a[4] * b[4];
  r[9] = b[4] * a[9] + b[9];
  r[10] = b[2] * b[2] * b[2] * b[4] / b[1] * a[10] + b[10];
  r[11] = b[2] * b[3] * b[3] * b[4] / b[1] * a[11] + b[11];
  r[12] = b[2] * b[4] / b[1] * a[12] + b[4] * b[5] / b[1] * a[9] + b[12];
  return r;
}

EquivTransform inverse(const EquivTransform& a) {
  if (!a.nondegenerate()) throw std::invalid_argument("degenerate equivalence transformation");
  EquivTransform s;
  s[1] = 1 / a[1];
  s[6] = -a[6] / a[1];
  s[2] = 1 / a[2];
  s[5] = -a[5] / (a[1] * a[2]);
  s[7] = -a[7] / a[2] + a[5] * a[6] / (a[1] * a[2]);
  s[3] = 1 / a[3];
  s[8] = -a[8] / a[3];
  s[4] = 1 / a[4];
  s[9] = -a[9] / a[4];
  s[10] = -a[1] * a[10] / (a[2] * a[2] * a[2] * a[4]);
  s[11] = -a[1] * a[11] / (a[2] * a[3] * a[3] * a[4]);
  s[12] = -a[1] * a[12] / (a[2] * a[4]) + a[5] * a[9] / (a[2] * a[4]);
  return s;
}

EquivImage apply_equivalence(const EquivTransform& T, const Triple& tr) {
  if (!T.nondegenerate()) throw std::invalid_argument("degenerate equivalence transformation");
  Expr u = var_u();
  SubstMap back{{dep_atom(), (u - Expr(T[9])) * Expr(1 / T[4])}};
  Rational kF = T[2] * T[2] * T[2] * T[4] / T[1], kG = T[2] * T[3] * T[3] * T[4] / T[1], kH = T[2] * T[4] / T[1];
  EquivImage out;
  out.triple.F = normal_form(Expr(kF) * subst(tr.F, back) + Expr(T[10]));
  out.triple.G = normal_form(Expr(kG) * subst(tr.G, back) + Expr(T[11]));
  out.triple.H = normal_form(Expr(kH) * subst(tr.H, back) + Expr(T[5] / T[1]) * (u - Expr(T[9])) + Expr(T[12]));
  out.variables = {normal_form(Expr(T[1]) * var_t() + Expr(T[6])),
                   normal_form(Expr(T[2]) * var_x() + Expr(T[5]) * var_t() + Expr(T[7])),
                   normal_form(Expr(T[3]) * var_y() + Expr(T[8])), normal_form(Expr(T[4]) * u + Expr(T[9]))};
  return out;
}

Equation class_member(const Triple& tr, const std::vector<std::string>& params) {
  Equation eq = Equation::from_class(tr.F, tr.G, tr.H);
  eq.params = params;
  return eq;
}

Expr transport_solution(const EquivTransform& T, const Expr& sol) {
  if (!T.nondegenerate()) throw std::invalid_argument("degenerate equivalence transformation");
  Expr t0 = (var_t() - Expr(T[6])) * Expr(1 / T[1]);
  Expr x0 = (var_x() - Expr(T[5]) * t0 - Expr(T[7])) * Expr(1 / T[2]);
  Expr y0 = (var_y() - Expr(T[8])) * Expr(1 / T[3]);
  SubstMap m{{base_atom(0), t0}, {base_atom(1), x0}, {base_atom(2), y0}};
  return normal_form(Expr(T[4]) * subst(sol, m) + Expr(T[9]));
}

namespace {
Expr eps(int k) { return param("eps" + std::to_string(k)); }
Expr inv(const Expr& a) { return pow(a, Exponent(-1)); }
}  // namespace

Expr group_defect(const std::array<Expr, 7>& comp) {
  Atom ta = base_atom(0), xa = base_atom(1), ya = base_atom(2), ua = dep_atom();
  Atom Fa = rvar_atom("F"), Ga = rvar_atom("G"), Ha = rvar_atom("H");
  auto d = [](const Expr& e, Atom a) { return normal_form(pdiff(e, a)); };
  const Atom all[4] = {ta, xa, ya, ua};
  auto only = [&](const Expr& e, std::initializer_list<Atom> allowed, const char* what) {
    for (Atom a : all)
      if (std::find(allowed.begin(), allowed.end(), a) == allowed.end() && depends_on(e, a))
        throw std::invalid_argument(std::string("group_defect: unexpected dependence in ") + what);
    for (Atom b : allowed)
      for (Atom c : allowed)
        if (!d(d(e, b), c).is_zero()) throw std::invalid_argument(std::string("group_defect: ") + what + " is not affine");
  };
  only(comp[0], {ta}, "t~");
  only(comp[1], {ta, xa}, "x~");
  only(comp[2], {ya}, "y~");
  only(comp[3], {ua}, "u~");
  Expr a = d(comp[0], ta), c = d(comp[1], xa), dt = d(comp[1], ta), f = d(comp[2], ya), k = d(comp[3], ua);
  SubstMap arbs{{Fa, arb(0)}, {Ga, arb(1)}, {Ha, arb(2)}};
  Expr Ft = subst(comp[4], arbs), Gt = subst(comp[5], arbs), Ht = subst(comp[6], arbs);
  Expr ia = inv(a), ic = inv(c), ifa = inv(f);
  Expr image = k * ia * (jet(1, 0, 0) - dt * ic * jet(0, 1, 0)) + ic * ic * ic * total_derivative(Ft, MultiIndex{0, 3, 0}) +
               ic * ifa * ifa * total_derivative(Gt, MultiIndex{0, 1, 2}) + ic * total_derivative(Ht, MultiIndex{0, 1, 0});
  Expr source = jet(1, 0, 0) + total_derivative(arb(0), MultiIndex{0, 3, 0}) +
                total_derivative(arb(1), MultiIndex{0, 1, 2}) + total_derivative(arb(2), MultiIndex{0, 1, 0});
  return normal_form(image - k * ia * source);
}

std::array<Expr, 7> complete_group() {
  Expr e1 = eps(1), e2 = eps(2), e3 = eps(3), e4 = eps(4), e5 = eps(5);
  Expr F = rvar("F"), G = rvar("G"), H = rvar("H");
  return {e1 * var_t() + eps(6),
          e2 * var_x() + e5 * var_t() + eps(7),
          e3 * var_y() + eps(8),
          e4 * var_u() + eps(9),
          inv(e1) * e2 * e2 * e2 * e4 * F + eps(10),
          inv(e1) * e2 * e3 * e3 * e4 * G + eps(11),
          inv(e1) * e2 * e4 * H + inv(e1) * e4 * e5 * var_u() + eps(12)};
}

Expr complete_group_defect() { return group_defect(complete_group()); }

Expr ext_var(int i) {
  switch (i) {
    case 0: return var_t();
    case 1: return var_x();
    case 2: return var_y();
    case 3: return var_u();
    case 4: return rvar("F");
    case 5: return rvar("G");
    default: return rvar("H");
  }
}

namespace {
const char* kMarks[7] = {"dt", "dx", "dy", "du", "dF", "dG", "dH"};
const char* kCompNames[7] = {"tau", "xi", "zeta", "eta", "pi", "rho", "theta"};

Atom ext_atom(char c) {
  switch (c) {
    case 't': return base_atom(0);
    case 'x': return base_atom(1);
    case 'y': return base_atom(2);
    case 'u': return dep_atom();
    case 'F': return rvar_atom("F");
    case 'G': return rvar_atom("G");
    case 'H': return rvar_atom("H");
  }
  throw std::invalid_argument(std::string("unknown extended variable ") + c);
}

Expr d(const Expr& e, const std::string& by) {
  Expr r = e;
  for (char c : by) r = pdiff(r, ext_atom(c));
  return r;
}
}  // namespace

EquivGenerator parse_equiv_generator(const std::string& text, const std::vector<std::string>& params) {
  ParseContext ctx;
  ctx.rvars = {"F", "G", "H"};
  for (auto& p : params) ctx.params.insert(p);
  for (const char* m : kMarks) ctx.params.insert(m);
  Expr e = parse(text, ctx);
  EquivGenerator g;
  g.label = text;
  auto is_mark = [](Atom a) {
    if (a->kind != AtomKind::Param) return false;
    for (const char* m : kMarks)
      if (a->name == m) return true;
    return false;
  };
  for (auto& [key, c] : split_by(e, is_mark)) {
    if (key.size() != 1 || key[0].second != Exponent(1))
      throw ParseError("generator must be linear in the derivations: " + text, 0);
    for (int i = 0; i < 7; ++i)
      if (key[0].first->name == kMarks[i]) g.c[i] = c;
  }
  return g;
}

std::string to_string(const EquivGenerator& g) {
  std::string out;
  for (int i = 0; i < 7; ++i) {
    if (g.c[i].is_zero()) continue;
    std::string s = to_string(g.c[i]);
    std::string piece = s == "1" ? kMarks[i] : s == "-1" ? std::string("-") + kMarks[i]
                        : g.c[i].is_single_term() ? s + "*" + kMarks[i] : "(" + s + ")*" + kMarks[i];
    if (out.empty())
      out = piece;
    else if (piece[0] == '-')
      out += " - " + piece.substr(1);
    else
      out += " + " + piece;
  }
  return out.empty() ? "0" : out;
}

std::vector<EquationCheck> equivalence_system(const EquivGenerator& g) {
  const Expr &tau = g.c[0], &xi = g.c[1], &zeta = g.c[2], &eta = g.c[3], &pi = g.c[4], &rho = g.c[5], &theta = g.c[6];
  std::vector<EquationCheck> out;
  auto zero = [&](int comp, const std::string& by) {
    out.push_back({std::string(kCompNames[comp]) + "_" + by, normal_form(d(g.c[comp], by))});
  };
  for (auto by : {"x", "y", "u"}) zero(0, by);
  for (auto by : {"y", "u", "xx"}) zero(1, by);
  for (auto by : {"t", "x", "u", "yy"}) zero(2, by);
  for (auto by : {"t", "x", "y"}) zero(3, by);
  for (auto by : {"t", "x", "y", "u", "G", "H", "FF"}) zero(4, by);
  out.push_back({"pi_F - eta_u + tau_t - 3*xi_x", normal_form(d(pi, "F") - d(eta, "u") + d(tau, "t") - Expr(3) * d(xi, "x"))});
  for (auto by : {"t", "x", "y", "u", "F", "H", "GG"}) zero(5, by);
  out.push_back({"rho_G - eta_u + tau_t - xi_x - 2*zeta_y",
                 normal_form(d(rho, "G") - d(eta, "u") + d(tau, "t") - d(xi, "x") - Expr(2) * d(zeta, "y"))});
  for (auto by : {"t", "x", "y", "F", "G"}) zero(6, by);
  out.push_back({"theta_u - xi_t", normal_form(d(theta, "u") - d(xi, "t"))});
  out.push_back({"theta_H - eta_u + tau_t - xi_x", normal_form(d(theta, "H") - d(eta, "u") + d(tau, "t") - d(xi, "x"))});
  return out;
}

std::vector<std::string> equivalence_system_lines() {
  std::vector<std::string> out;
  for (auto& c : equivalence_system(EquivGenerator{})) out.push_back(c.label + " = 0");
  return out;
}

EquivGenerator solved_equivalence_generator() {
  auto c = [](int k) { return param("c" + std::to_string(k)); };
  EquivGenerator g;
  g.label = "solved form";
  Expr F = rvar("F"), G = rvar("G"), H = rvar("H");
  g.c[0] = c(5) * var_t() + c(1);
  g.c[1] = c(6) * var_x() + c(9) * var_t() + c(2);
  g.c[2] = c(7) * var_y() + c(3);
  g.c[3] = c(8) * var_u() + c(4);
  g.c[4] = (-c(5) + Expr(3) * c(6) + c(8)) * F + c(11);
  g.c[5] = (-c(5) + c(6) + Expr(2) * c(7) + c(8)) * G + c(12);
  g.c[6] = (-c(5) + c(6) + c(8)) * H + c(9) * var_u() + c(10);
  for (auto& e : g.c) e = normal_form(e);
  return g;
}

EquivGenerator solved_basis_element(int k) {
  EquivGenerator g = solved_equivalence_generator();
  SubstMap m;
  for (int j = 1; j <= 12; ++j) m[param_atom("c" + std::to_string(j))] = Expr(j == k ? 1 : 0);
  for (auto& e : g.c) e = normal_form(subst(e, m));
  g.label = to_string(g);
  return g;
}

std::array<Expr, 7> continuous_group() {
  Expr F = rvar("F"), G = rvar("G"), H = rvar("H");
  return {exp(eps(1)) * var_t() + eps(6),
          exp(eps(2)) * var_x() + eps(5) * var_t() + eps(7),
          exp(eps(3)) * var_y() + eps(8),
          exp(eps(4)) * var_u() + eps(9),
          exp(-eps(1) + Expr(3) * eps(2) + eps(4)) * F + eps(10),
          exp(-eps(1) + eps(2) + Expr(2) * eps(3) + eps(4)) * G + eps(11),
          exp(-eps(1) + eps(2) + eps(4)) * H + eps(5) * exp(-eps(1) + eps(4)) * var_u() + eps(12)};
}

EquivGenerator continuous_group_tangent(int k) {
  auto grp = continuous_group();
  SubstMap zero;
  for (int j = 1; j <= 12; ++j) zero[param_atom("eps" + std::to_string(j))] = Expr(0);
  EquivGenerator g;
  for (int i = 0; i < 7; ++i) g.c[i] = normal_form(subst(pdiff(grp[i], param_atom("eps" + std::to_string(k))), zero));
  g.label = to_string(g);
  return g;
}

std::vector<EquivReportLine> verify_equiv_generators(const std::vector<EquivGenerator>& gens) {
  std::vector<EquivReportLine> out;
  for (const auto& g : gens) {
    EquivReportLine line{g.label, "PASS", ""};
    for (const auto& c : equivalence_system(g))
      if (!c.value.is_zero()) {
        line.verdict = "FAIL";
        line.detail += (line.detail.empty() ? "" : "; ") + c.label + " = " + to_string(c.value);
      }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace liesym
