#include "liesym/properties.hpp"

#include <functional>

#include "liesym/liealg.hpp"
#include "liesym/parse.hpp"
#include "liesym/verify.hpp"

namespace liesym {

namespace {

Rational small_rational(std::mt19937_64& g) {
  long n = 0;
  while (n == 0) n = long(g() % 11) - 5;
  Rational q(n, long(g() % 3) + 1);
  q.canonicalize();
  return q;
}

bool zero(const Expr& e) { return normal_form(e).is_zero(); }

// zk-type algebra with symbolic h and the mzk algebra; both appear in the tables
const std::vector<LieAlgebra>& sample_algebras() {
  static const std::vector<LieAlgebra> algs = [] {
    ParseContext c;
    c.allow_coef = false;
    c.params = {"h"};
    std::vector<LieAlgebra> out;
    for (const auto& gens : std::vector<std::vector<std::string>>{
             {"dt", "dx", "dy", "h*t*dx + du", "3*t*dt + x*dx + y*dy - 2*u*du"},
             {"dt", "dx", "dy", "t*dt + 1/3*x*dx + 1/3*y*dy - 1/3*u*du"}}) {
      std::vector<VectorField> basis;
      for (const auto& g : gens) basis.push_back(parse_field(g, c));
      out.push_back(structure_constants(basis));
    }
    return out;
  }();
  return algs;
}

std::vector<Expr> random_coords(std::mt19937_64& g, std::size_t n) {
  std::vector<Expr> v(n);
  for (auto& e : v) e = g() % 3 == 0 ? Expr(0) : Expr(small_rational(g));
  return v;
}

}  // namespace

Expr random_expr(std::mt19937_64& rng, const RandomExprOptions& opt) {
  std::vector<Expr> atoms = {var_t(), var_x(), var_y(), var_u(), param("a")};
  if (opt.jets) {
    atoms.push_back(jet(1, 0, 0));
    atoms.push_back(jet(0, 1, 0));
    atoms.push_back(jet(0, 0, 1));
    atoms.push_back(jet(0, 2, 0));
  }
  Expr e;
  for (int k = 0; k < opt.terms; ++k) {
    Expr term(small_rational(rng));
    int deg = int(rng() % (opt.max_degree + 1));
    for (int d = 0; d < deg; ++d) term = term * atoms[rng() % atoms.size()];
    if (opt.transcendental) {
      switch (rng() % 6) {
        case 0: term = term * exp(var_x() + Expr(small_rational(rng)) * var_t()); break;
        case 1: term = term * sin(Expr(2) * var_y()); break;
        case 2: term = term * sqrt(var_u()); break;
        default: break;
      }
    }
    e += term;
  }
  return normal_form(e);
}

VectorField random_point_field(std::mt19937_64& rng) {
  RandomExprOptions o;
  o.jets = false;
  o.transcendental = false;
  o.terms = 2;
  VectorField v;
  for (int i = 0; i < 4; ++i) v[i] = random_expr(rng, o);
  return v;
}

std::vector<PropertyResult> run_properties(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  auto suite = [&](const std::string& name, const std::function<std::string(std::mt19937_64&)>& draw) {
    PropertyResult r{name, 0, 0, {}};
    std::mt19937_64 rng(record_seed(seed, name));
    for (int k = 0; k < cases; ++k) {
      ++r.cases;
      std::string bad;
      try {
        bad = draw(rng);
      } catch (const std::exception& e) {
        bad = std::string("exception: ") + e.what();
      }
      if (!bad.empty()) {
        ++r.failures;
        if (r.examples.size() < 3) r.examples.push_back(bad);
      }
    }
    out.push_back(std::move(r));
  };

  suite("leibniz", [](std::mt19937_64& g) -> std::string {
    Expr f = random_expr(g), h = random_expr(g);
    int i = int(g() % 3);
    Expr lhs = total_derivative(f * h, i), rhs = f * total_derivative(h, i) + h * total_derivative(f, i);
    return zero(lhs - rhs) ? "" : "D" + std::to_string(i) + "(" + to_string(f) + " * " + to_string(h) + ")";
  });

  suite("commuting-derivatives", [](std::mt19937_64& g) -> std::string {
    Expr f = random_expr(g);
    int i = int(g() % 3), j = int(g() % 3);
    return zero(total_derivative(total_derivative(f, i), j) - total_derivative(total_derivative(f, j), i))
               ? ""
               : to_string(f);
  });

  suite("jacobi", [](std::mt19937_64& g) -> std::string {
    VectorField a = random_point_field(g), b = random_point_field(g), c = random_point_field(g);
    VectorField s = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    for (int i = 0; i < 4; ++i)
      if (!zero(s[i])) return to_string(a) + ", " + to_string(b) + ", " + to_string(c);
    return "";
  });

  suite("prolongation-linearity", [](std::mt19937_64& g) -> std::string {
    VectorField v = random_point_field(g), w = random_point_field(g);
    Expr p(small_rational(g)), q(small_rational(g));
    RandomExprOptions o;
    o.transcendental = false;
    Expr L = random_expr(g, o) + jet(0, 3, 0) * random_expr(g, o);
    int order = 3;
    Expr lhs = apply_prolonged(p * v + q * w, order, L);
    Expr rhs = p * apply_prolonged(v, order, L) + q * apply_prolonged(w, order, L);
    return zero(lhs - rhs) ? "" : to_string(v) + " | " + to_string(w) + " on " + to_string(L);
  });

  suite("split-reconstruction", [](std::mt19937_64& g) -> std::string {
    Expr e = random_expr(g) * random_expr(g);
    auto parts = split_by(e, [](Atom a) { return a->kind == AtomKind::Jet || a->kind == AtomKind::Base; });
    Expr back;
    for (const auto& [m, c] : parts) back += monomial_expr(m) * c;
    return zero(back - e) ? "" : to_string(e);
  });

  suite("adjoint-automorphism", [](std::mt19937_64& g) -> std::string {
    const auto& algs = sample_algebras();
    const LieAlgebra& alg = algs[g() % algs.size()];
    const std::size_t n = alg.dim();
    int i = int(g() % n);
    Expr eps = param("eps");
    auto a = random_coords(g, n), b = random_coords(g, n);
    auto lhs = adjoint_action(alg, i, eps, bracket_coords(alg, a, b));
    auto rhs = bracket_coords(alg, adjoint_action(alg, i, eps, a), adjoint_action(alg, i, eps, b));
    for (std::size_t k = 0; k < n; ++k)
      if (!zero(lhs[k] - rhs[k])) {
        std::vector<std::string> labels;
        for (std::size_t m = 1; m <= n; ++m) labels.push_back("v" + std::to_string(m));
        return "Ad(v" + std::to_string(i + 1) + ") on " + format_combo(a, labels) + ", " + format_combo(b, labels);
      }
    return "";
  });

  suite("adjoint-series", [](std::mt19937_64& g) -> std::string {
    const auto& algs = sample_algebras();
    const LieAlgebra& alg = algs[g() % algs.size()];
    const std::size_t n = alg.dim();
    int i = int(g() % n);
    Atom ea = param_atom("eps");
    Expr eps = Expr::atom(ea);
    auto w = random_coords(g, n);
    const int order = 6;
    auto closed = adjoint_action(alg, i, eps, w);
    auto series = adjoint_series(alg, i, eps, w, order);
    SubstMap at0{{ea, Expr(0)}};
    for (std::size_t k = 0; k < n; ++k) {
      Expr a = closed[k], b = series[k];
      for (int d = 0; d <= order; ++d) {
        if (!zero(subst(a, at0) - subst(b, at0))) return "v" + std::to_string(i + 1) + " derivative " + std::to_string(d);
        a = normal_form(pdiff(a, ea));
        b = normal_form(pdiff(b, ea));
      }
    }
    return "";
  });
  return out;
}

}  // namespace liesym
