#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/jet.hpp"

namespace liesym {

struct Equation {
  std::string name;
  Expr phi;                                  // u_t = phi
  std::array<std::optional<Expr>, 3> spec;   // F, G, H; nullopt means generic
  bool in_class = false;
  Expr clearing = Expr(1);
  bool positive = true;
  std::vector<std::string> params;

  Expr lhs() const { return jet(1, 0, 0) - phi; }
  int order() const;
  bool has_generic() const;

  // u_t + (F)_xxx + (G)_xyy + (H)_x = 0
  static Equation from_class(std::optional<Expr> F, std::optional<Expr> G, std::optional<Expr> H,
                             std::string name = "gzk");
  // L must read u_t + (terms free of t-derivatives).
  static Equation from_lhs(const Expr& L, std::string name = "inline");
};

Equation substitute_params(const Equation& eq, const std::map<std::string, Rational>& values);

struct DetEquation {
  Expr expr;
  std::vector<Monomial> sources;  // jet / arbitrary-element monomials that produced it
  bool classifying = false;
};

struct DeterminingSystem {
  std::vector<DetEquation> equations;
  std::vector<std::string> lines() const;
  std::string report() const;
};

Expr on_manifold(const Expr& e, const Equation& eq);

// Cleared and restricted invariance criterion, in normal form.
Expr restricted_criterion(const Equation& eq, const VectorField& v);

// Coefficients of jet monomials of the restricted criterion for the generic field.
std::map<Monomial, Expr, MonomialLess> criterion_coefficients(const Equation& eq);

DeterminingSystem determining_system(const Equation& eq);
DeterminingSystem split_arbitrary(const DeterminingSystem& ds);

// Zeroes single-term equations and their derivatives, then dedupes.
DeterminingSystem simplify_system(const DeterminingSystem& ds);

// Substitutes a concrete field into a determining equation.
Expr substitute_field(const Expr& det_eq, const VectorField& v);

// Removes rational content and common factors assumed nonzero (parameters, powers of u, F_u, G_u, H_uu).
Expr normalize_equation(const Expr& e);
bool assumed_nonzero(Atom a);

}  // namespace liesym
