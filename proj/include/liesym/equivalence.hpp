#pragma once

#include <array>
#include <string>
#include <vector>

#include "liesym/determine.hpp"
#include "liesym/expr.hpp"

namespace liesym {

// Complete equivalence group element; e[0..11] hold eps1..eps12.
//   t~ = e1 t + e6          x~ = e2 x + e5 t + e7
//   y~ = e3 y + e8          u~ = e4 u + e9
//   F~ = e2^3 e4/e1 F + e10,  G~ = e2 e3^2 e4/e1 G + e11,  H~ = e2 e4/e1 H + e4 e5/e1 u + e12
struct EquivTransform {
  std::array<Rational, 12> e;

  static EquivTransform identity();
  bool nondegenerate() const;
  const Rational& operator[](int i) const { return e[i - 1]; }  // 1-based like the formulas
  Rational& operator[](int i) { return e[i - 1]; }
  friend bool operator==(const EquivTransform& a, const EquivTransform& b) { return a.e == b.e; }
};

// apply a, then b
EquivTransform compose(const EquivTransform& a, const EquivTransform& b);
EquivTransform inverse(const EquivTransform& a);

struct Triple {
  Expr F, G, H;  // functions of u
};

struct EquivImage {
  Triple triple;                  // as functions of u~ (written with u)
  std::array<Expr, 4> variables;  // t~, x~, y~, u~ in terms of t, x, y, u
};

// Throws std::invalid_argument for a degenerate transform.
EquivImage apply_equivalence(const EquivTransform& T, const Triple& tr);

// The member of the class with arbitrary elements tr.
Equation class_member(const Triple& tr, const std::vector<std::string>& params = {});

// u~(t~,x~,y~) for a solution u(t,x,y) of the source equation (written in t, x, y).
Expr transport_solution(const EquivTransform& T, const Expr& sol);

// Generic check: with symbolic eps, the image of u_t + D_x^3 F + D_x D_y^2 G + D_x H equals
// (e4/e1) times the original; returns the normal-form difference (zero when the group is right).
Expr complete_group_defect();

// Components t~, x~, y~, u~, F~, G~, H~ of the complete group with symbolic eps1..eps12 (F, G, H as reduced-variable atoms).
std::array<Expr, 7> complete_group();

// Same check for any affine point transformation given by its seven components.
// Throws std::invalid_argument when a component leaves the affine family.
Expr group_defect(const std::array<Expr, 7>& components);

// Generator over (t, x, y, u, F, G, H); F, G, H are reduced-variable atoms named "F", "G", "H".
struct EquivGenerator {
  std::string label;
  std::array<Expr, 7> c;  // tau, xi, zeta, eta, pi, rho, theta
};

Expr ext_var(int i);  // 0..6 -> t x y u F G H
EquivGenerator parse_equiv_generator(const std::string& text, const std::vector<std::string>& params = {});
std::string to_string(const EquivGenerator& g);

struct EquationCheck {
  std::string label;
  Expr value;
};
// Left-hand sides of the infinitesimal equivalence system evaluated on g; all zero iff g is admissible.
std::vector<EquationCheck> equivalence_system(const EquivGenerator& g);
std::vector<std::string> equivalence_system_lines();

// Solved coefficient form with constants c1..c12 as parameters.
EquivGenerator solved_equivalence_generator();
// Generator obtained by setting c_k = 1 and the others to 0.
EquivGenerator solved_basis_element(int k);

// Continuous group with symbolic parameters eps1..eps12 (exponential in eps1..eps4).
std::array<Expr, 7> continuous_group();
// d/d eps_k at eps = 0.
EquivGenerator continuous_group_tangent(int k);

struct EquivReportLine {
  std::string id, verdict, detail;
};
std::vector<EquivReportLine> verify_equiv_generators(const std::vector<EquivGenerator>& gens);

}  // namespace liesym
