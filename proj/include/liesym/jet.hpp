#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/parse.hpp"

namespace liesym {

using MultiIndex = std::array<int, 3>;  // (t, x, y)

struct VectorField {
  Expr tau, xi, zeta, eta;

  Expr& operator[](int i) { return i == 0 ? tau : i == 1 ? xi : i == 2 ? zeta : eta; }
  const Expr& operator[](int i) const { return i == 0 ? tau : i == 1 ? xi : i == 2 ? zeta : eta; }
  bool is_zero() const { return tau.is_zero() && xi.is_zero() && zeta.is_zero() && eta.is_zero(); }

  static VectorField generic();  // tau, xi, zeta, eta as unknown functions of (t,x,y,u)
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.tau == b.tau && a.xi == b.xi && a.zeta == b.zeta && a.eta == b.eta;
  }
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& k, const VectorField& v);
VectorField map_field(const VectorField& v, const std::function<Expr(const Expr&)>& f);

// v(f) for f a function of (t, x, y, u).
Expr apply_field(const VectorField& v, const Expr& f);

// "3*t*dt + x*dx - 2*u*du"; dt, dx, dy, du mark the components.
VectorField parse_field(const std::string& text, ParseContext ctx = {});
std::string to_string(const VectorField& v);
bool is_point_field(const VectorField& v);

Expr total_derivative(const Expr& e, int i);
Expr total_derivative(const Expr& e, const MultiIndex& alpha);

Expr characteristic(const VectorField& v);

struct ProlongedField {
  VectorField base;
  int order = 1;
  std::map<MultiIndex, Expr> coeffs;
};

std::vector<MultiIndex> multi_indices(int order);  // 1 <= |alpha| <= order, graded lexicographic
ProlongedField prolong(const VectorField& v, int order);
Expr apply_prolonged(const VectorField& v, int order, const Expr& L);

int jet_order(const Expr& e);

}  // namespace liesym
