#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liesym/determine.hpp"
#include "liesym/jet.hpp"
#include "liesym/linalg.hpp"

namespace liesym {

struct AnsatzBasis {
  std::vector<Expr> functions;

  static AnsatzBasis polynomial(int degree);  // monomials in t, x, y, u
  static AnsatzBasis y_trig_extension();      // cos 2y, sin 2y, times 1 and u
  static AnsatzBasis y_exp_extension();       // e^{2y}, e^{-2y}, times 1 and u
  AnsatzBasis operator+(const AnsatzBasis& o) const;
  bool independent() const;
  std::size_t size() const { return functions.size(); }
};

struct Residual {
  enum class Kind { SymbolicZero, Nonzero, Numeric };
  Kind kind = Kind::SymbolicZero;
  Expr expr;
  double max_abs = 0;

  bool ok(double tol = 1e-8) const { return kind == Kind::SymbolicZero || (kind == Kind::Numeric && max_abs < tol); }
  std::string describe() const;
};

// Residual of an expression that should vanish: symbolic first, numeric when atoms block closure.
Residual residual_of(const Expr& e, std::uint64_t seed = 42, int points = 200);

Residual check_symmetry(const Equation& eq, const VectorField& v, std::uint64_t seed = 42);

struct SymmetryAlgebraResult {
  int dimension = 0;
  std::vector<VectorField> basis;
  Matrix<Expr> coords;            // basis rows over ansatz coordinates (tau block, xi, zeta, eta)
  std::vector<Expr> assumptions;  // non-constant pivots assumed nonzero
};

SymmetryAlgebraResult solve_system(const DeterminingSystem& ds, const AnsatzBasis& basis);
SymmetryAlgebraResult solve_ansatz(const Equation& eq, const AnsatzBasis& basis);

// Coordinates of v over the ansatz (4 * basis size entries) or nullopt if not representable.
std::optional<std::vector<Expr>> ansatz_coordinates(const VectorField& v, const AnsatzBasis& basis);
bool contains_field(const SymmetryAlgebraResult& r, const VectorField& v, const AnsatzBasis& basis);

// Each equation of `claims` vanishes on every ansatz solution of `sys`.
struct ImplicationReport {
  std::vector<std::string> implied;
  std::vector<std::string> not_implied;
  bool all() const { return not_implied.empty(); }
};
ImplicationReport check_implied(const DeterminingSystem& sys, const std::vector<Expr>& claims, const AnsatzBasis& basis);

bool is_param_only(Atom a);

}  // namespace liesym
