#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/determine.hpp"
#include "liesym/jet.hpp"

namespace liesym {

struct GridOptions {
  int n = 10;            // points per axis
  double lo = -2, hi = 2;
  double shift = 0.0137;  // moves the grid off rational loci
  double margin = 0.1;   // distance kept from singular loci
  double tol = 1e-8;
};

struct SolResult {
  enum class Kind { SymbolicZero, Numeric, SymbolicNonzero, NoPoints };
  Kind kind = Kind::SymbolicZero;
  Expr residual;     // normal form of the substituted equation
  double max_abs = 0;
  int points = 0;    // grid points used by the numeric route

  bool pass(double tol = 1e-8) const { return kind == Kind::SymbolicZero || (kind == Kind::Numeric && max_abs < tol); }
  std::string describe() const;
};

// eq.lhs() with u -> sol and every jet replaced by the matching partial derivative of sol.
Expr substitute_solution(const Equation& eq, const Expr& sol);

// Expressions whose small absolute value marks a singularity of e (poles, log and radical bases).
std::vector<Expr> singular_guards(const Expr& e);

// Grid evaluation of the equation at sol; points near guards or outside the real domain are skipped.
double numeric_residual(const Equation& eq, const Expr& sol, const GridOptions& opt, int* used = nullptr);

SolResult check_solution(const Equation& eq, const Expr& sol, const GridOptions& opt = {});

// Image of the solution graph under the flow of Q at parameter s.
// Supported: tau = a t + b, xi = c x + d t + e (d != 0 only when a = c = 0), zeta = f y + g, eta = k u + m.
Expr flow_solution(const VectorField& Q, const Rational& s, const Expr& sol);

// Constant witnesses.
struct ConstantDomain {
  std::string name;
  std::vector<Rational> values;
};
std::vector<Rational> default_lattice();  // 1, -1, 1/2, -1/2, 2, -2, 3, -3

enum class Relation { Positive, Negative, NonZero, Zero };
struct Constraint {
  std::string text;  // "expr > 0", "expr < 0", "expr != 0", "expr = 0"
  std::string expr;
  Relation rel = Relation::NonZero;
};
Constraint parse_constraint(const std::string& text);

// A solution family: equation, named definitions evaluated in order, the solution, constraints.
struct SolutionSpec {
  std::string lhs;
  std::vector<ConstantDomain> constants;
  std::vector<std::pair<std::string, std::string>> defines;
  std::string u;
  std::vector<Constraint> constraints;
};

struct Instance {
  std::map<std::string, Rational> witness;
  Equation eq;
  Expr sol;
};

// Scans constant assignments in lexicographic lattice order; returns up to `limit` admissible instances.
// Throws std::runtime_error when none exists.
std::vector<Instance> instantiate(const SolutionSpec& spec, int limit = 1);

}  // namespace liesym
