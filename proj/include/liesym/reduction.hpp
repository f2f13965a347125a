#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesym/determine.hpp"
#include "liesym/jet.hpp"

namespace liesym {

// u = mu(t, x, y, W) with W the reduced function of the reduced variables.
// A reduced variable whose definition is t, x or y itself is named by that letter and stays a base atom;
// the others are reduced-variable atoms with one-letter names.
struct ReductionAnsatz {
  std::vector<std::pair<std::string, Expr>> vars;  // name -> definition in t, x, y
  std::string fname = "w";
  Expr mu;  // written with rfun(fname); for rank 0 it carries a constant parameter instead

  std::size_t rank() const { return vars.size(); }
  std::string describe() const;
};

// Parses "u = ...", "p = ...": definitions are parsed in t, x, y; mu may use fname(...) written as fname.
ReductionAnsatz make_ansatz(const std::string& u, const std::vector<std::pair<std::string, std::string>>& defs,
                            const std::string& fname, const std::vector<std::string>& params,
                            const std::map<std::string, Expr>& values = {});

// Chain-rule partial derivative of an expression in t, x, y and the reduced function.
Expr ansatz_derivative(const Expr& e, const ReductionAnsatz& a, int base_index);

// Q(p) for each reduced variable, then the characteristic of Q on u = mu; all must vanish.
struct AnnihilationReport {
  bool ok = true;
  std::vector<std::string> failures;
};
AnnihilationReport check_annihilation(const std::vector<VectorField>& gens, const ReductionAnsatz& a);

// Method of characteristics over translations, scalings and Galilean boosts; throws std::invalid_argument
// ("characteristics not in solvable family") or std::domain_error (transversality failure).
ReductionAnsatz invariants(const std::vector<VectorField>& gens, const std::string& fname = "w");

// e in t, x, y rewritten through the reduced variables, or nullopt.
std::optional<Expr> express_in(const Expr& e, const ReductionAnsatz& a);

// Throws std::domain_error naming the offending term when invariance is broken.
Expr reduce(const Equation& eq, const ReductionAnsatz& a);

// Content-free, denominators cleared, leading coefficient positive.
Expr normalize_reduced(const Expr& e);

// Equal up to a nonzero multiple (possibly depending on the reduced variables).
bool same_up_to_multiple(const Expr& a, const Expr& b);

}  // namespace liesym
