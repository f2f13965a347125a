#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "liesym/expr.hpp"
#include "liesym/jet.hpp"

namespace liesym {

// Random inputs for property checks.
struct RandomExprOptions {
  int terms = 3;
  int max_degree = 2;
  bool jets = true;            // allow u_t, u_x, u_y, u_xx
  bool transcendental = true;  // occasional exp, sin, u^(1/2) factors
};
Expr random_expr(std::mt19937_64& rng, const RandomExprOptions& opt = {});
VectorField random_point_field(std::mt19937_64& rng);

struct PropertyResult {
  std::string name;
  int cases = 0, failures = 0;
  std::vector<std::string> examples;  // first few counterexamples

  bool ok() const { return failures == 0; }
};

// Leibniz, commuting total derivatives, Jacobi, prolongation linearity, split reconstruction,
// adjoint automorphism and adjoint series consistency; `cases` draws each.
std::vector<PropertyResult> run_properties(std::uint64_t seed, int cases = 150);

}  // namespace liesym
