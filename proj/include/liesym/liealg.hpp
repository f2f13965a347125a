#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liesym/jet.hpp"
#include "liesym/linalg.hpp"

namespace liesym {

VectorField commutator(const VectorField& v, const VectorField& w);

// Coordinates of v over `basis` (exact), or nullopt when v is outside the span.
std::optional<std::vector<Expr>> coordinates(const VectorField& v, const std::vector<VectorField>& basis);
VectorField combine(const std::vector<Expr>& coords, const std::vector<VectorField>& basis);

struct LieAlgebra {
  std::vector<VectorField> basis;
  std::vector<std::string> labels;
  // c[i][j][k]: coefficient of v_k in [v_i, v_j]
  std::vector<std::vector<std::vector<Expr>>> c;
  bool closed = true;
  std::vector<std::pair<int, int>> open_pairs;

  std::size_t dim() const { return basis.size(); }
};

LieAlgebra structure_constants(const std::vector<VectorField>& basis, std::vector<std::string> labels = {});
bool jacobi_holds(const LieAlgebra& g);
bool antisymmetric(const LieAlgebra& g);

enum class AdKind { Nilpotent, Diagonal, Other };
const char* ad_kind_name(AdKind k);

// m[k][j] = coefficient of v_k in [v_i, v_j]; ad_v(w) = [v, w].
Matrix<Expr> ad_matrix(const LieAlgebra& g, int i);
AdKind classify(const Matrix<Expr>& m);

// Ad(exp(eps v_i)) w = sum_n (-eps)^n / n! ad_{v_i}^n w, in closed form.
std::vector<Expr> adjoint_action(const LieAlgebra& g, int i, const Expr& eps, const std::vector<Expr>& w);
std::vector<Expr> adjoint_series(const LieAlgebra& g, int i, const Expr& eps, const std::vector<Expr>& w, int order);

std::vector<Expr> unit(std::size_t n, std::size_t k);
std::vector<Expr> bracket_coords(const LieAlgebra& g, const std::vector<Expr>& a, const std::vector<Expr>& b);

struct SubalgebraCheck {
  bool closed = false;
  std::string witness;  // failing bracket, empty when closed
};
// Throws std::invalid_argument if a candidate lies outside the parent span.
SubalgebraCheck check_subalgebra(const std::vector<VectorField>& candidate, const LieAlgebra& parent);

std::string format_combo(const std::vector<Expr>& coords, const std::vector<std::string>& labels);
std::string commutator_table(const LieAlgebra& g);
std::string adjoint_table(const LieAlgebra& g, const Expr& eps);

}  // namespace liesym
