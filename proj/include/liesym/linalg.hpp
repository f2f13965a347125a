#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

// Scalar hooks for the elimination template; Rational is a field, Expr works fraction-free.
inline bool lin_is_zero(const Rational& a) { return a == 0; }
inline bool lin_is_zero(const Expr& a) { return a.is_zero(); }
inline bool lin_is_constant(const Rational&) { return true; }
inline bool lin_is_constant(const Expr& a) { return a.is_constant(); }
inline std::size_t lin_weight(const Rational&) { return 1; }
inline std::size_t lin_weight(const Expr& a) { return a.size(); }
inline Rational lin_div(const Rational& a, const Rational& b) { return a / b; }
inline Expr lin_div(const Expr& a, const Expr& b) { return b == Expr(1) ? a : exact_divide(a, b); }

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
struct Echelon {
  Matrix<T> rows;            // reduced rows, pivot entries equal 1
  std::vector<int> pivots;   // pivot column per row
  std::vector<T> assumptions;  // non-constant pivot values assumed nonzero
};

namespace detail {
inline void strip_content(std::vector<Rational>&) {}
inline void strip_content(std::vector<Expr>& row) {
  Rational g = 0;
  bool any = false;
  for (const auto& e : row) {
    if (e.is_zero()) continue;
    Rational c = content(e);
    g = any ? Rational(gcd(g.get_num(), c.get_num()), lcm(g.get_den(), c.get_den())) : c;
    any = true;
  }
  if (!any || g == 1) return;
  Expr inv(Rational(1) / g);
  for (auto& e : row) e = e * inv;
}
}  // namespace detail

// Gauss-Jordan elimination; for Expr rows are combined fraction-free and normalized at the end.
template <class T>
Echelon<T> row_reduce(Matrix<T> m, std::size_t ncols) {
  Echelon<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t best = m.size();
    for (std::size_t i = r; i < m.size(); ++i) {
      if (lin_is_zero(m[i][c])) continue;
      if (best == m.size()) best = i;
      bool cur_const = lin_is_constant(m[i][c]), best_const = lin_is_constant(m[best][c]);
      if ((cur_const && !best_const) ||
          (cur_const == best_const && lin_weight(m[i][c]) < lin_weight(m[best][c])))
        best = i;
    }
    if (best == m.size()) continue;
    std::swap(m[r], m[best]);
    T piv = m[r][c];
    if (!lin_is_constant(piv)) out.assumptions.push_back(piv);
    if constexpr (std::is_same_v<T, Rational>) {
      for (auto& e : m[r]) e /= piv;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == r || m[i][c] == 0) continue;
        Rational f = m[i][c];
        for (std::size_t j = c; j < ncols; ++j)
          if (m[r][j] != 0) m[i][j] -= f * m[r][j];
      }
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == r || lin_is_zero(m[i][c])) continue;
        T f = m[i][c];
        for (std::size_t j = 0; j < ncols; ++j) {
          if (lin_is_zero(m[r][j]) && lin_is_zero(m[i][j])) continue;
          m[i][j] = piv * m[i][j] - f * m[r][j];
        }
        detail::strip_content(m[i]);
      }
    }
    out.pivots.push_back(int(c));
    ++r;
  }
  m.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    T piv = m[i][out.pivots[i]];
    for (auto& e : m[i])
      if (!lin_is_zero(e)) e = e / piv;
  }
  out.rows = std::move(m);
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m, std::size_t ncols) {
  return row_reduce(m, ncols).rows.size();
}

// Basis of {x : m x = 0}, returned in reduced row echelon form.
template <class T>
Matrix<T> nullspace(const Matrix<T>& m, std::size_t ncols, std::vector<T>* assumptions = nullptr) {
  Echelon<T> e = row_reduce(m, ncols);
  if (assumptions) *assumptions = e.assumptions;
  std::vector<bool> is_pivot(ncols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  Matrix<T> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(ncols, T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < e.rows.size(); ++i) v[e.pivots[i]] = T(0) - e.rows[i][f];
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return basis;
  return row_reduce(basis, ncols).rows;
}

template <class T>
bool in_span(const Matrix<T>& rows, const std::vector<T>& v, std::size_t ncols) {
  Matrix<T> m = rows;
  std::size_t r0 = rank(m, ncols);
  m.push_back(v);
  return rank(m, ncols) == r0;
}

}  // namespace liesym
