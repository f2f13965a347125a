#include "liesym/families.hpp"

#include <stdexcept>

#include "liesym/parse.hpp"

namespace liesym {

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> list = {
      {"zk", "u_t + a*u_xxx + b*u_xyy + c*u*u_x", {"a", "b", "c"}},
      {"mzk1", "u_t + a*u^(1/2)*u_x + b*u_xxx + c*u_xyy", {"a", "b", "c"}},
      {"mzk2", "u_t + a*u^2*u_x + u_xxx + u_xyy", {"a"}},
      {"zk-gh", "u_t + u_xxx + g*u_xyy + h*u*u_x", {"g", "h"}},
      {"mzk-gh", "u_t + u_xxx + g*u_xyy + h*u^2*u_x", {"g", "h"}},
      {"gzk", "u_t + F(u)_xxx + G(u)_xyy + H(u)_x", {}},
      {"gzk-h0", "u_t + F(u)_xxx + G(u)_xyy", {}},
  };
  return list;
}

const FamilyInfo* find_family(const std::string& name) {
  for (const auto& f : families())
    if (f.name == name) return &f;
  return nullptr;
}

Equation inline_equation(const std::string& lhs, const std::vector<std::string>& params,
                         const std::map<std::string, Rational>& bindings) {
  ParseContext ctx;
  ctx.allow_coef = false;
  ctx.params.insert(params.begin(), params.end());
  for (const auto& [k, v] : bindings) ctx.params.insert(k);
  Equation eq = Equation::from_lhs(parse(lhs, ctx));
  eq.params = params;
  return bindings.empty() ? eq : substitute_params(eq, bindings);
}

Equation family_equation(const std::string& name, const std::map<std::string, Rational>& bindings) {
  const FamilyInfo* f = find_family(name);
  if (!f) throw std::invalid_argument("unknown equation family '" + name + "'");
  for (const auto& [k, v] : bindings) {
    bool ok = false;
    for (const auto& p : f->params) ok = ok || p == k;
    if (!ok) throw std::invalid_argument("family " + name + " has no parameter '" + k + "'");
  }
  Equation eq;
  if (name == "gzk") {
    eq = Equation::from_class(std::nullopt, std::nullopt, std::nullopt, name);
  } else if (name == "gzk-h0") {
    eq = Equation::from_class(std::nullopt, std::nullopt, Expr(0), name);
  } else {
    eq = inline_equation(f->lhs, f->params);
    if (name == "mzk1") eq.clearing = Expr(2) * pow(var_u(), Rational(1, 2));
    eq.name = name;
    if (!bindings.empty()) eq = substitute_params(eq, bindings);
  }
  return eq;
}

}  // namespace liesym
