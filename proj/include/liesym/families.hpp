#pragma once

#include <map>
#include <string>
#include <vector>

#include "liesym/determine.hpp"

namespace liesym {

struct FamilyInfo {
  std::string name;
  std::string lhs;  // readable form; "class" members are built from F, G, H
  std::vector<std::string> params;
};

const std::vector<FamilyInfo>& families();
const FamilyInfo* find_family(const std::string& name);

// Unbound parameters stay symbolic. Throws std::invalid_argument for unknown names or parameters.
Equation family_equation(const std::string& name, const std::map<std::string, Rational>& bindings = {});

// "u_t + ..." with the given symbolic parameters.
Equation inline_equation(const std::string& lhs, const std::vector<std::string>& params = {},
                         const std::map<std::string, Rational>& bindings = {});

}  // namespace liesym
