// SPDX-License-Identifier: Apache-2.0
#include "mhstn/variables.hpp"

#include "mhstn/errors.hpp"

namespace mhstn {

std::string_view variable_name(Variable v) noexcept {
  switch (v) {
    case Variable::v: return "v";
    case Variable::vx: return "vx";
    case Variable::vy: return "vy";
    case Variable::theta: return "theta";
    case Variable::tp: return "tp";
    case Variable::rh: return "rh";
    case Variable::slp: return "slp";
  }
  return "?";
}

Variable parse_variable(std::string_view name) {
  for (auto v : kAllVariables)
    if (variable_name(v) == name) return v;
  throw ArgumentError("unknown variable '" + std::string(name) + "'");
}

std::vector<Variable> parse_variable_list(std::string_view csv) {
  std::vector<Variable> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto token = csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start);
    if (!token.empty()) out.push_back(parse_variable(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_variables(const std::vector<Variable>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ',';
    out += variable_name(vars[i]);
  }
  return out;
}

}  // namespace mhstn
