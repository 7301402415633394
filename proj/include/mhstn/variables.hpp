// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mhstn {

// Meteorological variables shared by observations and NWP.
enum class Variable : std::size_t { v = 0, vx, vy, theta, tp, rh, slp };

inline constexpr std::size_t kVariableCount = 7;
inline constexpr std::array<Variable, kVariableCount> kAllVariables{
    Variable::v,     Variable::vx, Variable::vy, Variable::theta,
    Variable::tp,    Variable::rh, Variable::slp};
// Targets that get their own network pipeline.
inline constexpr std::array<Variable, 3> kSpeedTargets{Variable::v, Variable::vx, Variable::vy};

constexpr std::size_t index_of(Variable v) noexcept { return static_cast<std::size_t>(v); }
std::string_view variable_name(Variable v) noexcept;
Variable parse_variable(std::string_view name);
std::vector<Variable> parse_variable_list(std::string_view csv);
std::string join_variables(const std::vector<Variable>& vars);

}  // namespace mhstn
