#pragma once

#include <string_view>

#include "ccpslice/program.hpp"

namespace ccpslice {

/// Parses and statically checks a `.ccp` program.
Program parse_program(std::string_view text);
/// Parses without running check_program.
Program parse_program_unchecked(std::string_view text);

/// `allow_hole` admits the `*` marker of sliced terms.
Constraint parse_constraint(std::string_view text, bool allow_hole = false);
Process parse_process(std::string_view text, bool allow_hole = false);
HornRule parse_rule(std::string_view text);

/// A variable as printed by VarName::str (`x`, `x_2`).
VarName parse_var_name(std::string_view text);

}  // namespace ccpslice
