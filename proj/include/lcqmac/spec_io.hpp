#pragma once

#include <string>

#include "lcqmac/standard_form.hpp"

namespace lcqmac {

/// Parses a spec document: {"d": int, "V1": [[int]], "V2": [[int]],
/// "V3": [[int]]} or the general-K form {"d": int, "V": [[[int]]]}.
/// Entries are reduced mod d on load.
FunctionSpec spec_from_json(const std::string& text);

FunctionSpec load_spec_file(const std::string& path);

std::string spec_to_json(const FunctionSpec& spec);

/// Parses "1,1,1;0,2,0" into a matrix over F_q (entries reduced mod q).
FpMatrix matrix_from_rows_string(const std::string& text, uint32_t q);

}  // namespace lcqmac
