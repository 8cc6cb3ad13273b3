#pragma once

// JSON state files.
//   pure:  {"dims":[2,2],"amps":[[re,im],...]}
//   mixed: {"dims":[2,2],"rho":[[[re,im],...],...]}   (row-major)

#include <string>
#include <string_view>

#include "superpos/states.hpp"

namespace superpos {

/// Throws InvalidInput on malformed JSON or states violating their invariants.
AnyState parse_state_json(std::string_view text);
AnyState load_state(const std::string& path);

std::string state_to_json(const AnyState& state);
void save_state(const std::string& path, const AnyState& state);

/// Accepts "name" or "name:p1,p2" and builds the catalog state.
AnyState state_from_spec(std::string_view spec);

}  // namespace superpos
