#pragma once

#include <string>

#include "stabex/category.hpp"

namespace stabex {

/// Parses an instance descriptor and returns the corresponding category.
///
/// Grammar: "zmod:<n>" (free modules over Z/n, n >= 2) or "pairs:<p>"
/// (subspace pairs over F_p, p prime). Instances live in a process-wide
/// registry, so the returned reference stays valid for the program's
/// lifetime and repeated lookups return the same object.
///
/// Throws std::invalid_argument on malformed input; the message pinpoints
/// the offending character position, e.g.
///   descriptor "zmod:": expected a number at position 5.
const Category& instance_from_descriptor(const std::string& desc);

}  // namespace stabex
