#pragma once

#include <iosfwd>

#include "ikl/kripke.hpp"

namespace ikl {

/// Serves the SUT side of the wire protocol for a known structure until
/// QUIT or end of input. Returns the number of commands handled.
std::size_t serve_kripke(std::istream& in, std::ostream& out, const KripkeStructure& model);

} // namespace ikl
