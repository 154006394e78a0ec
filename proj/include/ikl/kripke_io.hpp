#pragma once

#include <filesystem>
#include <iosfwd>

#include "ikl/kripke.hpp"

namespace ikl {

// Line-oriented text format:
//
//   kripke <n> <k>
//   alphabet <sym1> <sym2> ...
//   initial <qid>
//   state <qid> <bitstring of length k>        (n lines)
//   trans <qid> <sym> <qid'>                   (n * |alphabet| lines)
//
// Blank lines and lines starting with '#' are ignored. DFA files use k = 1.

void write_kripke(std::ostream& out, const KripkeStructure& a);
KripkeStructure read_kripke(std::istream& in);

void save_kripke(const std::filesystem::path& path, const KripkeStructure& a);
KripkeStructure load_kripke(const std::filesystem::path& path);

} // namespace ikl
