#pragma once

#include <string>
#include <vector>

#include "pronmod/phonology.hpp"

namespace pronmod {

// The 0-2 phones realized for one source symbol (one lexical phone, or the
// 0-2 lexical phones for one letter). This is the classifiers' label unit.
using TokenChunk = std::vector<PhoneToken>;

// "-" for an empty chunk, otherwise "+"-joined token texts ("tcl+t", "ae1").
std::string chunkLabel(const PhoneInventory& inv, const TokenChunk& chunk);
TokenChunk parseChunkLabel(const PhoneInventory& inv, const std::string& label);

} // namespace pronmod
