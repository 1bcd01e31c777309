#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pronmod/phonology.hpp"

namespace pronmod {

// One alignment step: substitution (both indices), deletion (src only) or
// insertion (dst only).
struct AlignStep {
    std::optional<size_t> src;
    std::optional<size_t> dst;

    bool isSubstitution() const { return src && dst; }
    bool isDeletion() const { return src && !dst; }
    bool isInsertion() const { return !src && dst; }

    bool operator==(const AlignStep&) const = default;
};

struct Alignment {
    std::vector<AlignStep> steps;
    double totalCost = 0.0;
};

// Position-indexed cost callbacks over two sequences of given lengths.
// Symbol-level models are adapted onto this via the helpers below.
struct PositionCosts {
    std::function<double(size_t, size_t)> substitution; // (srcIdx, dstIdx)
    std::function<double(size_t)> deletion;             // srcIdx skipped
    std::function<double(size_t)> insertion;            // dstIdx inserted
};

// Global minimal-cost monotone alignment (Needleman-Wunsch style).
// Deterministic tie-breaking: substitution > deletion > insertion.
Alignment alignPositions(size_t srcLen, size_t dstLen, const PositionCosts& costs);

// Symbol-level cost model over two (possibly different) alphabets.
struct CostModel {
    std::function<double(const std::string&, const std::string&)> substitution;
    std::function<double(const std::string&)> gapSrc; // deletion of a src symbol
    std::function<double(const std::string&)> gapDst; // insertion of a dst symbol

    static CostModel identityZero();
};

Alignment align(const std::vector<std::string>& src, const std::vector<std::string>& dst,
                const CostModel& model);

// Per-src-symbol grouping of an alignment. Each chunk owns exactly one src
// index and the 0-2 dst indices realized for it. Insertions attach to the
// preceding src chunk; insertions before the first src symbol attach to the
// following chunk. More than two dst symbols in one chunk is an anomaly and
// raises OverfullChunkError.
struct Chunk {
    size_t srcIndex = 0;
    std::vector<size_t> dstIndices; // 0..2 entries
};

std::vector<Chunk> chunkAlignment(const Alignment& a);

// Substitution-cost table for the lexical/postlexical alphabets, loaded from
// a TSV `lexSymbol<TAB>postlexSymbol<TAB>cost`. Rows with "-" on one side
// override the gap cost for the other side's symbol.
class AllophoneCosts {
public:
    static AllophoneCosts loadFile(const std::string& path, const PhoneInventory& inv);

    std::optional<double> substitution(PhoneId lex, PhoneId post) const;
    std::optional<double> deletion(PhoneId lex) const;
    std::optional<double> insertion(PhoneId post) const;

private:
    std::map<std::pair<PhoneId, PhoneId>, double> sub_;
    std::map<PhoneId, double> del_;
    std::map<PhoneId, double> ins_;
};

// Cost of pairing an orthographic letter with a lexical phone: 0 when the
// phone is a candidate of the letter, otherwise scaled by feature overlap
// into (0, 1].
double letterPhoneCost(char letter, const std::string& phone, const LetterModelSet& letters,
                       const PhoneInventory& inv);

// Cost of pairing a lexical phone with a postlexical phone: 0 for identical
// base symbols, the table cost for documented allophone pairs, otherwise
// 1 - featureOverlapFraction.
double lexPostlexCost(const std::string& lexPhone, const std::string& postlexPhone,
                      const AllophoneCosts& table, const PhoneInventory& inv);

// Ready-made models for the two alignment tasks.
CostModel makeLetterPhoneModel(const LetterModelSet& letters, const PhoneInventory& inv);
CostModel makeLexPostlexModel(const AllophoneCosts& table, const PhoneInventory& inv);

} // namespace pronmod
