#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pronmod/phonology.hpp"

namespace pronmod {

enum class LexSource : uint8_t { A = 0, B = 1, C = 2, Synthetic = 3 };

char lexSourceLetter(LexSource s);
LexSource lexSourceFromLetter(char c);

struct LexEntry {
    std::string orthography;          // lowercase
    std::vector<PhoneToken> pronunciation; // lexical symbols, stress on vowels
    std::string tag;                  // "" = untagged
    LexSource source = LexSource::Synthetic;
    int variantRank = 0;              // 0 = preferred variant

    bool operator==(const LexEntry&) const = default;
};

// One `PREFER a OVER b [WHEN orthGlob]` rule: among the variants of a single
// (orthography, tag) key, if some variants contain the token subsequence `a`
// and others contain `b`, the `b` side is removed.
struct VariantRule {
    std::vector<std::string> prefer; // base symbols, contiguous subsequence
    std::vector<std::string> over;
    std::string orthGlob; // "" = any; '*' wildcards
};

struct MergePolicy {
    std::vector<VariantRule> dialectRules;
    bool preferDistinctions = true; // gates dialectRules

    static MergePolicy loadFile(const std::string& path);
};

class Lexicon {
public:
    Lexicon() = default;

    // Entries for one orthography, variant-rank order. Empty if none.
    const std::vector<LexEntry>& entriesFor(const std::string& orthography) const;

    // Tagged lookup narrows to the given tag; untagged returns everything.
    // Throws NotFoundError when nothing matches (phonematizer fallback path).
    std::vector<LexEntry> lookup(const std::string& orthography,
                                 const std::optional<std::string>& tag = std::nullopt) const;

    size_t entryCount() const;
    size_t wordCount() const { return entries_.size(); }
    const std::map<std::string, std::vector<LexEntry>>& all() const { return entries_; }

    void insert(LexEntry entry); // used by the merge and the loader

private:
    std::map<std::string, std::vector<LexEntry>> entries_;
};

// Raw lexicon TSV: `orth<TAB>tag<TAB>pron[<TAB>source]`, '-' for an empty
// tag. The optional source column preserves provenance across save/load so
// a merged lexicon re-merges to itself.
Lexicon mergeLexica(const std::vector<std::string>& sourcePaths, const MergePolicy& policy,
                    const PhoneInventory& inv);

Lexicon loadLexicon(const std::string& path, const PhoneInventory& inv);
void saveLexicon(const Lexicon& lex, const std::string& path, const PhoneInventory& inv);

bool globMatch(const std::string& pattern, const std::string& text);

} // namespace pronmod
