#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pronmod/chunk.hpp"
#include "pronmod/phonology.hpp"

namespace pronmod {

// Word-level input to the rule oracle: the lexical pronunciation plus the
// annotations rule contexts may consult.
struct OracleWord {
    std::vector<PhoneToken> lexical;
    bool functionWord = false;
};

// One phone slot's fate under the oracle: the postlexical chunk realized for
// it and the rule that claimed it ("" = identity, untouched).
struct SlotOutcome {
    TokenChunk chunk;
    std::string rule;
};

// Context-conditioned rewrite rules over lexical phone strings, applied in
// file order; the first rule to claim a slot wins. Patterns match phones and
// word boundaries; rewrites assign a 0-2 symbol postlexical chunk per
// matched target slot.
//
// Rule file line: NAME<TAB>pattern<TAB>context<TAB>rewrite<TAB>probability
//   pattern item:  sym | {a,b} | @feature, with optional :012 stress suffix;
//                  `|` word boundary, `#` utterance edge; ( ) wraps targets
//   context:       `-` | function | content | nostress (comma-separated)
//   rewrite:       one spec per target slot, `/`-separated; each spec is
//                  symbols separated by spaces, `-` for deletion, `=k` for
//                  the base symbol of target slot k
class RuleOracle {
public:
    struct PatternItem {
        enum class Kind : uint8_t { Phone, WordBoundary, UttEdge };
        Kind kind = Kind::Phone;
        std::vector<PhoneId> symbols;      // non-empty: explicit symbol set
        std::optional<size_t> featureBit;  // @feature class
        std::optional<uint8_t> stressSet;  // bit d set = stress d allowed
        bool target = false;
    };

    struct Rule {
        std::string name;
        std::vector<PatternItem> items;
        std::vector<std::vector<std::string>> rewrites; // per target slot
        bool requireFunction = false;
        bool requireContent = false;
        bool requireNoStress = false;
        double probability = 1.0;
        bool enabled = true;
    };

    RuleOracle() = default;

    static RuleOracle loadFile(const std::string& path, const PhoneInventory& inv);

    const std::vector<Rule>& rules() const { return rules_; }
    const PhoneInventory& inventory() const { return *inv_; }

    // Enable/disable by rule name; returns how many rules matched.
    size_t setEnabled(const std::string& name, bool enabled);
    void disableAll();

    // Per-word, per-slot outcomes. Deterministic for a fixed seed; the seed
    // only matters when some rule has probability < 1.
    std::vector<std::vector<SlotOutcome>> apply(const std::vector<OracleWord>& words,
                                                uint64_t seed = 0) const;

    // Convenience: concatenated postlexical phones per word.
    std::vector<std::vector<PhoneToken>> realize(const std::vector<OracleWord>& words,
                                                 uint64_t seed = 0) const;

private:
    std::vector<Rule> rules_;
    const PhoneInventory* inv_ = nullptr;
};

} // namespace pronmod
