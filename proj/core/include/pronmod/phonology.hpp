#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pronmod/errors.hpp"

namespace pronmod {

// Which alphabet a phone symbol belongs to. Lexical symbols appear in
// dictionary pronunciations; postlexical symbols appear in labeled speech
// (flaps, closures, glottal stops, reduced vowels, syllabics). Most symbols
// are shared.
enum class Alphabet : uint8_t { Lexical, Postlexical, Both };

// Articulatory feature bits. The feature list is data-driven (one inventory
// file defines the names); a vector is a bitmask over that list. At most 64
// features per inventory.
class FeatureVector {
public:
    FeatureVector() = default;
    explicit FeatureVector(uint64_t bits) : bits_(bits) {}

    bool test(size_t i) const { return (bits_ >> i) & 1u; }
    void set(size_t i) { bits_ |= (uint64_t{1} << i); }
    uint64_t bits() const { return bits_; }
    int count() const;

    FeatureVector unionWith(FeatureVector o) const { return FeatureVector(bits_ | o.bits_); }
    FeatureVector intersect(FeatureVector o) const { return FeatureVector(bits_ & o.bits_); }
    bool subsetOf(FeatureVector o) const { return (bits_ & ~o.bits_) == 0; }
    int overlapCount(FeatureVector o) const { return intersect(o).count(); }

    // |A ∩ B| / |A ∪ B|; 0 when both empty.
    double overlapFraction(FeatureVector o) const;

    bool operator==(const FeatureVector&) const = default;

private:
    uint64_t bits_ = 0;
};

using PhoneId = uint16_t;

struct Phone {
    std::string symbol;
    Alphabet alphabet = Alphabet::Both;
    FeatureVector features;
};

// A phone token as it appears on a tier: inventory symbol plus an optional
// stress digit (0/1/2). Stress is an annotation carried next to the symbol,
// not a separate inventory entry; postlexical tiers carry no stress.
struct PhoneToken {
    PhoneId id = 0;
    int8_t stress = -1; // -1 = unannotated

    bool operator==(const PhoneToken&) const = default;
};

// Immutable symbol table: phones with feature vectors. Loaded once, then
// safe for concurrent reads.
class PhoneInventory {
public:
    PhoneInventory() = default;
    PhoneInventory(std::vector<std::string> featureNames, std::vector<Phone> phones);

    static PhoneInventory loadFile(const std::string& path);

    size_t size() const { return phones_.size(); }
    size_t featureCount() const { return featureNames_.size(); }
    const std::vector<std::string>& featureNames() const { return featureNames_; }
    const std::vector<Phone>& phones() const { return phones_; }

    const Phone& phone(PhoneId id) const { return phones_.at(id); }
    const std::string& symbol(PhoneId id) const { return phones_.at(id).symbol; }

    bool contains(const std::string& symbol) const;
    PhoneId id(const std::string& symbol) const; // throws UnknownSymbolError
    std::optional<PhoneId> tryId(const std::string& symbol) const;

    FeatureVector features(const std::string& symbol) const { return phone(id(symbol)).features; }
    FeatureVector features(PhoneId id) const { return phone(id).features; }

    std::optional<size_t> featureIndex(const std::string& name) const;

    // "ae1" -> (ae, stress 1); "tcl" -> (tcl, none). Throws UnknownSymbolError
    // with the token position when the base symbol is not in the inventory.
    PhoneToken parseToken(const std::string& token) const;

    // Whitespace-separated tokens; order preserved.
    std::vector<PhoneToken> parseString(const std::string& text) const;

    std::string tokenText(const PhoneToken& t) const;
    std::string render(const std::vector<PhoneToken>& seq) const;

private:
    std::vector<std::string> featureNames_;
    std::vector<Phone> phones_;
    std::map<std::string, PhoneId> bySymbol_;
};

// Candidate lexical phones for one orthographic character.
struct LetterModel {
    char letter = 0;
    std::vector<PhoneId> candidatePhones;
};

// Letter models for the supported orthography (a-z plus apostrophe).
class LetterModelSet {
public:
    LetterModelSet() = default;

    static LetterModelSet loadFile(const std::string& path, const PhoneInventory& inv);

    bool supports(char c) const;
    const LetterModel& model(char c) const; // throws UnknownSymbolError

    // Union of the candidate phones' feature vectors.
    FeatureVector letterFeatures(char c, const PhoneInventory& inv) const;

    const std::vector<LetterModel>& models() const { return models_; }

private:
    std::vector<LetterModel> models_;
    std::map<char, size_t> byLetter_;
};

// Free-function views matching the operation names used across the toolkit.
FeatureVector phoneFeatures(const PhoneInventory& inv, const std::string& symbol);
FeatureVector letterFeatures(const LetterModel& lm, const PhoneInventory& inv);
std::vector<PhoneToken> parsePhoneString(const PhoneInventory& inv, const std::string& text);

} // namespace pronmod
