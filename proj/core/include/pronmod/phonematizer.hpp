#pragma once

#include <string>
#include <vector>

#include "pronmod/alignment.hpp"
#include "pronmod/chunk.hpp"
#include "pronmod/lexicon.hpp"
#include "pronmod/net.hpp"

namespace pronmod {

// Encoding layout for the letter-to-sound classifier: a window of letter
// slots, each a one-hot over the supported orthography plus the letter's
// feature union, with a sentinel beyond word edges.
struct LetterEncoder {
    std::string letters; // supported orthography, index order
    size_t window = 7;   // odd
    size_t featureCount = 0;

    LetterEncoder() = default;
    LetterEncoder(const LetterModelSet& models, const PhoneInventory& inv, size_t window = 7);

    size_t slotWidth() const { return letters.size() + 1 + featureCount; }
    size_t inputWidth() const { return window * slotWidth(); }

    size_t letterIndex(char c) const; // throws UnsupportedCharacterError

    std::vector<double> encode(const std::string& word, size_t pos,
                               const LetterModelSet& models, const PhoneInventory& inv) const;
};

struct G2PModel {
    Network network;
    LetterEncoder encoder;
    std::vector<std::string> labels; // chunk labels over stress-marked lexical phones

    size_t labelIndex(const std::string& label) const;
};

struct G2PDataset {
    std::vector<TrainingExample> examples;
    std::vector<std::string> labels;
    size_t skippedEntries = 0;
};

// Aligns one spelling with one pronunciation and returns the 0-2 phone chunk
// realized by each letter.
std::vector<TokenChunk> letterChunks(const std::string& orthography,
                                     const std::vector<PhoneToken>& pron,
                                     const LetterModelSet& models, const PhoneInventory& inv);

// One example per letter of the preferred variant of every word in the
// lexicon. Entries whose alignment produces an overfull chunk are skipped
// and counted.
G2PDataset buildG2PDataset(const Lexicon& lex, const LetterModelSet& models,
                           const PhoneInventory& inv, const LetterEncoder& encoder,
                           const std::vector<std::string>* fixedLabels = nullptr);

G2PModel trainPhonematizer(const G2PDataset& dataset, const LetterEncoder& encoder,
                           const Hyperparams& hyper);

// Letter-to-sound conversion; output is a stress-marked lexical phone string.
std::vector<PhoneToken> phonematize(const G2PModel& model, const std::string& word,
                                    const LetterModelSet& models, const PhoneInventory& inv);

void saveG2PModel(const G2PModel& model, const std::string& path);
G2PModel loadG2PModel(const std::string& path, const PhoneInventory& inv);

} // namespace pronmod
