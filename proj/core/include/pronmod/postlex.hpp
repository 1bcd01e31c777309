#pragma once

#include <string>
#include <vector>

#include "pronmod/alignment.hpp"
#include "pronmod/chunk.hpp"
#include "pronmod/corpus.hpp"
#include "pronmod/net.hpp"

namespace pronmod {

enum class SyllablePosition : uint8_t { Onset, Nucleus, Coda };

// Auxiliary features of one phone position. Distances are in phones, both
// directions, clipped at the spec cap.
struct ContextFeatures {
    int distWordLeft = 0, distWordRight = 0;
    int distPhraseLeft = 0, distPhraseRight = 0;
    int distClauseLeft = 0, distClauseRight = 0;
    int distSentenceLeft = 0, distSentenceRight = 0;
    int stress = 0; // stress digit of the current syllable
    SyllablePosition syllablePosition = SyllablePosition::Nucleus;
    WordType wordType = WordType::Content;
    int prominence = 0;
};

// Encoding layout for the postlexical classifier: a window of phone slots
// (one-hot + articulatory features + stress annotation, with a sentinel
// beyond utterance edges) plus the context features of the center phone.
struct ContextSpec {
    size_t window = 9;      // odd
    size_t distanceCap = 7; // one-hot 0..cap-1 plus an overflow bucket
    size_t inventorySize = 0;
    size_t featureCount = 0;
    size_t maxProminence = 3;

    ContextSpec() = default;
    ContextSpec(const PhoneInventory& inv, size_t window = 9);

    size_t slotWidth() const { return inventorySize + 1 + featureCount + 4; }
    size_t distanceWidth() const { return (distanceCap + 1) * 8; }
    size_t contextWidth() const { return distanceWidth() + 3 + 3 + 2 + (maxProminence + 1); }
    size_t inputWidth() const { return window * slotWidth() + contextWidth(); }
};

// Syllabifies a word's lexical pronunciation: position of each phone and the
// stress digit of its syllable.
struct SyllableInfo {
    std::vector<SyllablePosition> position;
    std::vector<int> stress;
};
SyllableInfo syllabify(const std::vector<PhoneToken>& pron, const PhoneInventory& inv);

ContextFeatures contextFeatures(const Utterance& utt, size_t wordIdx, size_t phoneIdx,
                                const PhoneInventory& inv, size_t distanceCap);

// Fixed-width input vector for one lexical phone position.
std::vector<double> encodeContext(const Utterance& utt, size_t wordIdx, size_t phoneIdx,
                                  const ContextSpec& spec, const PhoneInventory& inv);

struct PostlexModel {
    Network network;
    ContextSpec spec;
    std::vector<std::string> labels;

    size_t labelIndex(const std::string& label) const; // labels.size() if unseen
};

// Aligns one word token's lexical and postlexical tiers and returns the
// postlexical chunk realized for each lexical phone.
std::vector<TokenChunk> goldChunks(const WordToken& word, const PhoneInventory& inv,
                                   const AllophoneCosts& costs);

struct PostlexDataset {
    std::vector<TrainingExample> examples;
    std::vector<std::string> labels;
    size_t skippedTokens = 0; // tokens dropped for overfull chunks
};

// One example per lexical phone of every word token, labels in first-seen
// order. With `fixedLabels`, examples whose gold label is absent from the
// list are dropped (and counted in skippedTokens).
PostlexDataset buildPostlexDataset(const std::vector<const Utterance*>& utts,
                                   const PhoneInventory& inv, const AllophoneCosts& costs,
                                   const ContextSpec& spec,
                                   const std::vector<std::string>* fixedLabels = nullptr);

PostlexModel trainPostlex(const PostlexDataset& dataset, const Hyperparams& hyper);

// Predicted chunk label per lexical phone of one word.
std::vector<std::string> predictChunkLabels(const PostlexModel& model, const Utterance& utt,
                                            size_t wordIdx, const PhoneInventory& inv);

// Whole-utterance conversion: per-word postlexical phone sequences.
std::vector<std::vector<PhoneToken>> postlexicalize(const PostlexModel& model, const Utterance& utt,
                                                    const PhoneInventory& inv);

// Persistence: network file plus `<path>.json` sidecar with the spec and
// label set.
void savePostlexModel(const PostlexModel& model, const std::string& path);
PostlexModel loadPostlexModel(const std::string& path, const PhoneInventory& inv);

} // namespace pronmod
