#pragma once

#include <string>
#include <vector>

#include "pronmod/corpus.hpp"
#include "pronmod/postlex.hpp"

namespace pronmod {

// Fraction of positions whose chunk labels match exactly. Sequences are per
// lexical phone and must have equal length.
double exactMatchRate(const std::vector<std::string>& predicted,
                      const std::vector<std::string>& gold);

// Fraction of lexical phones realized as exactly their own single symbol
// across a corpus with both tiers filled.
double identityRate(const Corpus& corpus, const PhoneInventory& inv, const AllophoneCosts& costs);

struct RealizationTable {
    std::string lexPhone;
    std::vector<std::string> categories; // display order
    std::vector<size_t> counts;          // per category
    size_t other = 0;
    size_t total = 0;
    std::vector<int> percents; // per category, rounded half away from zero

    std::string renderText() const;
    std::string renderTsv() const;
};

// Distribution of the surface chunks of one lexical stop across the corpus.
// Categories: closure+release, closure only, release only, flap,
// glottal stop (/t/ only), deleted; everything else lands in `other`.
RealizationTable realizationTable(const Corpus& corpus, const std::string& lexPhone,
                                  const PhoneInventory& inv, const AllophoneCosts& costs);

// Same accounting over an explicit chunk list (used by table fixtures).
RealizationTable realizationTableFromChunks(const std::vector<TokenChunk>& chunks,
                                            const std::string& lexPhone,
                                            const PhoneInventory& inv);

struct ProbeCase {
    std::string name;      // phenomenon label
    std::string sentence;  // probe utterance text
    size_t wordIdx = 0;
    size_t phoneIdx = 0;
    std::string expectedLabel;
};

struct ProbeResult {
    ProbeCase probe;
    std::string predictedLabel;
    bool pass = false;
};

struct ProbeReport {
    std::vector<ProbeResult> results;
    size_t passed = 0;

    std::string renderText() const;
};

std::vector<ProbeCase> loadProbes(const std::string& path);

// Builds each probe utterance (lexicon lookup + annotation heuristics), runs
// the model on the target slot and compares chunk labels.
ProbeReport phenomenaProbe(const PostlexModel& model, const std::vector<ProbeCase>& probes,
                           const Lexicon& lex, const std::set<std::string>& functionWords,
                           const PhoneInventory& inv);

// The probe utterance builder, shared with tests and the CLI.
Utterance buildProbeUtterance(const std::string& sentence, const Lexicon& lex,
                              const std::set<std::string>& functionWords);

// Held-out accuracy: predicted vs gold chunk labels over whole utterances.
struct ChunkAccuracy {
    size_t correct = 0;
    size_t total = 0;
    double rate() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

ChunkAccuracy chunkAccuracy(const PostlexModel& model, const std::vector<const Utterance*>& utts,
                            const PhoneInventory& inv, const AllophoneCosts& costs);

} // namespace pronmod
