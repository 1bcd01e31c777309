#pragma once

#include <set>
#include <string>
#include <vector>

#include "pronmod/lexicon.hpp"
#include "pronmod/phonology.hpp"
#include "pronmod/rules.hpp"

namespace pronmod {

enum class WordType : uint8_t { Function, Content };

struct WordToken {
    std::string orthography;
    std::string tag;                        // "" = untagged
    std::vector<PhoneToken> lexicalPron;    // lexical alphabet, stress-marked
    std::vector<PhoneToken> postlexPhones;  // postlexical alphabet, no stress
    WordType wordType = WordType::Content;
    int prominence = 1;
};

// Boundary sets hold "after word i" positions. Utterance edges count as
// boundaries of every kind. Sentence positions are also clause positions,
// clause positions also phrase positions.
struct Utterance {
    std::string id;
    std::vector<WordToken> words;
    std::set<size_t> sentenceBoundaries;
    std::set<size_t> clauseBoundaries;
    std::set<size_t> phraseBoundaries;

    size_t phoneCount() const;
};

enum class Split : uint8_t { Train, Test };

struct Corpus {
    std::vector<Utterance> utterances;
    std::vector<Split> utteranceSplit; // empty until splitCorpus assigns

    size_t wordCount() const;
    size_t phoneCount() const;
    std::vector<const Utterance*> subset(Split s) const;
};

// Closed-class word list; one word per line.
std::set<std::string> loadFunctionWords(const std::string& path);

// Label-directory format: per utterance `<id>.words`, `<id>.phones` and
// `<id>.meta`. Tiers join by time containment; synthetic corpora write
// sequence numbers as times (ordering is what matters).
Corpus loadCorpus(const std::string& labelDir, const PhoneInventory& inv);
void saveCorpus(const Corpus& corpus, const std::string& labelDir, const PhoneInventory& inv);

// Fills lexicalPron for every word token from the lexicon (tag-aware,
// preferred variant). Throws NotFoundError naming the word.
void resolveLexical(Corpus& corpus, const Lexicon& lex);

// Utterance-coherent split: picks a test set of about testWords tokens, then
// a train set of about trainWords from the remainder (each within one
// utterance of the target). Utterances beyond the requested sizes are left
// out of the returned corpus.
Corpus splitCorpus(const Corpus& corpus, size_t trainWords, size_t testWords, uint64_t seed);

struct PromptSentence {
    std::vector<std::string> words;
    std::vector<std::string> tags;      // per word, "" = none
    std::vector<char> punctuation;      // per word, trailing mark or 0
};

std::vector<PromptSentence> loadPrompts(const std::string& path);
PromptSentence parsePromptLine(const std::string& line);

// Lexical tier plus annotation heuristics for one prompt sentence: word type
// from the closed-class list, prominence 0/1 with 2 on the sentence-final
// content word, boundaries from punctuation and conjunctions. No
// postlexical tier.
Utterance buildAnnotatedUtterance(const PromptSentence& prompt, const Lexicon& lex,
                                  const std::set<std::string>& functionWords,
                                  const std::string& id);

// Builds a fully labeled corpus from prompt sentences: lexical prons from
// the lexicon, annotations from documented heuristics, postlexical tier from
// the rule oracle.
Corpus synthesizeCorpus(const Lexicon& lex, const std::vector<PromptSentence>& prompts,
                        const RuleOracle& oracle, const std::set<std::string>& functionWords,
                        uint64_t seed);

// Word-level oracle inputs for one utterance (the adapter used everywhere a
// rule pass or context encoding needs the utterance).
std::vector<OracleWord> oracleWords(const Utterance& utt);

} // namespace pronmod
