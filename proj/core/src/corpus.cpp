#include "pronmod/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <random>
#include <sstream>

#include "pronmod/io.hpp"

namespace fs = std::filesystem;

namespace pronmod {

size_t Utterance::phoneCount() const {
    size_t n = 0;
    for (const auto& w : words) n += w.lexicalPron.size();
    return n;
}

size_t Corpus::wordCount() const {
    size_t n = 0;
    for (const auto& u : utterances) n += u.words.size();
    return n;
}

size_t Corpus::phoneCount() const {
    size_t n = 0;
    for (const auto& u : utterances) n += u.phoneCount();
    return n;
}

std::vector<const Utterance*> Corpus::subset(Split s) const {
    std::vector<const Utterance*> out;
    if (utteranceSplit.size() != utterances.size())
        throw InsufficientDataError("corpus has no split assignment");
    for (size_t i = 0; i < utterances.size(); ++i)
        if (utteranceSplit[i] == s) out.push_back(&utterances[i]);
    return out;
}

std::set<std::string> loadFunctionWords(const std::string& path) {
    std::set<std::string> out;
    std::istringstream in(io::readFile(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

namespace {

struct TimedLabel {
    double start = 0, end = 0;
    bool timed = false;
    std::string text;
};

std::vector<TimedLabel> readTier(const std::string& path) {
    std::vector<TimedLabel> out;
    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 3)
            throw ParseError(where + ": want start<TAB>end<TAB>label");
        TimedLabel t;
        t.text = f[2];
        if (f[0] != "-" && f[1] != "-") {
            try {
                t.start = std::stod(f[0]);
                t.end = std::stod(f[1]);
            } catch (const std::exception&) {
                throw ParseError(where + ": bad time");
            }
            t.timed = true;
        }
        out.push_back(std::move(t));
    }
    return out;
}

Utterance loadUtterance(const std::string& dir, const std::string& id, const PhoneInventory& inv) {
    Utterance utt;
    utt.id = id;

    auto words = readTier(dir + "/" + id + ".words");
    auto phones = readTier(dir + "/" + id + ".phones");

    utt.words.resize(words.size());
    for (size_t i = 0; i < words.size(); ++i)
        utt.words[i].orthography = words[i].text;

    // Assign phones to words. With a single word order suffices; otherwise
    // every label needs a time and assignment is by midpoint containment.
    for (size_t p = 0; p < phones.size(); ++p) {
        const auto& ph = phones[p];
        PhoneToken tok;
        try {
            tok = inv.parseToken(ph.text);
        } catch (const UnknownSymbolError& e) {
            throw UnknownSymbolError(dir + "/" + id + ".phones: " + e.what() + " (token " +
                                     std::to_string(p + 1) + ")");
        }
        size_t target = words.size();
        if (words.size() == 1) {
            target = 0;
        } else {
            if (!ph.timed)
                throw TierMismatchError(id + ": untimed phone labels in a multi-word utterance");
            double mid = (ph.start + ph.end) / 2.0;
            for (size_t w = 0; w < words.size(); ++w) {
                if (!words[w].timed)
                    throw TierMismatchError(id + ": untimed word labels in a multi-word utterance");
                if (mid >= words[w].start && mid < words[w].end) {
                    target = w;
                    break;
                }
            }
        }
        if (target >= words.size())
            throw TierMismatchError(id + ": phone '" + ph.text + "' falls outside every word span");
        utt.words[target].postlexPhones.push_back(tok);
    }

    // Sidecar annotations.
    for (const auto& line : io::readTsv(dir + "/" + id + ".meta")) {
        const auto& f = line.fields;
        std::string where = dir + "/" + id + ".meta:" + std::to_string(line.number);
        if (f[0] == "BOUNDARY") {
            if (f.size() != 3)
                throw ParseError(where + ": want BOUNDARY<TAB>kind<TAB>afterWordIndex");
            size_t after = std::stoul(f[2]);
            if (after >= utt.words.size())
                throw ParseError(where + ": boundary index out of range");
            if (f[1] == "sentence") {
                utt.sentenceBoundaries.insert(after);
                utt.clauseBoundaries.insert(after);
                utt.phraseBoundaries.insert(after);
            } else if (f[1] == "clause") {
                utt.clauseBoundaries.insert(after);
                utt.phraseBoundaries.insert(after);
            } else if (f[1] == "phrase") {
                utt.phraseBoundaries.insert(after);
            } else {
                throw ParseError(where + ": unknown boundary kind '" + f[1] + "'");
            }
            continue;
        }
        if (f.size() != 4)
            throw ParseError(where + ": want wordIndex<TAB>tag<TAB>wordType<TAB>prominence");
        size_t idx = std::stoul(f[0]);
        if (idx >= utt.words.size())
            throw ParseError(where + ": word index out of range");
        WordToken& w = utt.words[idx];
        w.tag = (f[1] == "-") ? "" : f[1];
        if (f[2] == "function") w.wordType = WordType::Function;
        else if (f[2] == "content") w.wordType = WordType::Content;
        else throw ParseError(where + ": unknown word type '" + f[2] + "'");
        w.prominence = std::stoi(f[3]);
    }
    return utt;
}

} // namespace

Corpus loadCorpus(const std::string& labelDir, const PhoneInventory& inv) {
    if (!fs::exists(labelDir) || !fs::is_directory(labelDir))
        throw IoError("label directory '" + labelDir + "' does not exist");
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(labelDir)) {
        if (entry.path().extension() == ".words")
            ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());

    Corpus corpus;
    for (const auto& id : ids)
        corpus.utterances.push_back(loadUtterance(labelDir, id, inv));
    return corpus;
}

void saveCorpus(const Corpus& corpus, const std::string& labelDir, const PhoneInventory& inv) {
    fs::create_directories(labelDir);
    for (const auto& utt : corpus.utterances) {
        std::string words, phones, meta;
        size_t t = 0;
        for (size_t w = 0; w < utt.words.size(); ++w) {
            const WordToken& word = utt.words[w];
            size_t begin = t;
            for (const auto& p : word.postlexPhones) {
                phones += std::to_string(t) + "\t" + std::to_string(t + 1) + "\t" +
                          inv.symbol(p.id) + "\n";
                ++t;
            }
            words += std::to_string(begin) + "\t" + std::to_string(t) + "\t" + word.orthography + "\n";
            meta += std::to_string(w) + "\t" + (word.tag.empty() ? "-" : word.tag) + "\t" +
                    (word.wordType == WordType::Function ? "function" : "content") + "\t" +
                    std::to_string(word.prominence) + "\n";
        }
        for (size_t b : utt.phraseBoundaries) {
            const char* kind = utt.sentenceBoundaries.count(b) ? "sentence"
                               : utt.clauseBoundaries.count(b) ? "clause"
                                                               : "phrase";
            meta += std::string("BOUNDARY\t") + kind + "\t" + std::to_string(b) + "\n";
        }
        io::writeFile(labelDir + "/" + utt.id + ".words", words);
        io::writeFile(labelDir + "/" + utt.id + ".phones", phones);
        io::writeFile(labelDir + "/" + utt.id + ".meta", meta);
    }
}

void resolveLexical(Corpus& corpus, const Lexicon& lex) {
    for (auto& utt : corpus.utterances) {
        for (auto& w : utt.words) {
            std::optional<std::string> tag;
            if (!w.tag.empty()) tag = w.tag;
            try {
                w.lexicalPron = lex.lookup(w.orthography, tag).front().pronunciation;
            } catch (const NotFoundError& e) {
                throw NotFoundError(std::string(e.what()) + " (utterance " + utt.id + ")");
            }
        }
    }
}

Corpus splitCorpus(const Corpus& corpus, size_t trainWords, size_t testWords, uint64_t seed) {
    size_t total = corpus.wordCount();
    if (trainWords + testWords > total)
        throw InsufficientDataError("requested " + std::to_string(trainWords + testWords) +
                                    " words, corpus has " + std::to_string(total));

    std::vector<size_t> order(corpus.utterances.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed ^ 0x243f6a8885a308d3ull);
    for (size_t i = order.size(); i > 1; --i) {
        uint64_t limit = UINT64_MAX - UINT64_MAX % i;
        uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        std::swap(order[i - 1], order[x % i]);
    }

    // Fill test first, then train, stopping at the utterance that lands
    // closest to each target.
    std::vector<int> assign(corpus.utterances.size(), -1);
    size_t cursor = 0;
    auto fill = [&](size_t target, int mark) {
        size_t got = 0;
        while (cursor < order.size() && got < target) {
            size_t u = order[cursor];
            size_t n = corpus.utterances[u].words.size();
            if (got + n > target && (got + n - target) > (target - got)) break; // closer without it
            assign[u] = mark;
            got += n;
            ++cursor;
        }
        return got;
    };
    fill(testWords, 1);
    fill(trainWords, 0);

    Corpus out;
    for (size_t u = 0; u < corpus.utterances.size(); ++u) {
        if (assign[u] < 0) continue;
        out.utterances.push_back(corpus.utterances[u]);
        out.utteranceSplit.push_back(assign[u] == 0 ? Split::Train : Split::Test);
    }
    return out;
}

PromptSentence parsePromptLine(const std::string& line) {
    PromptSentence s;
    std::istringstream ws(line);
    std::string tok;
    while (ws >> tok) {
        char punct = 0;
        while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.back())) &&
               tok.back() != '\'') {
            // keep only the innermost mark; ".." etc. collapse
            punct = tok.back();
            tok.pop_back();
        }
        if (tok.empty()) continue;
        std::string tag;
        auto slash = tok.find('/');
        if (slash != std::string::npos) {
            tag = tok.substr(slash + 1);
            tok = tok.substr(0, slash);
        }
        for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        s.words.push_back(tok);
        s.tags.push_back(tag);
        s.punctuation.push_back(punct);
    }
    return s;
}

std::vector<PromptSentence> loadPrompts(const std::string& path) {
    std::vector<PromptSentence> out;
    std::istringstream in(io::readFile(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        PromptSentence s = parsePromptLine(line);
        if (!s.words.empty()) out.push_back(std::move(s));
    }
    return out;
}

std::vector<OracleWord> oracleWords(const Utterance& utt) {
    std::vector<OracleWord> out;
    out.reserve(utt.words.size());
    for (const auto& w : utt.words)
        out.push_back(OracleWord{w.lexicalPron, w.wordType == WordType::Function});
    return out;
}

namespace {

bool isConjunction(const std::string& w) {
    return w == "and" || w == "but" || w == "or" || w == "nor";
}

} // namespace

Utterance buildAnnotatedUtterance(const PromptSentence& prompt, const Lexicon& lex,
                                  const std::set<std::string>& functionWords,
                                  const std::string& id) {
    Utterance utt;
    utt.id = id;
    for (size_t wi = 0; wi < prompt.words.size(); ++wi) {
        WordToken w;
        w.orthography = prompt.words[wi];
        w.tag = prompt.tags[wi];
        std::optional<std::string> tag;
        if (!w.tag.empty()) tag = w.tag;
        w.lexicalPron = lex.lookup(w.orthography, tag).front().pronunciation;
        w.wordType = functionWords.count(w.orthography) ? WordType::Function : WordType::Content;
        w.prominence = (w.wordType == WordType::Function) ? 0 : 1;
        utt.words.push_back(std::move(w));

        char punct = prompt.punctuation[wi];
        bool last = (wi + 1 == prompt.words.size());
        bool terminal = punct == '.' || punct == '?' || punct == '!';
        bool comma = punct == ',' || punct == ';' || punct == ':';
        bool preConj = !last && isConjunction(prompt.words[wi + 1]);
        if (terminal || last) {
            utt.sentenceBoundaries.insert(wi);
            utt.clauseBoundaries.insert(wi);
            utt.phraseBoundaries.insert(wi);
        } else if (comma || preConj) {
            utt.clauseBoundaries.insert(wi);
            utt.phraseBoundaries.insert(wi);
        } else if (punct != 0) {
            utt.phraseBoundaries.insert(wi);
        }
    }
    // Sentence-final content word is the most prominent.
    for (size_t wi = utt.words.size(); wi-- > 0;) {
        if (utt.words[wi].wordType == WordType::Content) {
            utt.words[wi].prominence = 2;
            break;
        }
    }
    return utt;
}

Corpus synthesizeCorpus(const Lexicon& lex, const std::vector<PromptSentence>& prompts,
                        const RuleOracle& oracle, const std::set<std::string>& functionWords,
                        uint64_t seed) {
    Corpus corpus;
    for (size_t pi = 0; pi < prompts.size(); ++pi) {
        std::ostringstream id;
        id << "u";
        id.width(4);
        id.fill('0');
        id << pi;
        Utterance utt;
        try {
            utt = buildAnnotatedUtterance(prompts[pi], lex, functionWords, id.str());
        } catch (const NotFoundError& e) {
            throw NotFoundError(std::string(e.what()) + " (prompt " + std::to_string(pi + 1) + ")");
        }

        uint64_t uttSeed = seed * 0x100000001b3ull + pi;
        auto phones = oracle.realize(oracleWords(utt), uttSeed);
        for (size_t wi = 0; wi < utt.words.size(); ++wi)
            utt.words[wi].postlexPhones = phones[wi];
        corpus.utterances.push_back(std::move(utt));
    }
    return corpus;
}

} // namespace pronmod
