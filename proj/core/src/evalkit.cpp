#include "pronmod/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pronmod/io.hpp"

namespace pronmod {

double exactMatchRate(const std::vector<std::string>& predicted,
                      const std::vector<std::string>& gold) {
    if (predicted.size() != gold.size())
        throw LengthMismatchError("predicted " + std::to_string(predicted.size()) + " vs gold " +
                                  std::to_string(gold.size()) + " chunks");
    if (predicted.empty()) return 1.0;
    size_t hit = 0;
    for (size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == gold[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(predicted.size());
}

double identityRate(const Corpus& corpus, const PhoneInventory& inv, const AllophoneCosts& costs) {
    size_t identical = 0, total = 0;
    for (const auto& utt : corpus.utterances) {
        for (const auto& word : utt.words) {
            auto chunks = goldChunks(word, inv, costs);
            for (size_t s = 0; s < chunks.size(); ++s) {
                ++total;
                if (chunks[s].size() == 1 && chunks[s][0].id == word.lexicalPron[s].id) ++identical;
            }
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(identical) / static_cast<double>(total);
}

namespace {

int roundPercent(size_t count, size_t total) {
    if (total == 0) return 0;
    double p = 100.0 * static_cast<double>(count) / static_cast<double>(total);
    return static_cast<int>(p >= 0 ? std::floor(p + 0.5) : std::ceil(p - 0.5));
}

struct Category {
    std::string name;
    std::vector<std::string> chunk; // base symbols, empty = deleted
};

std::vector<Category> stopCategories(const std::string& stop) {
    std::string closure = stop + "cl";
    std::vector<Category> cats = {
        {"closure + release", {closure, stop}},
        {"closure only", {closure}},
        {"release only", {stop}},
        {"flap", {"dx"}},
    };
    if (stop == "t") cats.push_back({"glottal stop", {"q"}});
    cats.push_back({"deleted", {}});
    return cats;
}

} // namespace

RealizationTable realizationTableFromChunks(const std::vector<TokenChunk>& chunks,
                                            const std::string& lexPhone,
                                            const PhoneInventory& inv) {
    static const std::string stops[] = {"p", "b", "t", "d", "k", "g"};
    if (std::find(std::begin(stops), std::end(stops), lexPhone) == std::end(stops))
        throw UnknownSymbolError("no realization categories defined for '" + lexPhone + "'");

    auto cats = stopCategories(lexPhone);
    RealizationTable table;
    table.lexPhone = lexPhone;
    for (const auto& c : cats) table.categories.push_back(c.name);
    table.counts.assign(cats.size(), 0);

    for (const auto& chunk : chunks) {
        ++table.total;
        std::vector<std::string> bases;
        for (const auto& t : chunk) bases.push_back(inv.symbol(t.id));
        bool matched = false;
        for (size_t c = 0; c < cats.size(); ++c) {
            if (bases == cats[c].chunk) {
                ++table.counts[c];
                matched = true;
                break;
            }
        }
        if (!matched) ++table.other;
    }
    for (size_t c = 0; c < cats.size(); ++c)
        table.percents.push_back(roundPercent(table.counts[c], table.total));
    return table;
}

RealizationTable realizationTable(const Corpus& corpus, const std::string& lexPhone,
                                  const PhoneInventory& inv, const AllophoneCosts& costs) {
    PhoneId target = inv.id(lexPhone);
    std::vector<TokenChunk> collected;
    for (const auto& utt : corpus.utterances) {
        for (const auto& word : utt.words) {
            auto chunks = goldChunks(word, inv, costs);
            for (size_t s = 0; s < chunks.size(); ++s)
                if (word.lexicalPron[s].id == target) collected.push_back(chunks[s]);
        }
    }
    return realizationTableFromChunks(collected, lexPhone, inv);
}

std::string RealizationTable::renderText() const {
    std::ostringstream out;
    out << "Realizations of /" << lexPhone << "/\n";
    size_t width = 0;
    for (const auto& c : categories) width = std::max(width, c.size());
    for (size_t i = 0; i < categories.size(); ++i) {
        out << "  " << categories[i] << std::string(width - categories[i].size() + 2, ' ')
            << counts[i] << " (" << percents[i] << "%)\n";
    }
    out << "  other" << std::string(width - 5 + 2, ' ') << other << "\n";
    out << "  total" << std::string(width - 5 + 2, ' ') << total << "\n";
    return out.str();
}

std::string RealizationTable::renderTsv() const {
    std::ostringstream out;
    for (size_t i = 0; i < categories.size(); ++i)
        out << lexPhone << "\t" << categories[i] << "\t" << counts[i] << "\t" << percents[i] << "\n";
    out << lexPhone << "\tother\t" << other << "\t" << roundPercent(other, total) << "\n";
    out << lexPhone << "\ttotal\t" << total << "\t100\n";
    return out.str();
}

std::vector<ProbeCase> loadProbes(const std::string& path) {
    std::vector<ProbeCase> out;
    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 5)
            throw ParseError(where + ": want name<TAB>sentence<TAB>wordIdx<TAB>phoneIdx<TAB>expected");
        ProbeCase p;
        p.name = f[0];
        p.sentence = f[1];
        p.wordIdx = std::stoul(f[2]);
        p.phoneIdx = std::stoul(f[3]);
        p.expectedLabel = f[4];
        out.push_back(std::move(p));
    }
    return out;
}

Utterance buildProbeUtterance(const std::string& sentence, const Lexicon& lex,
                              const std::set<std::string>& functionWords) {
    PromptSentence prompt = parsePromptLine(sentence);
    if (prompt.words.empty())
        throw ParseError("empty probe sentence");
    return buildAnnotatedUtterance(prompt, lex, functionWords, "probe");
}

ProbeReport phenomenaProbe(const PostlexModel& model, const std::vector<ProbeCase>& probes,
                           const Lexicon& lex, const std::set<std::string>& functionWords,
                           const PhoneInventory& inv) {
    ProbeReport report;
    for (const auto& probe : probes) {
        Utterance utt = buildProbeUtterance(probe.sentence, lex, functionWords);
        if (probe.wordIdx >= utt.words.size() ||
            probe.phoneIdx >= utt.words[probe.wordIdx].lexicalPron.size())
            throw IndexOutOfRangeError("probe '" + probe.name + "' targets a missing slot");
        auto labels = predictChunkLabels(model, utt, probe.wordIdx, inv);
        ProbeResult r;
        r.probe = probe;
        r.predictedLabel = labels[probe.phoneIdx];
        r.pass = (r.predictedLabel == probe.expectedLabel);
        if (r.pass) ++report.passed;
        report.results.push_back(std::move(r));
    }
    return report;
}

std::string ProbeReport::renderText() const {
    std::ostringstream out;
    size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.probe.name.size());
    for (const auto& r : results) {
        out << (r.pass ? "pass " : "FAIL ") << r.probe.name
            << std::string(width - r.probe.name.size() + 2, ' ') << "expected "
            << r.probe.expectedLabel << ", predicted " << r.predictedLabel << "  ("
            << r.probe.sentence << ")\n";
    }
    out << passed << "/" << results.size() << " probes passed\n";
    return out.str();
}

ChunkAccuracy chunkAccuracy(const PostlexModel& model, const std::vector<const Utterance*>& utts,
                            const PhoneInventory& inv, const AllophoneCosts& costs) {
    ChunkAccuracy acc;
    for (const Utterance* utt : utts) {
        for (size_t w = 0; w < utt->words.size(); ++w) {
            std::vector<TokenChunk> gold;
            try {
                gold = goldChunks(utt->words[w], inv, costs);
            } catch (const OverfullChunkError&) {
                continue;
            }
            auto predicted = predictChunkLabels(model, *utt, w, inv);
            for (size_t s = 0; s < gold.size(); ++s) {
                ++acc.total;
                if (predicted[s] == chunkLabel(inv, gold[s])) ++acc.correct;
            }
        }
    }
    return acc;
}

} // namespace pronmod
