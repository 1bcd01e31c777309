#include "pronmod/lexicon.hpp"

#include <algorithm>
#include <cctype>

#include "pronmod/io.hpp"

namespace pronmod {

char lexSourceLetter(LexSource s) {
    switch (s) {
    case LexSource::A: return 'A';
    case LexSource::B: return 'B';
    case LexSource::C: return 'C';
    case LexSource::Synthetic: return 'S';
    }
    return '?';
}

LexSource lexSourceFromLetter(char c) {
    switch (c) {
    case 'A': return LexSource::A;
    case 'B': return LexSource::B;
    case 'C': return LexSource::C;
    case 'S': return LexSource::Synthetic;
    }
    throw ParseError(std::string("bad lexicon source '") + c + "'");
}

bool globMatch(const std::string& pattern, const std::string& text) {
    // Iterative glob with '*' only; enough for orthography patterns.
    size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

namespace {

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> baseSymbols(const std::vector<PhoneToken>& pron, const PhoneInventory& inv) {
    std::vector<std::string> out;
    out.reserve(pron.size());
    for (const auto& t : pron) out.push_back(inv.symbol(t.id));
    return out;
}

bool containsSubsequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return needle.empty();
    for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (hay[i + j] != needle[j]) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

void validateLexicalAlphabet(const std::vector<PhoneToken>& pron, const PhoneInventory& inv,
                             const std::string& where) {
    for (const auto& t : pron) {
        const Phone& p = inv.phone(t.id);
        if (p.alphabet == Alphabet::Postlexical)
            throw ParseError(where + ": postlexical-only symbol '" + p.symbol +
                             "' in a lexical pronunciation");
    }
}

struct RawEntry {
    LexEntry entry;
    size_t filePos = 0; // sequence number within its source file
};

std::vector<RawEntry> parseSource(const std::string& path, LexSource defaultSource,
                                  const PhoneInventory& inv) {
    std::vector<RawEntry> out;
    size_t pos = 0;
    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 3 && f.size() != 4)
            throw ParseError(where + ": want orth<TAB>tag<TAB>pron[<TAB>source]");
        LexEntry e;
        e.orthography = lowercase(f[0]);
        if (e.orthography.empty())
            throw ParseError(where + ": empty orthography");
        e.tag = (f[1] == "-") ? "" : f[1];
        try {
            e.pronunciation = inv.parseString(f[2]);
        } catch (const UnknownSymbolError& ex) {
            throw ParseError(where + ": " + ex.what());
        }
        if (e.pronunciation.empty())
            throw ParseError(where + ": empty pronunciation");
        validateLexicalAlphabet(e.pronunciation, inv, where);
        if (f.size() == 4) {
            if (f[3].size() != 1) throw ParseError(where + ": bad source field '" + f[3] + "'");
            e.source = lexSourceFromLetter(f[3][0]);
        } else {
            e.source = defaultSource;
        }
        out.push_back(RawEntry{std::move(e), pos++});
    }
    return out;
}

} // namespace

MergePolicy MergePolicy::loadFile(const std::string& path) {
    MergePolicy policy;
    std::string text = io::readFile(path);
    size_t lineNo = 0;
    for (const auto& rawLine : io::splitChar(text, '\n')) {
        ++lineNo;
        std::string line = rawLine;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string where = path + ":" + std::to_string(lineNo);

        std::vector<std::string> words;
        for (const auto& w : io::splitChar(line, ' '))
            if (!w.empty()) words.push_back(w);

        if (words.size() == 2 && words[0] == "DISTINCTIONS") {
            policy.preferDistinctions = (words[1] == "on");
            continue;
        }
        // PREFER a... OVER b... [WHEN glob]
        if (words.empty() || words[0] != "PREFER")
            throw ParseError(where + ": want PREFER <pattern> OVER <pattern> [WHEN <orth-pattern>]");
        VariantRule rule;
        size_t i = 1;
        while (i < words.size() && words[i] != "OVER") rule.prefer.push_back(words[i++]);
        if (i >= words.size() || rule.prefer.empty())
            throw ParseError(where + ": missing OVER");
        ++i;
        while (i < words.size() && words[i] != "WHEN") rule.over.push_back(words[i++]);
        if (rule.over.empty())
            throw ParseError(where + ": empty OVER pattern");
        if (i < words.size()) {
            if (words[i] != "WHEN" || i + 2 != words.size())
                throw ParseError(where + ": malformed WHEN clause");
            rule.orthGlob = words[i + 1];
        }
        policy.dialectRules.push_back(std::move(rule));
    }
    return policy;
}

const std::vector<LexEntry>& Lexicon::entriesFor(const std::string& orthography) const {
    static const std::vector<LexEntry> kEmpty;
    auto it = entries_.find(orthography);
    return it == entries_.end() ? kEmpty : it->second;
}

std::vector<LexEntry> Lexicon::lookup(const std::string& orthography,
                                      const std::optional<std::string>& tag) const {
    if (orthography.empty())
        throw NotFoundError("empty orthography");
    auto it = entries_.find(lowercase(orthography));
    if (it == entries_.end())
        throw NotFoundError("'" + orthography + "' is not in the lexicon");
    if (!tag) return it->second;
    std::vector<LexEntry> out;
    for (const auto& e : it->second)
        if (e.tag == *tag) out.push_back(e);
    if (out.empty())
        throw NotFoundError("'" + orthography + "' has no entry tagged '" + *tag + "'");
    return out;
}

size_t Lexicon::entryCount() const {
    size_t n = 0;
    for (const auto& [orth, list] : entries_) n += list.size();
    return n;
}

void Lexicon::insert(LexEntry entry) {
    entries_[entry.orthography].push_back(std::move(entry));
}

Lexicon mergeLexica(const std::vector<std::string>& sourcePaths, const MergePolicy& policy,
                    const PhoneInventory& inv) {
    struct Variant {
        LexEntry entry;
        size_t filePos;
        std::vector<std::string> bases;
    };
    // (orth, tag) -> variants
    std::map<std::pair<std::string, std::string>, std::vector<Variant>> groups;

    for (size_t s = 0; s < sourcePaths.size(); ++s) {
        LexSource src = s < 3 ? static_cast<LexSource>(s) : LexSource::Synthetic;
        for (auto& raw : parseSource(sourcePaths[s], src, inv)) {
            Variant v{std::move(raw.entry), raw.filePos, {}};
            v.bases = baseSymbols(v.entry.pronunciation, inv);
            auto key = std::make_pair(v.entry.orthography, v.entry.tag);
            auto& vec = groups[key];
            // Identical pronunciations collapse to the earliest source.
            bool dup = false;
            for (auto& existing : vec) {
                if (existing.entry.pronunciation == v.entry.pronunciation) {
                    dup = true;
                    if (static_cast<int>(v.entry.source) < static_cast<int>(existing.entry.source)) {
                        existing.entry.source = v.entry.source;
                        existing.filePos = v.filePos;
                    }
                    break;
                }
            }
            if (!dup) vec.push_back(std::move(v));
        }
    }

    Lexicon lex;
    for (auto& [key, variants] : groups) {
        if (policy.preferDistinctions) {
            for (const auto& rule : policy.dialectRules) {
                if (!rule.orthGlob.empty() && !globMatch(rule.orthGlob, key.first)) continue;
                std::vector<bool> hasPrefer(variants.size()), hasOver(variants.size());
                size_t nPrefer = 0, nOver = 0, nBoth = 0;
                for (size_t i = 0; i < variants.size(); ++i) {
                    hasPrefer[i] = containsSubsequence(variants[i].bases, rule.prefer);
                    hasOver[i] = containsSubsequence(variants[i].bases, rule.over);
                    nPrefer += hasPrefer[i];
                    nOver += hasOver[i];
                    nBoth += hasPrefer[i] && hasOver[i];
                }
                if (nPrefer == 0 || nOver == 0) continue;
                if (nBoth == variants.size())
                    throw ConflictError("policy rule matches both sides of every variant of '" +
                                        key.first + "'");
                std::vector<Variant> kept;
                for (size_t i = 0; i < variants.size(); ++i)
                    if (hasPrefer[i] || !hasOver[i]) kept.push_back(std::move(variants[i]));
                variants = std::move(kept);
            }
        }
        std::stable_sort(variants.begin(), variants.end(), [](const Variant& a, const Variant& b) {
            if (a.entry.source != b.entry.source)
                return static_cast<int>(a.entry.source) < static_cast<int>(b.entry.source);
            return a.filePos < b.filePos;
        });
        for (size_t i = 0; i < variants.size(); ++i) {
            variants[i].entry.variantRank = static_cast<int>(i);
            lex.insert(std::move(variants[i].entry));
        }
    }
    return lex;
}

Lexicon loadLexicon(const std::string& path, const PhoneInventory& inv) {
    Lexicon lex;
    std::map<std::pair<std::string, std::string>, int> rank;
    for (auto& raw : parseSource(path, LexSource::Synthetic, inv)) {
        raw.entry.variantRank = rank[{raw.entry.orthography, raw.entry.tag}]++;
        lex.insert(std::move(raw.entry));
    }
    return lex;
}

void saveLexicon(const Lexicon& lex, const std::string& path, const PhoneInventory& inv) {
    std::string out;
    for (const auto& [orth, list] : lex.all()) {
        for (const auto& e : list) {
            out += orth;
            out += '\t';
            out += e.tag.empty() ? "-" : e.tag;
            out += '\t';
            out += inv.render(e.pronunciation);
            out += '\t';
            out += lexSourceLetter(e.source);
            out += '\n';
        }
    }
    io::writeFile(path, out);
}

} // namespace pronmod
