#include "pronmod/rules.hpp"

#include <random>
#include <sstream>

#include "pronmod/io.hpp"

namespace pronmod {

std::string chunkLabel(const PhoneInventory& inv, const TokenChunk& chunk) {
    if (chunk.empty()) return "-";
    std::string out;
    for (size_t i = 0; i < chunk.size(); ++i) {
        if (i) out += '+';
        out += inv.tokenText(chunk[i]);
    }
    return out;
}

TokenChunk parseChunkLabel(const PhoneInventory& inv, const std::string& label) {
    if (label == "-") return {};
    TokenChunk chunk;
    for (const auto& tok : io::splitChar(label, '+')) {
        if (tok.empty())
            throw ParseError("bad chunk label '" + label + "'");
        chunk.push_back(inv.parseToken(tok));
    }
    return chunk;
}

namespace {

struct StreamTok {
    enum class Kind : uint8_t { Edge, Boundary, Phone };
    Kind kind;
    size_t word = 0;
    size_t slot = 0;
    PhoneToken tok;
};

std::vector<StreamTok> buildStream(const std::vector<OracleWord>& words) {
    std::vector<StreamTok> s;
    s.push_back({StreamTok::Kind::Edge});
    for (size_t w = 0; w < words.size(); ++w) {
        if (w) s.push_back({StreamTok::Kind::Boundary});
        for (size_t i = 0; i < words[w].lexical.size(); ++i)
            s.push_back({StreamTok::Kind::Phone, w, i, words[w].lexical[i]});
    }
    s.push_back({StreamTok::Kind::Edge});
    return s;
}

bool wordHasStress(const OracleWord& w) {
    for (const auto& t : w.lexical)
        if (t.stress == 1 || t.stress == 2) return true;
    return false;
}

} // namespace

RuleOracle RuleOracle::loadFile(const std::string& path, const PhoneInventory& inv) {
    RuleOracle oracle;
    oracle.inv_ = &inv;

    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 5)
            throw ParseError(where + ": want NAME<TAB>pattern<TAB>context<TAB>rewrite<TAB>probability");

        Rule rule;
        rule.name = f[0];

        // pattern
        bool inGroup = false, sawGroup = false;
        size_t targets = 0;
        std::istringstream ps(f[1]);
        std::string item;
        while (ps >> item) {
            if (item == "(") {
                if (sawGroup || inGroup) throw ParseError(where + ": multiple target groups");
                inGroup = true;
                sawGroup = true;
                continue;
            }
            if (item == ")") {
                if (!inGroup) throw ParseError(where + ": stray ')'");
                inGroup = false;
                continue;
            }
            PatternItem pi;
            if (item == "|") {
                pi.kind = PatternItem::Kind::WordBoundary;
            } else if (item == "#") {
                pi.kind = PatternItem::Kind::UttEdge;
            } else {
                pi.kind = PatternItem::Kind::Phone;
                std::string body = item;
                auto colon = body.find(':');
                if (colon != std::string::npos) {
                    std::string stress = body.substr(colon + 1);
                    body = body.substr(0, colon);
                    if (stress.empty()) throw ParseError(where + ": empty stress constraint");
                    uint8_t mask = 0;
                    for (char c : stress) {
                        if (c < '0' || c > '2') throw ParseError(where + ": bad stress digit in '" + item + "'");
                        mask |= static_cast<uint8_t>(1u << (c - '0'));
                    }
                    pi.stressSet = mask;
                }
                if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
                    for (const auto& sym : io::splitChar(body.substr(1, body.size() - 2), ','))
                        pi.symbols.push_back(inv.id(sym));
                    if (pi.symbols.empty()) throw ParseError(where + ": empty symbol set");
                } else if (!body.empty() && body[0] == '@') {
                    auto bit = inv.featureIndex(body.substr(1));
                    if (!bit) throw ParseError(where + ": unknown feature '" + body.substr(1) + "'");
                    pi.featureBit = *bit;
                } else {
                    pi.symbols.push_back(inv.id(body));
                }
            }
            if (inGroup) {
                if (pi.kind != PatternItem::Kind::Phone)
                    throw ParseError(where + ": target group may contain only phone items");
                pi.target = true;
                ++targets;
            }
            rule.items.push_back(std::move(pi));
        }
        if (inGroup) throw ParseError(where + ": unterminated target group");
        if (targets == 0) throw ParseError(where + ": no target slots");

        // context
        if (f[2] != "-") {
            for (const auto& c : io::splitChar(f[2], ',')) {
                if (c == "function") rule.requireFunction = true;
                else if (c == "content") rule.requireContent = true;
                else if (c == "nostress") rule.requireNoStress = true;
                else throw ParseError(where + ": unknown context predicate '" + c + "'");
            }
        }

        // rewrite: one spec per target slot
        for (const auto& spec : io::splitChar(f[3], '/')) {
            std::vector<std::string> symbols;
            std::istringstream rs(spec);
            std::string tok;
            while (rs >> tok) {
                if (tok == "-") continue; // deletion marker: empty chunk
                if (tok.size() >= 2 && tok[0] == '=') {
                    size_t k = std::stoul(tok.substr(1));
                    if (k < 1 || k > targets)
                        throw ParseError(where + ": rewrite reference '" + tok + "' out of range");
                } else {
                    inv.id(tok); // validate symbol now
                }
                symbols.push_back(tok);
            }
            if (symbols.size() > 2)
                throw ParseError(where + ": chunk rewrite longer than 2 symbols");
            rule.rewrites.push_back(std::move(symbols));
        }
        if (rule.rewrites.size() != targets)
            throw ParseError(where + ": " + std::to_string(targets) + " target slots but " +
                             std::to_string(rule.rewrites.size()) + " rewrite specs");

        try {
            rule.probability = std::stod(f[4]);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad probability '" + f[4] + "'");
        }
        if (rule.probability < 0.0 || rule.probability > 1.0)
            throw ParseError(where + ": probability outside [0,1]");

        oracle.rules_.push_back(std::move(rule));
    }
    return oracle;
}

size_t RuleOracle::setEnabled(const std::string& name, bool enabled) {
    size_t n = 0;
    for (auto& r : rules_) {
        if (r.name == name) {
            r.enabled = enabled;
            ++n;
        }
    }
    return n;
}

void RuleOracle::disableAll() {
    for (auto& r : rules_) r.enabled = false;
}

std::vector<std::vector<SlotOutcome>> RuleOracle::apply(const std::vector<OracleWord>& words,
                                                        uint64_t seed) const {
    if (!inv_)
        throw Error("Internal", "rule oracle has no inventory");
    const PhoneInventory& inv = *inv_;

    std::vector<std::vector<SlotOutcome>> out(words.size());
    std::vector<std::vector<bool>> claimed(words.size());
    for (size_t w = 0; w < words.size(); ++w) {
        out[w].resize(words[w].lexical.size());
        claimed[w].assign(words[w].lexical.size(), false);
    }

    auto stream = buildStream(words);
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbull);

    for (const Rule& rule : rules_) {
        if (!rule.enabled) continue;
        for (size_t start = 0; start < stream.size(); ++start) {
            size_t c = start;
            std::vector<std::pair<size_t, size_t>> targets; // (word, slot)
            bool ok = true;
            for (const PatternItem& pi : rule.items) {
                if (c >= stream.size()) {
                    ok = false;
                    break;
                }
                const StreamTok& st = stream[c];
                switch (pi.kind) {
                case PatternItem::Kind::UttEdge:
                    ok = st.kind == StreamTok::Kind::Edge;
                    break;
                case PatternItem::Kind::WordBoundary:
                    ok = st.kind != StreamTok::Kind::Phone;
                    break;
                case PatternItem::Kind::Phone: {
                    ok = st.kind == StreamTok::Kind::Phone;
                    if (!ok) break;
                    if (!pi.symbols.empty()) {
                        ok = false;
                        for (PhoneId s : pi.symbols)
                            if (s == st.tok.id) {
                                ok = true;
                                break;
                            }
                    } else if (pi.featureBit) {
                        ok = inv.features(st.tok.id).test(*pi.featureBit);
                    }
                    if (ok && pi.stressSet) {
                        ok = st.tok.stress >= 0 &&
                             ((*pi.stressSet >> st.tok.stress) & 1u) != 0;
                    }
                    break;
                }
                }
                if (!ok) break;
                if (pi.target) targets.emplace_back(st.word, st.slot);
                ++c;
            }
            if (!ok) continue;

            const auto& firstWord = words[targets.front().first];
            if (rule.requireFunction && !firstWord.functionWord) continue;
            if (rule.requireContent && firstWord.functionWord) continue;
            if (rule.requireNoStress && wordHasStress(firstWord)) continue;

            if (rule.probability < 1.0) {
                double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                if (u >= rule.probability) continue;
            }

            bool anyClaimed = false;
            for (auto [w, s] : targets)
                if (claimed[w][s]) anyClaimed = true;
            if (anyClaimed) continue;

            for (size_t k = 0; k < targets.size(); ++k) {
                auto [w, s] = targets[k];
                TokenChunk chunk;
                for (const auto& tok : rule.rewrites[k]) {
                    if (tok[0] == '=') {
                        size_t ref = std::stoul(tok.substr(1)) - 1;
                        auto [rw, rs] = targets[ref];
                        chunk.push_back(PhoneToken{words[rw].lexical[rs].id, -1});
                    } else {
                        chunk.push_back(PhoneToken{inv.id(tok), -1});
                    }
                }
                claimed[w][s] = true;
                out[w][s] = SlotOutcome{std::move(chunk), rule.name};
            }
        }
    }

    // Unclaimed slots realize unchanged (stress annotation dropped).
    for (size_t w = 0; w < words.size(); ++w)
        for (size_t s = 0; s < words[w].lexical.size(); ++s)
            if (!claimed[w][s])
                out[w][s] = SlotOutcome{TokenChunk{PhoneToken{words[w].lexical[s].id, -1}}, ""};
    return out;
}

std::vector<std::vector<PhoneToken>> RuleOracle::realize(const std::vector<OracleWord>& words,
                                                         uint64_t seed) const {
    auto outcomes = apply(words, seed);
    std::vector<std::vector<PhoneToken>> phones(words.size());
    for (size_t w = 0; w < words.size(); ++w)
        for (const auto& slot : outcomes[w])
            phones[w].insert(phones[w].end(), slot.chunk.begin(), slot.chunk.end());
    return phones;
}

} // namespace pronmod
