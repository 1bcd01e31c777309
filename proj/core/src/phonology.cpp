#include "pronmod/phonology.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pronmod/io.hpp"

namespace pronmod {

int FeatureVector::count() const {
    return std::popcount(bits_);
}

double FeatureVector::overlapFraction(FeatureVector o) const {
    uint64_t u = bits_ | o.bits_;
    if (u == 0) return 0.0;
    return static_cast<double>(std::popcount(bits_ & o.bits_)) / static_cast<double>(std::popcount(u));
}

PhoneInventory::PhoneInventory(std::vector<std::string> featureNames, std::vector<Phone> phones)
    : featureNames_(std::move(featureNames)), phones_(std::move(phones)) {
    if (featureNames_.size() > 64)
        throw ParseError("inventory declares more than 64 features");
    for (size_t i = 0; i < phones_.size(); ++i) {
        auto [it, inserted] = bySymbol_.emplace(phones_[i].symbol, static_cast<PhoneId>(i));
        if (!inserted)
            throw ParseError("duplicate phone symbol '" + phones_[i].symbol + "'");
    }
}

namespace {

Alphabet parseAlphabet(const std::string& s, const std::string& where) {
    if (s == "lexical") return Alphabet::Lexical;
    if (s == "postlexical") return Alphabet::Postlexical;
    if (s == "both") return Alphabet::Both;
    throw ParseError(where + ": bad alphabet '" + s + "' (want lexical|postlexical|both)");
}

} // namespace

PhoneInventory PhoneInventory::loadFile(const std::string& path) {
    auto lines = io::readTsv(path);
    std::vector<std::string> featureNames;
    std::map<std::string, size_t> featureIdx;
    std::vector<Phone> phones;

    for (const auto& line : lines) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 3)
            throw ParseError(where + ": want 3 tab-separated fields, got " + std::to_string(f.size()));
        Phone p;
        p.symbol = f[0];
        p.alphabet = parseAlphabet(f[1], where);
        for (const auto& name : io::splitChar(f[2], ',')) {
            if (name.empty()) continue;
            auto it = featureIdx.find(name);
            size_t idx;
            if (it == featureIdx.end()) {
                idx = featureNames.size();
                if (idx >= 64) throw ParseError(where + ": more than 64 distinct features");
                featureNames.push_back(name);
                featureIdx.emplace(name, idx);
            } else {
                idx = it->second;
            }
            p.features.set(idx);
        }
        phones.push_back(std::move(p));
    }
    if (phones.empty())
        throw ParseError(path + ": empty inventory");
    return PhoneInventory(std::move(featureNames), std::move(phones));
}

bool PhoneInventory::contains(const std::string& symbol) const {
    return bySymbol_.count(symbol) != 0;
}

PhoneId PhoneInventory::id(const std::string& symbol) const {
    auto it = bySymbol_.find(symbol);
    if (it == bySymbol_.end())
        throw UnknownSymbolError("unknown phone symbol '" + symbol + "'");
    return it->second;
}

std::optional<PhoneId> PhoneInventory::tryId(const std::string& symbol) const {
    auto it = bySymbol_.find(symbol);
    if (it == bySymbol_.end()) return std::nullopt;
    return it->second;
}

std::optional<size_t> PhoneInventory::featureIndex(const std::string& name) const {
    for (size_t i = 0; i < featureNames_.size(); ++i)
        if (featureNames_[i] == name) return i;
    return std::nullopt;
}

PhoneToken PhoneInventory::parseToken(const std::string& token) const {
    if (token.empty())
        throw UnknownSymbolError("empty phone token");
    std::string base = token;
    int8_t stress = -1;
    char last = token.back();
    if (last == '0' || last == '1' || last == '2') {
        stress = static_cast<int8_t>(last - '0');
        base = token.substr(0, token.size() - 1);
    }
    auto id = tryId(base);
    if (!id) {
        // A bare digit or a symbol we don't know either way.
        id = tryId(token);
        if (!id)
            throw UnknownSymbolError("unknown phone symbol '" + token + "'");
        return PhoneToken{*id, -1};
    }
    return PhoneToken{*id, stress};
}

std::vector<PhoneToken> PhoneInventory::parseString(const std::string& text) const {
    std::vector<PhoneToken> out;
    std::istringstream ss(text);
    std::string tok;
    size_t pos = 0;
    while (ss >> tok) {
        ++pos;
        try {
            out.push_back(parseToken(tok));
        } catch (const UnknownSymbolError& e) {
            throw UnknownSymbolError(std::string(e.what()) + " at token " + std::to_string(pos));
        }
    }
    return out;
}

std::string PhoneInventory::tokenText(const PhoneToken& t) const {
    std::string s = symbol(t.id);
    if (t.stress >= 0) s += static_cast<char>('0' + t.stress);
    return s;
}

std::string PhoneInventory::render(const std::vector<PhoneToken>& seq) const {
    std::string out;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ' ';
        out += tokenText(seq[i]);
    }
    return out;
}

LetterModelSet LetterModelSet::loadFile(const std::string& path, const PhoneInventory& inv) {
    LetterModelSet set;
    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 2)
            throw ParseError(where + ": want 2 tab-separated fields");
        if (f[0].size() != 1)
            throw ParseError(where + ": letter field must be a single character");
        LetterModel lm;
        lm.letter = f[0][0];
        for (const auto& sym : io::splitChar(f[1], ',')) {
            if (sym.empty()) continue;
            lm.candidatePhones.push_back(inv.id(sym));
        }
        if (lm.candidatePhones.empty())
            throw ParseError(where + ": letter '" + f[0] + "' has no candidate phones");
        if (set.byLetter_.count(lm.letter))
            throw ParseError(where + ": duplicate letter '" + f[0] + "'");
        set.byLetter_.emplace(lm.letter, set.models_.size());
        set.models_.push_back(std::move(lm));
    }
    return set;
}

bool LetterModelSet::supports(char c) const {
    return byLetter_.count(c) != 0;
}

const LetterModel& LetterModelSet::model(char c) const {
    auto it = byLetter_.find(c);
    if (it == byLetter_.end())
        throw UnknownSymbolError(std::string("no letter model for '") + c + "'");
    return models_[it->second];
}

FeatureVector LetterModelSet::letterFeatures(char c, const PhoneInventory& inv) const {
    return pronmod::letterFeatures(model(c), inv);
}

FeatureVector phoneFeatures(const PhoneInventory& inv, const std::string& symbol) {
    return inv.features(symbol);
}

FeatureVector letterFeatures(const LetterModel& lm, const PhoneInventory& inv) {
    FeatureVector fv;
    for (PhoneId p : lm.candidatePhones)
        fv = fv.unionWith(inv.features(p));
    return fv;
}

std::vector<PhoneToken> parsePhoneString(const PhoneInventory& inv, const std::string& text) {
    return inv.parseString(text);
}

} // namespace pronmod
