#include "pronmod/alignment.hpp"

#include <cmath>
#include <limits>

#include "pronmod/io.hpp"

namespace pronmod {

namespace {

enum Move : uint8_t { None, Sub, Del, Ins };

std::string stripStress(const std::string& tok) {
    if (!tok.empty() && (tok.back() == '0' || tok.back() == '1' || tok.back() == '2') && tok.size() > 1)
        return tok.substr(0, tok.size() - 1);
    return tok;
}

} // namespace

Alignment alignPositions(size_t srcLen, size_t dstLen, const PositionCosts& costs) {
    const size_t m = srcLen, n = dstLen;
    std::vector<double> dp((m + 1) * (n + 1), 0.0);
    std::vector<uint8_t> bt((m + 1) * (n + 1), None);
    auto at = [&](size_t i, size_t j) -> size_t { return i * (n + 1) + j; };

    for (size_t i = 1; i <= m; ++i) {
        dp[at(i, 0)] = dp[at(i - 1, 0)] + costs.deletion(i - 1);
        bt[at(i, 0)] = Del;
    }
    for (size_t j = 1; j <= n; ++j) {
        dp[at(0, j)] = dp[at(0, j - 1)] + costs.insertion(j - 1);
        bt[at(0, j)] = Ins;
    }
    for (size_t i = 1; i <= m; ++i) {
        for (size_t j = 1; j <= n; ++j) {
            // Tie order: substitution beats deletion beats insertion.
            double best = dp[at(i - 1, j - 1)] + costs.substitution(i - 1, j - 1);
            uint8_t move = Sub;
            double del = dp[at(i - 1, j)] + costs.deletion(i - 1);
            if (del < best) {
                best = del;
                move = Del;
            }
            double ins = dp[at(i, j - 1)] + costs.insertion(j - 1);
            if (ins < best) {
                best = ins;
                move = Ins;
            }
            dp[at(i, j)] = best;
            bt[at(i, j)] = move;
        }
    }

    Alignment out;
    out.totalCost = dp[at(m, n)];
    size_t i = m, j = n;
    while (i > 0 || j > 0) {
        switch (bt[at(i, j)]) {
        case Sub:
            out.steps.push_back(AlignStep{i - 1, j - 1});
            --i;
            --j;
            break;
        case Del:
            out.steps.push_back(AlignStep{i - 1, std::nullopt});
            --i;
            break;
        case Ins:
            out.steps.push_back(AlignStep{std::nullopt, j - 1});
            --j;
            break;
        default:
            throw Error("Internal", "corrupt backtrack table");
        }
    }
    std::reverse(out.steps.begin(), out.steps.end());
    return out;
}

CostModel CostModel::identityZero() {
    CostModel m;
    m.substitution = [](const std::string& a, const std::string& b) { return a == b ? 0.0 : 1.0; };
    m.gapSrc = [](const std::string&) { return 1.0; };
    m.gapDst = [](const std::string&) { return 1.0; };
    return m;
}

Alignment align(const std::vector<std::string>& src, const std::vector<std::string>& dst,
                const CostModel& model) {
    auto check = [](double c, const std::string& sym) {
        if (!std::isfinite(c) || c < 0.0)
            throw SymbolOutsideModelError("cost model cannot price symbol '" + sym + "'");
        return c;
    };
    PositionCosts pc;
    pc.substitution = [&](size_t i, size_t j) {
        return check(model.substitution(src[i], dst[j]), src[i] + "/" + dst[j]);
    };
    pc.deletion = [&](size_t i) { return check(model.gapSrc(src[i]), src[i]); };
    pc.insertion = [&](size_t j) { return check(model.gapDst(dst[j]), dst[j]); };
    return alignPositions(src.size(), dst.size(), pc);
}

std::vector<Chunk> chunkAlignment(const Alignment& a) {
    std::vector<Chunk> chunks;
    std::vector<size_t> leading; // insertions seen before the first src chunk
    long lastSrc = -1, lastDst = -1;

    for (const auto& step : a.steps) {
        if (step.src) {
            if (static_cast<long>(*step.src) <= lastSrc)
                throw Error("Internal", "alignment src indices not strictly increasing");
            lastSrc = static_cast<long>(*step.src);
        }
        if (step.dst) {
            if (static_cast<long>(*step.dst) <= lastDst)
                throw Error("Internal", "alignment dst indices not strictly increasing");
            lastDst = static_cast<long>(*step.dst);
        }
        if (step.src) {
            Chunk c;
            c.srcIndex = *step.src;
            if (!leading.empty()) {
                c.dstIndices = leading;
                leading.clear();
            }
            if (step.dst) c.dstIndices.push_back(*step.dst);
            chunks.push_back(std::move(c));
        } else {
            if (chunks.empty())
                leading.push_back(*step.dst);
            else
                chunks.back().dstIndices.push_back(*step.dst);
        }
    }
    if (!leading.empty())
        throw OverfullChunkError("insertions with no src symbol to attach to");
    for (const auto& c : chunks) {
        if (c.dstIndices.size() > 2)
            throw OverfullChunkError("src index " + std::to_string(c.srcIndex) + " owns " +
                                     std::to_string(c.dstIndices.size()) + " dst symbols");
    }
    return chunks;
}

AllophoneCosts AllophoneCosts::loadFile(const std::string& path, const PhoneInventory& inv) {
    AllophoneCosts t;
    for (const auto& line : io::readTsv(path)) {
        const auto& f = line.fields;
        std::string where = path + ":" + std::to_string(line.number);
        if (f.size() != 3)
            throw ParseError(where + ": want lexSymbol<TAB>postlexSymbol<TAB>cost");
        double cost;
        try {
            cost = std::stod(f[2]);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad cost '" + f[2] + "'");
        }
        if (!(cost >= 0.0) || !std::isfinite(cost))
            throw ParseError(where + ": cost must be finite and non-negative");
        if (f[0] == "-" && f[1] == "-")
            throw ParseError(where + ": at least one side must be a symbol");
        if (f[0] == "-") {
            t.ins_[inv.id(f[1])] = cost;
        } else if (f[1] == "-") {
            t.del_[inv.id(f[0])] = cost;
        } else {
            t.sub_[{inv.id(f[0]), inv.id(f[1])}] = cost;
        }
    }
    return t;
}

std::optional<double> AllophoneCosts::substitution(PhoneId lex, PhoneId post) const {
    auto it = sub_.find({lex, post});
    if (it == sub_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> AllophoneCosts::deletion(PhoneId lex) const {
    auto it = del_.find(lex);
    if (it == del_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> AllophoneCosts::insertion(PhoneId post) const {
    auto it = ins_.find(post);
    if (it == ins_.end()) return std::nullopt;
    return it->second;
}

double letterPhoneCost(char letter, const std::string& phone, const LetterModelSet& letters,
                       const PhoneInventory& inv) {
    const LetterModel& lm = letters.model(letter);
    std::string base = stripStress(phone);
    PhoneId pid = inv.id(base);
    for (PhoneId cand : lm.candidatePhones)
        if (cand == pid) return 0.0;
    const double k = static_cast<double>(inv.featureCount());
    double overlap = static_cast<double>(letterFeatures(lm, inv).overlapCount(inv.features(pid)));
    return (k - overlap) / k;
}

double lexPostlexCost(const std::string& lexPhone, const std::string& postlexPhone,
                      const AllophoneCosts& table, const PhoneInventory& inv) {
    std::string a = stripStress(lexPhone), b = stripStress(postlexPhone);
    if (a == b) return 0.0;
    PhoneId la = inv.id(a), pb = inv.id(b);
    if (auto c = table.substitution(la, pb)) return *c;
    return 1.0 - inv.features(la).overlapFraction(inv.features(pb));
}

CostModel makeLetterPhoneModel(const LetterModelSet& letters, const PhoneInventory& inv) {
    CostModel m;
    m.substitution = [&letters, &inv](const std::string& l, const std::string& p) {
        if (l.size() != 1 || !letters.supports(l[0]))
            throw SymbolOutsideModelError("no letter model for '" + l + "'");
        return letterPhoneCost(l[0], p, letters, inv);
    };
    m.gapSrc = [](const std::string&) { return 1.0; }; // silent letter
    m.gapDst = [](const std::string&) { return 1.0; }; // phone with no letter
    return m;
}

CostModel makeLexPostlexModel(const AllophoneCosts& table, const PhoneInventory& inv) {
    CostModel m;
    m.substitution = [&table, &inv](const std::string& a, const std::string& b) {
        return lexPostlexCost(a, b, table, inv);
    };
    m.gapSrc = [&table, &inv](const std::string& a) {
        if (auto c = table.deletion(inv.id(stripStress(a)))) return *c;
        return 1.0;
    };
    m.gapDst = [&table, &inv](const std::string& b) {
        if (auto c = table.insertion(inv.id(stripStress(b)))) return *c;
        return 1.0;
    };
    return m;
}

} // namespace pronmod
