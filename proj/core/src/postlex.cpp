#include "pronmod/postlex.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "pronmod/io.hpp"

namespace pronmod {

ContextSpec::ContextSpec(const PhoneInventory& inv, size_t window_) {
    if (window_ % 2 == 0 || window_ == 0)
        throw DimensionMismatchError("window must be odd");
    window = window_;
    inventorySize = inv.size();
    featureCount = inv.featureCount();
}

namespace {

bool legalOnset(const std::vector<std::string>& cluster) {
    if (cluster.size() <= 1) return true;
    static const std::set<std::string> pairs = {
        "p l", "p r", "b l", "b r", "t r", "t w", "d r", "d w", "k l", "k r", "k w",
        "g l", "g r", "f l", "f r", "th r", "sh r", "s p", "s t", "s k", "s m",
        "s n", "s l", "s w", "s f", "hh y", "k y", "p y", "b y", "f y", "m y", "v y",
    };
    if (cluster.size() == 2) return pairs.count(cluster[0] + " " + cluster[1]) != 0;
    if (cluster.size() == 3 && cluster[0] == "s")
        return pairs.count(cluster[1] + " " + cluster[2]) != 0;
    return false;
}

} // namespace

SyllableInfo syllabify(const std::vector<PhoneToken>& pron, const PhoneInventory& inv) {
    auto vowelBit = inv.featureIndex("vowel");
    auto syllabicBit = inv.featureIndex("syllabic");
    auto isNucleus = [&](PhoneId id) {
        FeatureVector fv = inv.features(id);
        return (vowelBit && fv.test(*vowelBit)) || (syllabicBit && fv.test(*syllabicBit));
    };

    const size_t n = pron.size();
    SyllableInfo info;
    info.position.assign(n, SyllablePosition::Coda);
    info.stress.assign(n, 0);

    std::vector<size_t> nuclei;
    for (size_t i = 0; i < n; ++i)
        if (isNucleus(pron[i].id)) nuclei.push_back(i);

    if (nuclei.empty()) {
        // No vowel: treat everything as an onset of a degenerate syllable.
        for (size_t i = 0; i < n; ++i) info.position[i] = SyllablePosition::Onset;
        return info;
    }

    // Ownership of consonants: before the first nucleus -> onset; after the
    // last -> coda; between two nuclei the longest legal onset goes right.
    std::vector<size_t> owner(n, 0); // syllable index per phone
    for (size_t k = 0; k < nuclei.size(); ++k) {
        owner[nuclei[k]] = k;
        info.position[nuclei[k]] = SyllablePosition::Nucleus;
    }
    for (size_t i = 0; i < nuclei.front(); ++i) {
        owner[i] = 0;
        info.position[i] = SyllablePosition::Onset;
    }
    for (size_t i = nuclei.back() + 1; i < n; ++i) {
        owner[i] = nuclei.size() - 1;
        info.position[i] = SyllablePosition::Coda;
    }
    for (size_t k = 0; k + 1 < nuclei.size(); ++k) {
        size_t lo = nuclei[k] + 1, hi = nuclei[k + 1]; // consonants in [lo, hi)
        size_t split = lo;                             // [lo,split) coda, [split,hi) onset
        for (size_t cand = lo; cand <= hi; ++cand) {
            std::vector<std::string> cluster;
            for (size_t i = cand; i < hi; ++i) cluster.push_back(inv.symbol(pron[i].id));
            if (legalOnset(cluster)) {
                split = cand;
                break;
            }
        }
        for (size_t i = lo; i < hi; ++i) {
            owner[i] = (i < split) ? k : k + 1;
            info.position[i] = (i < split) ? SyllablePosition::Coda : SyllablePosition::Onset;
        }
    }

    std::vector<int> syllStress(nuclei.size(), 0);
    for (size_t k = 0; k < nuclei.size(); ++k)
        syllStress[k] = std::max<int>(0, pron[nuclei[k]].stress);
    for (size_t i = 0; i < n; ++i) info.stress[i] = syllStress[owner[i]];
    return info;
}

namespace {

// Distance in phones from utt.words[w][s] to the nearest boundary of the
// given set on each side. Utterance edges always count.
std::pair<int, int> boundaryDistances(const Utterance& utt, size_t w, size_t s,
                                      const std::set<size_t>& afterWord) {
    int left = static_cast<int>(s);
    for (size_t j = w; j-- > 0;) {
        if (afterWord.count(j)) break;
        left += static_cast<int>(utt.words[j].lexicalPron.size());
    }
    int right = static_cast<int>(utt.words[w].lexicalPron.size() - 1 - s);
    if (!afterWord.count(w)) {
        for (size_t j = w + 1; j < utt.words.size(); ++j) {
            right += static_cast<int>(utt.words[j].lexicalPron.size());
            if (afterWord.count(j)) break;
        }
    }
    return {left, right};
}

} // namespace

ContextFeatures contextFeatures(const Utterance& utt, size_t wordIdx, size_t phoneIdx,
                                const PhoneInventory& inv, size_t distanceCap) {
    if (wordIdx >= utt.words.size() || phoneIdx >= utt.words[wordIdx].lexicalPron.size())
        throw IndexOutOfRangeError("no phone at word " + std::to_string(wordIdx) + " slot " +
                                   std::to_string(phoneIdx));
    const WordToken& word = utt.words[wordIdx];
    ContextFeatures f;
    int cap = static_cast<int>(distanceCap);
    auto clip = [cap](int v) { return std::min(v, cap); };

    f.distWordLeft = clip(static_cast<int>(phoneIdx));
    f.distWordRight = clip(static_cast<int>(word.lexicalPron.size() - 1 - phoneIdx));
    auto [pl, pr] = boundaryDistances(utt, wordIdx, phoneIdx, utt.phraseBoundaries);
    f.distPhraseLeft = clip(pl);
    f.distPhraseRight = clip(pr);
    auto [cl, cr] = boundaryDistances(utt, wordIdx, phoneIdx, utt.clauseBoundaries);
    f.distClauseLeft = clip(cl);
    f.distClauseRight = clip(cr);
    auto [sl, sr] = boundaryDistances(utt, wordIdx, phoneIdx, utt.sentenceBoundaries);
    f.distSentenceLeft = clip(sl);
    f.distSentenceRight = clip(sr);

    SyllableInfo syll = syllabify(word.lexicalPron, inv);
    f.stress = syll.stress[phoneIdx];
    f.syllablePosition = syll.position[phoneIdx];
    f.wordType = word.wordType;
    f.prominence = word.prominence;
    return f;
}

std::vector<double> encodeContext(const Utterance& utt, size_t wordIdx, size_t phoneIdx,
                                  const ContextSpec& spec, const PhoneInventory& inv) {
    if (spec.inventorySize != inv.size() || spec.featureCount != inv.featureCount())
        throw DimensionMismatchError("context spec does not match the inventory");

    // Flatten the utterance's lexical tier around the center position.
    std::vector<PhoneToken> flat;
    size_t center = 0;
    for (size_t w = 0; w < utt.words.size(); ++w) {
        for (size_t s = 0; s < utt.words[w].lexicalPron.size(); ++s) {
            if (w == wordIdx && s == phoneIdx) center = flat.size();
            flat.push_back(utt.words[w].lexicalPron[s]);
        }
    }
    if (wordIdx >= utt.words.size() || phoneIdx >= utt.words[wordIdx].lexicalPron.size())
        throw IndexOutOfRangeError("no phone at word " + std::to_string(wordIdx) + " slot " +
                                   std::to_string(phoneIdx));

    std::vector<double> x(spec.inputWidth(), 0.0);
    const int half = static_cast<int>(spec.window) / 2;
    for (int k = -half; k <= half; ++k) {
        size_t base = static_cast<size_t>(k + half) * spec.slotWidth();
        long pos = static_cast<long>(center) + k;
        if (pos < 0 || pos >= static_cast<long>(flat.size())) {
            x[base + spec.inventorySize] = 1.0; // sentinel slot
            continue;
        }
        const PhoneToken& t = flat[static_cast<size_t>(pos)];
        x[base + t.id] = 1.0;
        FeatureVector fv = inv.features(t.id);
        for (size_t b = 0; b < spec.featureCount; ++b)
            if (fv.test(b)) x[base + spec.inventorySize + 1 + b] = 1.0;
        size_t stressSlot = (t.stress >= 0 && t.stress <= 2) ? static_cast<size_t>(t.stress + 1) : 0;
        x[base + spec.inventorySize + 1 + spec.featureCount + stressSlot] = 1.0;
    }

    ContextFeatures f = contextFeatures(utt, wordIdx, phoneIdx, inv, spec.distanceCap);
    size_t off = spec.window * spec.slotWidth();
    size_t buckets = spec.distanceCap + 1;
    const int dists[8] = {f.distWordLeft,     f.distWordRight,   f.distPhraseLeft,
                          f.distPhraseRight,  f.distClauseLeft,  f.distClauseRight,
                          f.distSentenceLeft, f.distSentenceRight};
    for (size_t d = 0; d < 8; ++d)
        x[off + d * buckets + static_cast<size_t>(dists[d])] = 1.0;
    off += spec.distanceWidth();
    x[off + static_cast<size_t>(std::clamp(f.stress, 0, 2))] = 1.0;
    off += 3;
    x[off + static_cast<size_t>(f.syllablePosition)] = 1.0;
    off += 3;
    x[off + (f.wordType == WordType::Function ? 0 : 1)] = 1.0;
    off += 2;
    x[off + static_cast<size_t>(std::clamp<int>(f.prominence, 0, static_cast<int>(spec.maxProminence)))] = 1.0;
    return x;
}

size_t PostlexModel::labelIndex(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    return labels.size();
}

std::vector<TokenChunk> goldChunks(const WordToken& word, const PhoneInventory& inv,
                                   const AllophoneCosts& costs) {
    std::vector<std::string> lex, post;
    for (const auto& t : word.lexicalPron) lex.push_back(inv.tokenText(t));
    for (const auto& t : word.postlexPhones) post.push_back(inv.symbol(t.id));

    Alignment a = align(lex, post, makeLexPostlexModel(costs, inv));
    std::vector<Chunk> chunks = chunkAlignment(a);

    std::vector<TokenChunk> out(word.lexicalPron.size());
    for (const auto& c : chunks) {
        TokenChunk tc;
        for (size_t di : c.dstIndices) tc.push_back(word.postlexPhones[di]);
        out[c.srcIndex] = std::move(tc);
    }
    return out;
}

PostlexDataset buildPostlexDataset(const std::vector<const Utterance*>& utts,
                                   const PhoneInventory& inv, const AllophoneCosts& costs,
                                   const ContextSpec& spec,
                                   const std::vector<std::string>* fixedLabels) {
    PostlexDataset ds;
    std::map<std::string, size_t> labelIdx;
    if (fixedLabels) {
        ds.labels = *fixedLabels;
        for (size_t i = 0; i < ds.labels.size(); ++i) labelIdx[ds.labels[i]] = i;
    }

    for (const Utterance* utt : utts) {
        for (size_t w = 0; w < utt->words.size(); ++w) {
            const WordToken& word = utt->words[w];
            if (word.lexicalPron.empty())
                throw TierMismatchError(utt->id + ": word '" + word.orthography +
                                        "' has no lexical pronunciation");
            std::vector<TokenChunk> chunks;
            try {
                chunks = goldChunks(word, inv, costs);
            } catch (const OverfullChunkError&) {
                ++ds.skippedTokens;
                continue;
            }
            for (size_t s = 0; s < chunks.size(); ++s) {
                std::string label = chunkLabel(inv, chunks[s]);
                auto it = labelIdx.find(label);
                size_t li;
                if (it == labelIdx.end()) {
                    if (fixedLabels) {
                        ++ds.skippedTokens;
                        continue;
                    }
                    li = ds.labels.size();
                    ds.labels.push_back(label);
                    labelIdx.emplace(label, li);
                } else {
                    li = it->second;
                }
                ds.examples.push_back(
                    TrainingExample{encodeContext(*utt, w, s, spec, inv), li});
            }
        }
    }
    return ds;
}

PostlexModel trainPostlex(const PostlexDataset& dataset, const Hyperparams& hyper) {
    if (dataset.examples.empty())
        throw InsufficientDataError("postlex dataset is empty");
    PostlexModel model;
    model.labels = dataset.labels;
    size_t inputWidth = dataset.examples.front().input.size();
    Network net = initNetwork(inputWidth, hyper.hiddenSizes, dataset.labels.size(), hyper.seed);
    model.network = trainEpochs(net, dataset.examples, hyper).net;
    return model;
}

std::vector<std::string> predictChunkLabels(const PostlexModel& model, const Utterance& utt,
                                            size_t wordIdx, const PhoneInventory& inv) {
    std::vector<std::string> out;
    const WordToken& word = utt.words.at(wordIdx);
    for (size_t s = 0; s < word.lexicalPron.size(); ++s) {
        auto x = encodeContext(utt, wordIdx, s, model.spec, inv);
        out.push_back(model.labels.at(predictLabel(model.network, x)));
    }
    return out;
}

std::vector<std::vector<PhoneToken>> postlexicalize(const PostlexModel& model, const Utterance& utt,
                                                    const PhoneInventory& inv) {
    std::vector<std::vector<PhoneToken>> out(utt.words.size());
    for (size_t w = 0; w < utt.words.size(); ++w) {
        for (const std::string& label : predictChunkLabels(model, utt, w, inv)) {
            TokenChunk chunk = parseChunkLabel(inv, label);
            out[w].insert(out[w].end(), chunk.begin(), chunk.end());
        }
    }
    return out;
}

void savePostlexModel(const PostlexModel& model, const std::string& path) {
    saveNetwork(model.network, path);
    nlohmann::json j;
    j["type"] = "postlex";
    j["window"] = model.spec.window;
    j["distanceCap"] = model.spec.distanceCap;
    j["inventorySize"] = model.spec.inventorySize;
    j["featureCount"] = model.spec.featureCount;
    j["maxProminence"] = model.spec.maxProminence;
    j["labels"] = model.labels;
    io::writeFile(path + ".json", j.dump(2) + "\n");
}

PostlexModel loadPostlexModel(const std::string& path, const PhoneInventory& inv) {
    PostlexModel model;
    model.network = loadNetwork(path);
    nlohmann::json j = nlohmann::json::parse(io::readFile(path + ".json"));
    if (j.value("type", "") != "postlex")
        throw ParseError(path + ".json: not a postlex model sidecar");
    model.spec.window = j.at("window").get<size_t>();
    model.spec.distanceCap = j.at("distanceCap").get<size_t>();
    model.spec.inventorySize = j.at("inventorySize").get<size_t>();
    model.spec.featureCount = j.at("featureCount").get<size_t>();
    model.spec.maxProminence = j.at("maxProminence").get<size_t>();
    model.labels = j.at("labels").get<std::vector<std::string>>();
    if (model.spec.inventorySize != inv.size() || model.spec.featureCount != inv.featureCount())
        throw DimensionMismatchError(path + ": model was built against a different inventory");
    if (model.network.inputWidth != model.spec.inputWidth())
        throw DimensionMismatchError(path + ": network width does not match the context spec");
    return model;
}

} // namespace pronmod
