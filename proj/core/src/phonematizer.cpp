#include "pronmod/phonematizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "json.hpp"
#include "pronmod/io.hpp"

namespace pronmod {

LetterEncoder::LetterEncoder(const LetterModelSet& models, const PhoneInventory& inv, size_t window_) {
    if (window_ % 2 == 0 || window_ == 0)
        throw DimensionMismatchError("window must be odd");
    window = window_;
    featureCount = inv.featureCount();
    for (const auto& lm : models.models()) letters.push_back(lm.letter);
    std::sort(letters.begin(), letters.end());
}

size_t LetterEncoder::letterIndex(char c) const {
    auto pos = letters.find(c);
    if (pos == std::string::npos)
        throw UnsupportedCharacterError(std::string("unsupported character '") + c + "'");
    return pos;
}

std::vector<double> LetterEncoder::encode(const std::string& word, size_t pos,
                                          const LetterModelSet& models,
                                          const PhoneInventory& inv) const {
    std::vector<double> x(inputWidth(), 0.0);
    const int half = static_cast<int>(window) / 2;
    for (int k = -half; k <= half; ++k) {
        size_t base = static_cast<size_t>(k + half) * slotWidth();
        long p = static_cast<long>(pos) + k;
        if (p < 0 || p >= static_cast<long>(word.size())) {
            x[base + letters.size()] = 1.0; // word-edge sentinel
            continue;
        }
        char c = word[static_cast<size_t>(p)];
        x[base + letterIndex(c)] = 1.0;
        FeatureVector fv = models.letterFeatures(c, inv);
        for (size_t b = 0; b < featureCount; ++b)
            if (fv.test(b)) x[base + letters.size() + 1 + b] = 1.0;
    }
    return x;
}

size_t G2PModel::labelIndex(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    return labels.size();
}

std::vector<TokenChunk> letterChunks(const std::string& orthography,
                                     const std::vector<PhoneToken>& pron,
                                     const LetterModelSet& models, const PhoneInventory& inv) {
    std::vector<std::string> src, dst;
    for (char c : orthography) src.push_back(std::string(1, c));
    for (const auto& t : pron) dst.push_back(inv.tokenText(t));

    Alignment a = align(src, dst, makeLetterPhoneModel(models, inv));
    std::vector<Chunk> chunks = chunkAlignment(a);

    std::vector<TokenChunk> out(orthography.size());
    for (const auto& c : chunks) {
        TokenChunk tc;
        for (size_t di : c.dstIndices) tc.push_back(pron[di]);
        out[c.srcIndex] = std::move(tc);
    }
    return out;
}

G2PDataset buildG2PDataset(const Lexicon& lex, const LetterModelSet& models,
                           const PhoneInventory& inv, const LetterEncoder& encoder,
                           const std::vector<std::string>* fixedLabels) {
    G2PDataset ds;
    std::map<std::string, size_t> labelIdx;
    if (fixedLabels) {
        ds.labels = *fixedLabels;
        for (size_t i = 0; i < ds.labels.size(); ++i) labelIdx[ds.labels[i]] = i;
    }

    for (const auto& [orth, entries] : lex.all()) {
        const LexEntry& entry = entries.front(); // preferred variant
        std::vector<TokenChunk> chunks;
        try {
            chunks = letterChunks(orth, entry.pronunciation, models, inv);
        } catch (const OverfullChunkError&) {
            ++ds.skippedEntries;
            continue;
        } catch (const UnsupportedCharacterError&) {
            ++ds.skippedEntries;
            continue;
        }
        for (size_t pos = 0; pos < orth.size(); ++pos) {
            std::string label = chunkLabel(inv, chunks[pos]);
            auto it = labelIdx.find(label);
            size_t li;
            if (it == labelIdx.end()) {
                if (fixedLabels) {
                    ++ds.skippedEntries;
                    continue;
                }
                li = ds.labels.size();
                ds.labels.push_back(label);
                labelIdx.emplace(label, li);
            } else {
                li = it->second;
            }
            ds.examples.push_back(TrainingExample{encoder.encode(orth, pos, models, inv), li});
        }
    }
    return ds;
}

G2PModel trainPhonematizer(const G2PDataset& dataset, const LetterEncoder& encoder,
                           const Hyperparams& hyper) {
    if (dataset.examples.empty())
        throw InsufficientDataError("g2p dataset is empty");
    G2PModel model;
    model.encoder = encoder;
    model.labels = dataset.labels;
    Network net = initNetwork(encoder.inputWidth(), hyper.hiddenSizes, dataset.labels.size(),
                              hyper.seed);
    model.network = trainEpochs(net, dataset.examples, hyper).net;
    return model;
}

std::vector<PhoneToken> phonematize(const G2PModel& model, const std::string& word,
                                    const LetterModelSet& models, const PhoneInventory& inv) {
    std::string w;
    for (char c : word)
        w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (char c : w)
        model.encoder.letterIndex(c); // reject unsupported characters up front

    std::vector<PhoneToken> out;
    for (size_t pos = 0; pos < w.size(); ++pos) {
        auto x = model.encoder.encode(w, pos, models, inv);
        const std::string& label = model.labels.at(predictLabel(model.network, x));
        TokenChunk chunk = parseChunkLabel(inv, label);
        out.insert(out.end(), chunk.begin(), chunk.end());
    }
    return out;
}

void saveG2PModel(const G2PModel& model, const std::string& path) {
    saveNetwork(model.network, path);
    nlohmann::json j;
    j["type"] = "g2p";
    j["window"] = model.encoder.window;
    j["letters"] = model.encoder.letters;
    j["featureCount"] = model.encoder.featureCount;
    j["labels"] = model.labels;
    io::writeFile(path + ".json", j.dump(2) + "\n");
}

G2PModel loadG2PModel(const std::string& path, const PhoneInventory& inv) {
    G2PModel model;
    model.network = loadNetwork(path);
    nlohmann::json j = nlohmann::json::parse(io::readFile(path + ".json"));
    if (j.value("type", "") != "g2p")
        throw ParseError(path + ".json: not a g2p model sidecar");
    model.encoder.window = j.at("window").get<size_t>();
    model.encoder.letters = j.at("letters").get<std::string>();
    model.encoder.featureCount = j.at("featureCount").get<size_t>();
    model.labels = j.at("labels").get<std::vector<std::string>>();
    if (model.encoder.featureCount != inv.featureCount())
        throw DimensionMismatchError(path + ": model was built against a different inventory");
    if (model.network.inputWidth != model.encoder.inputWidth())
        throw DimensionMismatchError(path + ": network width does not match the letter encoder");
    return model;
}

} // namespace pronmod
