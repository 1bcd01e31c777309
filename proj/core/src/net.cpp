#include "pronmod/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace pronmod {

namespace {

// Uniform double in [0,1) from the top 53 bits; avoids
// std::uniform_real_distribution, whose output is implementation-defined.
double nextUnit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased bounded draw for the Fisher-Yates shuffle.
size_t nextBelow(std::mt19937_64& rng, size_t bound) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<size_t>(x % bound);
}

void shuffleIndices(std::vector<size_t>& idx, std::mt19937_64& rng) {
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[nextBelow(rng, i)]);
}

void applyActivation(Activation act, std::vector<double>& z) {
    switch (act) {
    case Activation::Sigmoid:
        for (double& v : z) v = 1.0 / (1.0 + std::exp(-v));
        break;
    case Activation::Relu:
        for (double& v : z) v = v > 0.0 ? v : 0.0;
        break;
    case Activation::SoftmaxOutput: {
        double mx = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double& v : z) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : z) v /= sum;
        break;
    }
    }
}

// Activations of every layer (input excluded), used by backprop.
std::vector<std::vector<double>> forwardAll(const Network& net, const std::vector<double>& input) {
    if (input.size() != net.inputWidth)
        throw DimensionMismatchError("input width " + std::to_string(input.size()) + " != " +
                                     std::to_string(net.inputWidth));
    std::vector<std::vector<double>> acts;
    const std::vector<double>* prev = &input;
    for (const Layer& layer : net.layers) {
        std::vector<double> z(layer.biases);
        for (size_t i = 0; i < layer.inSize; ++i) {
            double x = (*prev)[i];
            if (x == 0.0) continue; // window encodings are mostly zeros
            const double* wrow = layer.weights.data() + i * layer.outSize;
            for (size_t o = 0; o < layer.outSize; ++o) z[o] += x * wrow[o];
        }
        applyActivation(layer.activation, z);
        acts.push_back(std::move(z));
        prev = &acts.back();
    }
    return acts;
}

} // namespace

size_t Network::parameterCount() const {
    size_t n = 0;
    for (const Layer& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

Network initNetwork(size_t inputWidth, const std::vector<size_t>& hiddenSizes, size_t outputWidth,
                    uint64_t seed) {
    if (inputWidth == 0 || outputWidth == 0)
        throw DimensionMismatchError("widths must be positive");
    for (size_t h : hiddenSizes)
        if (h == 0) throw DimensionMismatchError("hidden sizes must be positive");

    Network net;
    net.inputWidth = inputWidth;
    net.outputWidth = outputWidth;
    net.seed = seed;

    std::mt19937_64 rng(seed);
    std::vector<size_t> widths;
    widths.push_back(inputWidth);
    widths.insert(widths.end(), hiddenSizes.begin(), hiddenSizes.end());
    widths.push_back(outputWidth);

    for (size_t k = 0; k + 1 < widths.size(); ++k) {
        Layer layer;
        layer.inSize = widths[k];
        layer.outSize = widths[k + 1];
        layer.activation = (k + 2 == widths.size()) ? Activation::SoftmaxOutput : Activation::Sigmoid;
        layer.weights.resize(layer.inSize * layer.outSize);
        layer.biases.assign(layer.outSize, 0.0);
        double scale = std::sqrt(6.0 / static_cast<double>(layer.inSize + layer.outSize));
        for (double& w : layer.weights) w = (2.0 * nextUnit(rng) - 1.0) * scale;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

std::vector<double> forward(const Network& net, const std::vector<double>& input) {
    return forwardAll(net, input).back();
}

size_t predictLabel(const Network& net, const std::vector<double>& input) {
    std::vector<double> p = forward(net, input);
    size_t best = 0;
    for (size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    return best;
}

double exampleLoss(const Network& net, const TrainingExample& ex) {
    if (ex.label >= net.outputWidth)
        throw DimensionMismatchError("label out of range");
    std::vector<double> p = forward(net, ex.input);
    return -std::log(std::max(p[ex.label], 1e-300));
}

namespace {

// Backprop for one example. Appends nothing; writes gradients into flat
// per-layer slices laid out as weights-then-biases per layer.
void accumulateGradient(const Network& net, const TrainingExample& ex,
                        std::vector<std::vector<double>>& gradW,
                        std::vector<std::vector<double>>& gradB, double* lossOut) {
    auto acts = forwardAll(net, ex.input);
    const size_t L = net.layers.size();
    if (ex.label >= net.outputWidth)
        throw DimensionMismatchError("label out of range");
    if (lossOut) *lossOut = -std::log(std::max(acts.back()[ex.label], 1e-300));

    // softmax + cross-entropy: delta = p - onehot
    std::vector<double> delta = acts.back();
    delta[ex.label] -= 1.0;

    for (size_t k = L; k-- > 0;) {
        const Layer& layer = net.layers[k];
        const std::vector<double>& in = (k == 0) ? ex.input : acts[k - 1];
        for (size_t o = 0; o < layer.outSize; ++o) gradB[k][o] += delta[o];
        for (size_t i = 0; i < layer.inSize; ++i) {
            double x = in[i];
            if (x == 0.0) continue;
            double* gw = gradW[k].data() + i * layer.outSize;
            for (size_t o = 0; o < layer.outSize; ++o) gw[o] += x * delta[o];
        }
        if (k == 0) break;
        std::vector<double> prevDelta(layer.inSize, 0.0);
        for (size_t i = 0; i < layer.inSize; ++i) {
            const double* wrow = layer.weights.data() + i * layer.outSize;
            double s = 0.0;
            for (size_t o = 0; o < layer.outSize; ++o) s += wrow[o] * delta[o];
            prevDelta[i] = s;
        }
        const Layer& below = net.layers[k - 1];
        const std::vector<double>& a = acts[k - 1];
        switch (below.activation) {
        case Activation::Sigmoid:
            for (size_t i = 0; i < prevDelta.size(); ++i) prevDelta[i] *= a[i] * (1.0 - a[i]);
            break;
        case Activation::Relu:
            for (size_t i = 0; i < prevDelta.size(); ++i)
                if (a[i] <= 0.0) prevDelta[i] = 0.0;
            break;
        case Activation::SoftmaxOutput:
            throw Error("Internal", "softmax below top layer");
        }
        delta = std::move(prevDelta);
    }
}

} // namespace

std::vector<double> exampleGradient(const Network& net, const TrainingExample& ex) {
    std::vector<std::vector<double>> gw, gb;
    for (const Layer& l : net.layers) {
        gw.emplace_back(l.weights.size(), 0.0);
        gb.emplace_back(l.biases.size(), 0.0);
    }
    accumulateGradient(net, ex, gw, gb, nullptr);
    std::vector<double> flat;
    flat.reserve(net.parameterCount());
    for (size_t k = 0; k < net.layers.size(); ++k) {
        flat.insert(flat.end(), gw[k].begin(), gw[k].end());
        flat.insert(flat.end(), gb[k].begin(), gb[k].end());
    }
    return flat;
}

TrainResult trainEpochs(const Network& net, const std::vector<TrainingExample>& dataset,
                        const Hyperparams& hyper) {
    if (dataset.empty())
        throw InsufficientDataError("training dataset is empty");
    for (const auto& ex : dataset) {
        if (ex.input.size() != net.inputWidth)
            throw DimensionMismatchError("example input width mismatch");
        if (ex.label >= net.outputWidth)
            throw DimensionMismatchError("example label out of range");
    }

    TrainResult result;
    result.net = net;
    Network& cur = result.net;

    std::mt19937_64 shuffleRng(hyper.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<size_t> order(dataset.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    const size_t batch = std::max<size_t>(1, hyper.batchSize);
    std::vector<std::vector<double>> gw, gb;
    for (const Layer& l : cur.layers) {
        gw.emplace_back(l.weights.size(), 0.0);
        gb.emplace_back(l.biases.size(), 0.0);
    }

    double lr = hyper.learningRate;
    for (size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        shuffleIndices(order, shuffleRng);
        double epochLoss = 0.0;
        for (size_t start = 0; start < order.size(); start += batch) {
            size_t end = std::min(order.size(), start + batch);
            for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
            for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
            for (size_t t = start; t < end; ++t) {
                double loss = 0.0;
                accumulateGradient(cur, dataset[order[t]], gw, gb, &loss);
                epochLoss += loss;
            }
            double scale = lr / static_cast<double>(end - start);
            for (size_t k = 0; k < cur.layers.size(); ++k) {
                Layer& layer = cur.layers[k];
                if (hyper.l2 > 0.0) {
                    double decay = lr * hyper.l2;
                    for (size_t i = 0; i < layer.weights.size(); ++i)
                        layer.weights[i] -= scale * gw[k][i] + decay * layer.weights[i];
                } else {
                    for (size_t i = 0; i < layer.weights.size(); ++i)
                        layer.weights[i] -= scale * gw[k][i];
                }
                for (size_t i = 0; i < layer.biases.size(); ++i)
                    layer.biases[i] -= scale * gb[k][i];
            }
        }
        epochLoss /= static_cast<double>(dataset.size());
        if (!std::isfinite(epochLoss))
            throw NonFiniteLossError("epoch " + std::to_string(epoch) + ": loss " +
                                     std::to_string(epochLoss) + " (lr " + std::to_string(lr) + ")");
        result.lossCurve.push_back(epochLoss);
        lr *= hyper.lrDecay;
    }
    return result;
}

double gradientCheck(const Network& net, const TrainingExample& ex, double eps) {
    std::vector<double> analytic = exampleGradient(net, ex);
    Network work = net;

    std::vector<double*> params;
    params.reserve(analytic.size());
    for (Layer& l : work.layers) {
        for (double& w : l.weights) params.push_back(&w);
        for (double& b : l.biases) params.push_back(&b);
    }

    double maxErr = 0.0;
    for (size_t i = 0; i < params.size(); ++i) {
        double saved = *params[i];
        *params[i] = saved + eps;
        double up = exampleLoss(work, ex);
        *params[i] = saved - eps;
        double down = exampleLoss(work, ex);
        *params[i] = saved;
        double numeric = (up - down) / (2.0 * eps);
        double denom = std::max({1.0, std::abs(analytic[i]), std::abs(numeric)});
        maxErr = std::max(maxErr, std::abs(analytic[i] - numeric) / denom);
    }
    return maxErr;
}

namespace {

constexpr char kMagic[8] = {'P', 'M', 'N', 'E', 'T', '0', '0', '1'};

void putU64(std::ofstream& out, uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<char*>(buf), 8);
}

uint64_t getU64(std::ifstream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
}

void putF64(std::ofstream& out, double d) {
    uint64_t v;
    std::memcpy(&v, &d, 8);
    putU64(out, v);
}

double getF64(std::ifstream& in) {
    uint64_t v = getU64(in);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

} // namespace

void saveNetwork(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out.write(kMagic, 8);
    putU64(out, 1); // format version
    putU64(out, net.inputWidth);
    putU64(out, net.outputWidth);
    putU64(out, net.seed);
    putU64(out, net.layers.size());
    for (const Layer& l : net.layers) {
        putU64(out, l.inSize);
        putU64(out, l.outSize);
        putU64(out, static_cast<uint64_t>(l.activation));
        for (double w : l.weights) putF64(out, w);
        for (double b : l.biases) putF64(out, b);
    }
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

Network loadNetwork(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw ParseError("'" + path + "' is not a network model file");
    uint64_t version = getU64(in);
    if (version != 1)
        throw ParseError("unsupported model version " + std::to_string(version));
    Network net;
    net.inputWidth = getU64(in);
    net.outputWidth = getU64(in);
    net.seed = getU64(in);
    uint64_t nLayers = getU64(in);
    for (uint64_t k = 0; k < nLayers; ++k) {
        Layer l;
        l.inSize = getU64(in);
        l.outSize = getU64(in);
        l.activation = static_cast<Activation>(getU64(in));
        l.weights.resize(l.inSize * l.outSize);
        for (double& w : l.weights) w = getF64(in);
        l.biases.resize(l.outSize);
        for (double& b : l.biases) b = getF64(in);
        net.layers.push_back(std::move(l));
    }
    if (!in)
        throw ParseError("truncated model file '" + path + "'");
    return net;
}

} // namespace pronmod
