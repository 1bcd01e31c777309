#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pronmod/errors.hpp"

namespace pronmod {

enum class Activation : uint8_t { Sigmoid = 0, Relu = 1, SoftmaxOutput = 2 };

// One dense layer. Weights are row-major with one row per input unit:
// w[i * outSize + o].
struct Layer {
    size_t inSize = 0;
    size_t outSize = 0;
    Activation activation = Activation::Sigmoid;
    std::vector<double> weights;
    std::vector<double> biases;
};

// Feedforward classifier with a softmax output layer. Double precision
// throughout; immutable once trained (training returns a new value).
struct Network {
    std::vector<Layer> layers;
    size_t inputWidth = 0;
    size_t outputWidth = 0;
    uint64_t seed = 0;

    size_t parameterCount() const;
};

struct TrainingExample {
    std::vector<double> input;
    size_t label = 0;
};

struct Hyperparams {
    double learningRate = 0.05;
    double lrDecay = 1.0; // per-epoch multiplicative factor
    size_t epochs = 30;
    size_t batchSize = 32;
    std::vector<size_t> hiddenSizes = {128};
    uint64_t seed = 1;
    double l2 = 0.0;
};

// Weights drawn from a scaled uniform (Xavier range) using a seeded
// mt19937_64; identical seeds give identical networks.
Network initNetwork(size_t inputWidth, const std::vector<size_t>& hiddenSizes, size_t outputWidth,
                    uint64_t seed);

// Probability vector over labels; sums to 1, entries in (0,1).
std::vector<double> forward(const Network& net, const std::vector<double>& input);

// argmax of forward(); ties broken by lowest index.
size_t predictLabel(const Network& net, const std::vector<double>& input);

// Cross-entropy of one example, -log p[label].
double exampleLoss(const Network& net, const TrainingExample& ex);

// Analytic gradient of the cross-entropy loss for one example, flattened in
// parameter order (layer 0 weights, layer 0 biases, layer 1 weights, ...).
std::vector<double> exampleGradient(const Network& net, const TrainingExample& ex);

struct TrainResult {
    Network net;
    std::vector<double> lossCurve; // mean training loss per epoch
};

// Mini-batch gradient descent on cross-entropy. Deterministic under a fixed
// seed: single-threaded, own Fisher-Yates shuffle, no platform-defined
// distributions.
TrainResult trainEpochs(const Network& net, const std::vector<TrainingExample>& dataset,
                        const Hyperparams& hyper);

// Max scale-relative difference between analytic and central finite-difference
// gradients over all parameters: |a - n| / max(1, |a|, |n|).
double gradientCheck(const Network& net, const TrainingExample& ex, double eps);

// Versioned binary model format: magic, version, widths, activations, seed,
// then row-major weight and bias blocks as little-endian 64-bit floats.
void saveNetwork(const Network& net, const std::string& path);
Network loadNetwork(const std::string& path);

} // namespace pronmod
