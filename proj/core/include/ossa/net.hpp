#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ossa/types.hpp"

namespace ossa {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

enum class Activation : std::uint8_t { none = 0, relu = 1 };

struct Layer {
    Matrix weight;             // out x in
    std::vector<double> bias;  // out
    Activation activation = Activation::none;

    std::size_t in_dim() const { return weight.cols(); }
    std::size_t out_dim() const { return weight.rows(); }
};

/// The embedding function h: a fully-connected stack. The final layer always
/// has Activation::none so the embedding is an unconstrained linear output.
struct EmbeddingModel {
    std::vector<Layer> layers;

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

    /// Throws if layer dims do not chain, the final activation is not none,
    /// or any parameter is non-finite.
    void validate() const;
};

/// Builds a model input_dim -> hidden[0] relu -> ... -> embedding_dim, with
/// weights and biases drawn uniformly from +-1/sqrt(fan_in), seeded.
EmbeddingModel make_model(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                          std::size_t embedding_dim, std::uint64_t seed);

/// Per-layer activations cached by forward_trace for backprop.
struct ForwardTrace {
    // post[0] is the input; post[l+1] is layer l's output after activation.
    std::vector<std::vector<double>> post;
    // pre[l] is layer l's affine output before activation.
    std::vector<std::vector<double>> pre;

    std::span<const double> output() const { return post.back(); }
};

/// Runs the network on one input. Throws DimError on input-size mismatch and
/// NumericError if any intermediate value is non-finite.
Embedding forward(const EmbeddingModel& model, std::span<const double> x);
Embedding forward(const EmbeddingModel& model, const FeatureVector& x);

ForwardTrace forward_trace(const EmbeddingModel& model, std::span<const double> x);

struct ModelGrads {
    std::vector<Matrix> weight;
    std::vector<std::vector<double>> bias;
    std::vector<double> input;
};

ModelGrads make_zero_grads(const EmbeddingModel& model);

/// Reverse-mode gradients of a scalar loss given d(loss)/d(output).
/// relu's subgradient at exactly 0 is 0. Accumulates into `grads` so one
/// buffer can sum a whole batch (callers iterate samples in ascending index
/// order for bit-reproducible sums).
void backward(const EmbeddingModel& model, const ForwardTrace& trace,
              std::span<const double> upstream, ModelGrads& grads);

}  // namespace ossa
