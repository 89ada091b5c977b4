#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ossa/net.hpp"
#include "ossa/optim.hpp"
#include "ossa/trainlog.hpp"
#include "ossa/types.hpp"

namespace ossa {

/// Linear classification layer attached on top of the embedding output
/// during pretext pretraining. K = weight.rows() classes.
struct ClassifierHead {
    Matrix weight;             // K x embedding_dim
    std::vector<double> bias;  // K

    std::size_t class_count() const { return weight.rows(); }
    std::size_t input_dim() const { return weight.cols(); }
    bool attached() const { return weight.rows() > 0; }
};

ClassifierHead make_head(std::size_t embedding_dim, std::size_t classes, std::uint64_t seed);

std::vector<double> head_forward(const ClassifierHead& head, std::span<const double> embedding);

/// Embedding network plus its pretext classification head.
struct PretrainedClassifier {
    EmbeddingModel embedding;
    ClassifierHead head;
};

struct CrossEntropyResult {
    double loss = 0.0;
    std::vector<double> logit_grad;  // softmax(logits) - one_hot(label)
};

/// Softmax cross-entropy with max-subtraction stabilization.
/// Throws LabelError if the label is outside [0, K).
CrossEntropyResult cross_entropy(std::span<const double> logits, ClassId label);

struct PretrainOptions {
    std::size_t batch_size = 32;
    AdamWConfig optimizer;
};

/// Mini-batch cross-entropy training of the embedding + head on the pretext
/// task. Uses the train split of `pretext`; deterministic for a fixed seed.
/// Returns one log row per epoch (post-epoch accuracy over the train split).
std::vector<TrainLogRow> pretrain(PretrainedClassifier& classifier,
                                  const LabeledDataset& pretext, const LrSchedule& schedule,
                                  int epochs, std::uint64_t seed,
                                  const PretrainOptions& options = {});

/// Removes the classification layer: the result computes the penultimate
/// activation of the full classifier. Throws StateError if no head is
/// attached.
EmbeddingModel strip_head(const PretrainedClassifier& classifier);

}  // namespace ossa
