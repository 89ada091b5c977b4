#include "ossa/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ossa/errors.hpp"
#include "ossa/rng.hpp"
#include "train_common.hpp"

namespace ossa {

ClassifierHead make_head(std::size_t embedding_dim, std::size_t classes, std::uint64_t seed) {
    if (classes < 2) throw ParamError("pretext head needs at least 2 classes");
    ClassifierHead head;
    head.weight = Matrix(classes, embedding_dim);
    head.bias.assign(classes, 0.0);
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(embedding_dim));
    for (double& w : head.weight.flat()) w = rng.uniform(-bound, bound);
    for (double& b : head.bias) b = rng.uniform(-bound, bound);
    return head;
}

std::vector<double> head_forward(const ClassifierHead& head, std::span<const double> embedding) {
    if (embedding.size() != head.input_dim()) {
        throw DimError("embedding dim " + std::to_string(embedding.size()) +
                       " != head input dim " + std::to_string(head.input_dim()));
    }
    std::vector<double> logits(head.class_count());
    for (std::size_t k = 0; k < head.class_count(); ++k) {
        double acc = head.bias[k];
        const double* wrow = head.weight.flat().data() + k * head.input_dim();
        for (std::size_t c = 0; c < head.input_dim(); ++c) acc += wrow[c] * embedding[c];
        logits[k] = acc;
    }
    return logits;
}

CrossEntropyResult cross_entropy(std::span<const double> logits, ClassId label) {
    const std::size_t k = logits.size();
    if (label.is_unknown() || static_cast<std::size_t>(label.value()) >= k) {
        throw LabelError("label " + std::to_string(label.value()) + " out of range for " +
                         std::to_string(k) + " logits");
    }
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - max_logit);
    const double lse = max_logit + std::log(sum);

    CrossEntropyResult res;
    res.loss = lse - logits[static_cast<std::size_t>(label.value())];
    res.logit_grad.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        res.logit_grad[i] = std::exp(logits[i] - lse);
    }
    res.logit_grad[static_cast<std::size_t>(label.value())] -= 1.0;
    return res;
}

namespace {

std::vector<std::size_t> train_indices(const LabeledDataset& data) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        if (data.samples[i].split == Split::train) idx.push_back(i);
    }
    return idx;
}

double train_accuracy(const PretrainedClassifier& classifier, const LabeledDataset& data,
                      const std::vector<std::size_t>& idx) {
    std::size_t correct = 0;
    for (std::size_t i : idx) {
        const auto& sample = data.samples[i];
        const Embedding emb = forward(classifier.embedding, sample.features);
        const std::vector<double> logits = head_forward(classifier.head, emb.view());
        const auto arg =
            std::distance(logits.begin(), std::max_element(logits.begin(), logits.end()));
        if (arg == sample.label.value()) ++correct;
    }
    return idx.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(idx.size());
}

}  // namespace

std::vector<TrainLogRow> pretrain(PretrainedClassifier& classifier, const LabeledDataset& pretext,
                                  const LrSchedule& schedule, int epochs, std::uint64_t seed,
                                  const PretrainOptions& options) {
    if (pretext.samples.empty()) throw EmptyDatasetError("pretext dataset is empty");
    if (classifier.head.class_count() < 2) {
        throw ParamError("pretext task needs at least 2 classes");
    }
    schedule.validate();
    classifier.embedding.validate();

    std::vector<std::size_t> idx = train_indices(pretext);
    if (idx.empty()) throw EmptyDatasetError("pretext dataset has no train samples");

    EmbeddingModel& model = classifier.embedding;
    ClassifierHead& head = classifier.head;

    ParamPack pack;
    const std::size_t model_base = detail::bind_model(pack, model);
    const std::size_t head_w_off = pack.add(head.weight.flat());
    const std::size_t head_b_off = pack.add(std::span<double>(head.bias));

    AdamW optimizer(pack.total(), options.optimizer);
    std::vector<double> flat_grad(pack.total(), 0.0);
    ModelGrads model_grads = make_zero_grads(model);
    Rng rng(seed);

    std::vector<TrainLogRow> log;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const double lr = schedule.at(epoch);
        Rng epoch_rng = rng.fork(static_cast<std::uint64_t>(epoch));
        detail::shuffle_indices(idx, epoch_rng);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < idx.size(); start += options.batch_size) {
            const std::size_t stop = std::min(idx.size(), start + options.batch_size);
            const double scale = 1.0 / static_cast<double>(stop - start);
            std::fill(flat_grad.begin(), flat_grad.end(), 0.0);
            detail::zero_grads(model_grads);

            for (std::size_t b = start; b < stop; ++b) {
                const auto& sample = pretext.samples[idx[b]];
                const ForwardTrace trace = forward_trace(model, sample.features.view());
                const std::vector<double> logits = head_forward(head, trace.output());
                const CrossEntropyResult ce = cross_entropy(logits, sample.label);
                loss_sum += ce.loss;

                // Head gradients and the chained embedding gradient.
                std::vector<double> emb_grad(head.input_dim(), 0.0);
                for (std::size_t k = 0; k < head.class_count(); ++k) {
                    const double g = ce.logit_grad[k] * scale;
                    double* wrow = flat_grad.data() + head_w_off + k * head.input_dim();
                    const double* hrow = head.weight.flat().data() + k * head.input_dim();
                    for (std::size_t c = 0; c < head.input_dim(); ++c) {
                        wrow[c] += g * trace.output()[c];
                        emb_grad[c] += ce.logit_grad[k] * hrow[c];
                    }
                    flat_grad[head_b_off + k] += g;
                }
                for (double& g : emb_grad) g *= scale;
                backward(model, trace, emb_grad, model_grads);
            }
            detail::scatter_model_grads(flat_grad, model_base, model_grads, 1.0);
            optimizer.step(pack, flat_grad, lr);
        }

        TrainLogRow row;
        row.epoch = epoch;
        row.lr = lr;
        row.loss = loss_sum / static_cast<double>(idx.size());
        row.acc = train_accuracy(classifier, pretext, idx);
        if (!std::isfinite(row.loss)) {
            throw NumericError("pretraining loss diverged at epoch " + std::to_string(epoch));
        }
        log.push_back(row);
    }
    return log;
}

EmbeddingModel strip_head(const PretrainedClassifier& classifier) {
    if (!classifier.head.attached()) throw StateError("classifier has no head attached");
    EmbeddingModel stripped = classifier.embedding;
    stripped.validate();
    return stripped;
}

}  // namespace ossa
