#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ossa/net.hpp"
#include "ossa/optim.hpp"
#include "ossa/trainlog.hpp"
#include "ossa/types.hpp"

namespace ossa {

/// One learnable proxy vector per seen class, kept in ascending class-id
/// order. All proxies share one dimension.
class ProxySet {
public:
    ProxySet() = default;
    ProxySet(std::vector<ClassId> ids, std::vector<Embedding> proxies);

    std::size_t size() const { return ids_.size(); }
    std::size_t dim() const { return proxies_.empty() ? 0 : proxies_.front().dim(); }

    const std::vector<ClassId>& ids() const { return ids_; }
    const Embedding& proxy(std::size_t i) const { return proxies_[i]; }
    Embedding& proxy(std::size_t i) { return proxies_[i]; }

    std::optional<std::size_t> index_of(ClassId cls) const;

private:
    std::vector<ClassId> ids_;
    std::vector<Embedding> proxies_;
};

/// One proxy per class, entries i.i.d. Gaussian(0, 1/sqrt(dim)), seeded.
ProxySet init_proxies(std::span<const ClassId> classes, std::size_t dim, std::uint64_t seed);

struct ProxyLossOptions {
    /// Use squared L2 instead of plain L2 inside the softmax (the common
    /// ProxyNCA++ convention). Default follows the plain-L2 reading.
    bool squared_distance = false;
    /// Softmax temperature; 1 disables it.
    double temperature = 1.0;
};

struct ProxyLossResult {
    double loss = 0.0;
    std::vector<double> emb_grad;
    std::vector<std::vector<double>> proxy_grads;  // aligned with ProxySet order
    std::size_t nearest = 0;                       // index of the closest proxy
};

/// Proxy-NCA objective: with d_a the distance from `emb` to proxy a,
///   loss = d_label + log sum_a exp(-d_a)
/// computed with stabilized log-sum-exp. Returns analytic gradients for the
/// embedding and every proxy. Throws LabelError if the label has no proxy.
/// Coincidence of emb with a proxy is handled by an epsilon guard in the
/// distance gradient, not an error.
ProxyLossResult proxynca_loss(std::span<const double> emb, ClassId label,
                              const ProxySet& proxies, const ProxyLossOptions& options = {});

struct FinetuneOptions {
    std::size_t batch_size = 32;
    ProxyLossOptions loss;
    /// L2-normalize embeddings before the loss (and, by contract, at
    /// inference). Interacts with sigma, so it must match between train and
    /// eval; the pipeline applies it consistently from one config flag.
    bool normalize_embeddings = false;
    AdamWConfig optimizer;
};

/// Applies `normalize_embeddings` semantics to a raw network output.
Embedding normalize_embedding(Embedding emb);

/// Joint AdamW training of model weights and proxies on the train split
/// (seen classes only; undersampling is the caller's responsibility).
/// Logs per-epoch mean loss and nearest-proxy accuracy. Throws LabelError
/// if a train sample's class has no proxy.
std::vector<TrainLogRow> finetune(EmbeddingModel& model, ProxySet& proxies,
                                  const LabeledDataset& train_data, const LrSchedule& schedule,
                                  int epochs, std::uint64_t seed,
                                  const FinetuneOptions& options = {});

}  // namespace ossa
