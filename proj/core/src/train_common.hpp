#pragma once

// Internal helpers shared by the pretrain and finetune loops.

#include <cstdint>
#include <span>
#include <vector>

#include "ossa/net.hpp"
#include "ossa/optim.hpp"
#include "ossa/rng.hpp"

namespace ossa::detail {

/// Registers every model tensor (layer weight then bias, in layer order)
/// and returns the flat offset where the model's region begins.
inline std::size_t bind_model(ParamPack& pack, EmbeddingModel& model) {
    std::size_t base = pack.total();
    for (Layer& layer : model.layers) {
        pack.add(layer.weight.flat());
        pack.add(std::span<double>(layer.bias));
    }
    return base;
}

/// Adds structured model gradients (scaled) into the flat buffer at `base`.
inline void scatter_model_grads(std::span<double> flat, std::size_t base,
                                const ModelGrads& grads, double scale) {
    std::size_t k = base;
    for (std::size_t l = 0; l < grads.weight.size(); ++l) {
        for (double g : grads.weight[l].flat()) flat[k++] += scale * g;
        for (double g : grads.bias[l]) flat[k++] += scale * g;
    }
}

inline void zero_grads(ModelGrads& grads) {
    for (auto& w : grads.weight) {
        for (double& g : w.flat()) g = 0.0;
    }
    for (auto& b : grads.bias) {
        for (double& g : b) g = 0.0;
    }
    for (double& g : grads.input) g = 0.0;
}

/// Seeded in-place Fisher-Yates shuffle.
inline void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
}

}  // namespace ossa::detail
