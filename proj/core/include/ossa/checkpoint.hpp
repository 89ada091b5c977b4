#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ossa/metric.hpp"
#include "ossa/net.hpp"
#include "ossa/optim.hpp"
#include "ossa/pretrain.hpp"

namespace ossa {

struct OptimizerSnapshot {
    AdamWConfig config;
    std::uint64_t step = 0;
    std::vector<double> moment1;
    std::vector<double> moment2;
};

/// Everything a checkpoint can carry: the embedding model, plus optional
/// tagged blocks (classifier head, optimizer state, proxies).
struct CheckpointContents {
    EmbeddingModel model;
    std::optional<ClassifierHead> head;
    std::optional<OptimizerSnapshot> optimizer;
    std::optional<ProxySet> proxies;
};

/// Binary layout: magic "OSSA-CKPT", version byte, little-endian u32 layer
/// count, then per layer u32 out, u32 in, u8 activation code, row-major f64
/// weights, f64 biases. Optional blocks follow, each tagged with one byte
/// ('H' head, 'O' optimizer, 'P' proxies) plus a u64 payload length.
void save_checkpoint(std::ostream& out, const CheckpointContents& contents);
void save_checkpoint(const std::string& path, const CheckpointContents& contents);

/// Throws CheckpointError on bad magic, version mismatch, truncation, or an
/// unknown block tag.
CheckpointContents load_checkpoint(std::istream& in);
CheckpointContents load_checkpoint(const std::string& path);

}  // namespace ossa
