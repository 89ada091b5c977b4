#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ossa {

/// Step-decay schedule: lr(epoch) = base_lr * decay_factor^floor(epoch/interval).
struct LrSchedule {
    double base_lr = 1e-3;
    double decay_factor = 0.65;
    int decay_interval_epochs = 3;

    double at(int epoch) const;
    void validate() const;
};

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

/// Registry of parameter tensors updated jointly by one optimizer. Views are
/// non-owning; the order of add() calls fixes the flat gradient layout.
class ParamPack {
public:
    /// Returns the flat offset of the added tensor.
    std::size_t add(std::span<double> tensor);

    std::size_t total() const { return total_; }
    std::size_t tensor_count() const { return views_.size(); }
    std::span<double> tensor(std::size_t i) { return views_[i]; }
    std::size_t offset(std::size_t i) const { return offsets_[i]; }

private:
    std::vector<std::span<double>> views_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;

    friend class AdamW;
};

/// AdamW with decoupled weight decay:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   theta <- theta - lr * ( m_hat / (sqrt(v_hat) + eps) + wd * theta )
/// where m_hat, v_hat are bias-corrected by the step counter.
class AdamW {
public:
    explicit AdamW(std::size_t param_count, AdamWConfig config = {});

    /// One update over every registered tensor. `grads` is the flat gradient
    /// in ParamPack layout. Throws NumericError on non-finite gradients and
    /// DimError on size mismatches.
    void step(ParamPack& params, std::span<const double> grads, double lr);

    std::uint64_t step_count() const { return step_; }
    const AdamWConfig& config() const { return config_; }

    // Serialization access.
    std::span<const double> moment1() const { return m_; }
    std::span<const double> moment2() const { return v_; }
    void restore(std::uint64_t step, std::span<const double> m, std::span<const double> v);

private:
    AdamWConfig config_;
    std::vector<double> m_, v_;
    std::uint64_t step_ = 0;
};

}  // namespace ossa
