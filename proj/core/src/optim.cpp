#include "ossa/optim.hpp"

#include <cmath>
#include <string>

#include "ossa/errors.hpp"
#include "ossa/types.hpp"

namespace ossa {

double LrSchedule::at(int epoch) const {
    if (epoch < 0) throw ParamError("epoch must be non-negative");
    return base_lr * std::pow(decay_factor, epoch / decay_interval_epochs);
}

void LrSchedule::validate() const {
    if (base_lr <= 0.0) throw ParamError("base_lr must be positive");
    if (decay_factor <= 0.0 || decay_factor > 1.0) {
        throw ParamError("decay_factor must be in (0, 1]");
    }
    if (decay_interval_epochs < 1) throw ParamError("decay interval must be >= 1");
}

std::size_t ParamPack::add(std::span<double> tensor) {
    const std::size_t off = total_;
    views_.push_back(tensor);
    offsets_.push_back(off);
    total_ += tensor.size();
    return off;
}

AdamW::AdamW(std::size_t param_count, AdamWConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {}

void AdamW::step(ParamPack& params, std::span<const double> grads, double lr) {
    if (params.total() != m_.size() || grads.size() != m_.size()) {
        throw DimError("optimizer state, params, and grads must agree in size");
    }
    if (!all_finite(grads)) throw NumericError("non-finite gradient in optimizer step");

    ++step_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

    std::size_t k = 0;
    for (std::size_t t = 0; t < params.tensor_count(); ++t) {
        for (double& theta : params.tensor(t)) {
            const double g = grads[k];
            m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
            v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
            const double m_hat = m_[k] / bc1;
            const double v_hat = v_[k] / bc2;
            theta -= lr * (m_hat / (std::sqrt(v_hat) + config_.eps) +
                           config_.weight_decay * theta);
            ++k;
        }
    }
}

void AdamW::restore(std::uint64_t step, std::span<const double> m, std::span<const double> v) {
    if (m.size() != m_.size() || v.size() != v_.size()) {
        throw DimError("optimizer state size mismatch on restore");
    }
    step_ = step;
    m_.assign(m.begin(), m.end());
    v_.assign(v.begin(), v.end());
}

}  // namespace ossa
