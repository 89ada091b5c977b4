#include "ossa/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ossa/errors.hpp"
#include "ossa/rng.hpp"
#include "ossa/vecmath.hpp"
#include "train_common.hpp"

namespace ossa {

namespace {
// Guard against the non-differentiable point when an embedding coincides
// with a proxy.
constexpr double kDistanceEps = 1e-12;
}  // namespace

ProxySet::ProxySet(std::vector<ClassId> ids, std::vector<Embedding> proxies)
    : ids_(std::move(ids)), proxies_(std::move(proxies)) {
    if (ids_.size() != proxies_.size()) throw DimError("proxy/id count mismatch");
    for (std::size_t i = 0; i + 1 < ids_.size(); ++i) {
        if (!(ids_[i] < ids_[i + 1])) throw ParamError("proxy ids must be ascending and unique");
    }
    for (const Embedding& p : proxies_) {
        if (p.dim() != dim()) throw DimError("proxies must share one dimension");
        if (!all_finite(p.view())) throw NumericError("non-finite proxy");
    }
}

std::optional<std::size_t> ProxySet::index_of(ClassId cls) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), cls);
    if (it == ids_.end() || *it != cls) return std::nullopt;
    return static_cast<std::size_t>(std::distance(ids_.begin(), it));
}

ProxySet init_proxies(std::span<const ClassId> classes, std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DimError("proxy dim must be positive");
    std::vector<ClassId> ids(classes.begin(), classes.end());
    std::sort(ids.begin(), ids.end());

    const double stddev = 1.0 / std::sqrt(static_cast<double>(dim));
    Rng rng(seed);
    std::vector<Embedding> proxies;
    proxies.reserve(ids.size());
    for (ClassId cls : ids) {
        Rng class_rng = rng.fork(static_cast<std::uint64_t>(cls.value()));
        Embedding p;
        p.values.resize(dim);
        for (double& v : p.values) v = class_rng.normal(0.0, stddev);
        proxies.push_back(std::move(p));
    }
    return ProxySet(std::move(ids), std::move(proxies));
}

ProxyLossResult proxynca_loss(std::span<const double> emb, ClassId label,
                              const ProxySet& proxies, const ProxyLossOptions& options) {
    if (proxies.size() == 0) throw LabelError("proxy set is empty");
    if (options.temperature <= 0.0) throw ParamError("temperature must be positive");
    const auto label_idx = proxies.index_of(label);
    if (!label_idx) {
        throw LabelError("no proxy for class " + std::to_string(label.value()));
    }
    const std::size_t n = proxies.size();
    const std::size_t dim = proxies.dim();
    if (emb.size() != dim) {
        throw DimError("embedding dim " + std::to_string(emb.size()) + " != proxy dim " +
                       std::to_string(dim));
    }

    // Scaled distances t_a = d_a / temperature.
    std::vector<double> raw(n), scaled(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double d2 = squared_l2_distance(emb, proxies.proxy(a).view());
        raw[a] = options.squared_distance ? d2 : std::sqrt(d2);
        scaled[a] = raw[a] / options.temperature;
    }
    const std::size_t nearest = static_cast<std::size_t>(
        std::distance(raw.begin(), std::min_element(raw.begin(), raw.end())));

    // loss = t_label + log sum_a exp(-t_a), stabilized around the smallest t.
    const double t_min = scaled[nearest];
    double sum = 0.0;
    for (double t : scaled) sum += std::exp(t_min - t);
    const double lse = -t_min + std::log(sum);  // log sum exp(-t_a)

    ProxyLossResult res;
    res.nearest = nearest;
    res.loss = scaled[*label_idx] + lse;
    res.emb_grad.assign(dim, 0.0);
    res.proxy_grads.assign(n, std::vector<double>(dim, 0.0));

    // d(loss)/d(t_a) = [a == label] - w_a with w_a = exp(-t_a) / sum_b exp(-t_b).
    for (std::size_t a = 0; a < n; ++a) {
        const double w = std::exp(t_min - scaled[a]) / sum;
        double coeff = ((a == *label_idx) ? 1.0 : 0.0) - w;
        coeff /= options.temperature;
        if (coeff == 0.0) continue;

        // d(d_a)/d(emb) = u_a, d(d_a)/d(p_a) = -u_a.
        const std::span<const double> p = proxies.proxy(a).view();
        if (options.squared_distance) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double u = 2.0 * (emb[i] - p[i]);
                res.emb_grad[i] += coeff * u;
                res.proxy_grads[a][i] -= coeff * u;
            }
        } else {
            const double denom = raw[a] + kDistanceEps;
            for (std::size_t i = 0; i < dim; ++i) {
                const double u = (emb[i] - p[i]) / denom;
                res.emb_grad[i] += coeff * u;
                res.proxy_grads[a][i] -= coeff * u;
            }
        }
    }
    return res;
}

Embedding normalize_embedding(Embedding emb) {
    const double norm = l2_norm(emb.values) + kDistanceEps;
    for (double& v : emb.values) v /= norm;
    return emb;
}

namespace {

// Backprop through y = x / (||x|| + eps): g_x = (g - (g . y) y) / (||x|| + eps).
std::vector<double> normalize_backward(std::span<const double> raw,
                                       std::span<const double> normalized,
                                       std::span<const double> grad) {
    const double denom = l2_norm(raw) + kDistanceEps;
    double dot = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) dot += grad[i] * normalized[i];
    std::vector<double> out(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        out[i] = (grad[i] - dot * normalized[i]) / denom;
    }
    return out;
}

}  // namespace

std::vector<TrainLogRow> finetune(EmbeddingModel& model, ProxySet& proxies,
                                  const LabeledDataset& train_data, const LrSchedule& schedule,
                                  int epochs, std::uint64_t seed,
                                  const FinetuneOptions& options) {
    schedule.validate();
    model.validate();
    if (proxies.dim() != model.output_dim()) {
        throw DimError("proxy dim does not match model embedding dim");
    }

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < train_data.samples.size(); ++i) {
        const auto& s = train_data.samples[i];
        if (s.split != Split::train) continue;
        if (!s.seen || !proxies.index_of(s.label)) {
            throw LabelError("train sample " + std::to_string(i) + " has class " +
                             std::to_string(s.label.value()) + " without a proxy");
        }
        idx.push_back(i);
    }
    if (idx.empty()) throw EmptyDatasetError("no train samples for finetune");

    ParamPack pack;
    const std::size_t model_base = detail::bind_model(pack, model);
    std::vector<std::size_t> proxy_offsets;
    for (std::size_t a = 0; a < proxies.size(); ++a) {
        proxy_offsets.push_back(pack.add(std::span<double>(proxies.proxy(a).values)));
    }

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
        std::size_t nearest_hits = 0;
        for (std::size_t start = 0; start < idx.size(); start += options.batch_size) {
            const std::size_t stop = std::min(idx.size(), start + options.batch_size);
            const double scale = 1.0 / static_cast<double>(stop - start);
            std::fill(flat_grad.begin(), flat_grad.end(), 0.0);
            detail::zero_grads(model_grads);

            for (std::size_t b = start; b < stop; ++b) {
                const auto& sample = train_data.samples[idx[b]];
                const ForwardTrace trace = forward_trace(model, sample.features.view());

                ProxyLossResult loss;
                std::vector<double> emb_grad;
                if (options.normalize_embeddings) {
                    Embedding normalized =
                        normalize_embedding(Embedding{{trace.output().begin(),
                                                       trace.output().end()}});
                    loss = proxynca_loss(normalized.view(), sample.label, proxies, options.loss);
                    emb_grad = normalize_backward(trace.output(), normalized.view(),
                                                  loss.emb_grad);
                } else {
                    loss = proxynca_loss(trace.output(), sample.label, proxies, options.loss);
                    emb_grad = std::move(loss.emb_grad);
                }
                loss_sum += loss.loss;
                if (proxies.ids()[loss.nearest] == sample.label) ++nearest_hits;

                for (double& g : emb_grad) g *= scale;
                backward(model, trace, emb_grad, model_grads);
                for (std::size_t a = 0; a < proxies.size(); ++a) {
                    double* dst = flat_grad.data() + proxy_offsets[a];
                    for (std::size_t i = 0; i < proxies.dim(); ++i) {
                        dst[i] += scale * loss.proxy_grads[a][i];
                    }
                }
            }
            detail::scatter_model_grads(flat_grad, model_base, model_grads, 1.0);
            optimizer.step(pack, flat_grad, lr);
        }

        TrainLogRow row;
        row.epoch = epoch;
        row.lr = lr;
        row.loss = loss_sum / static_cast<double>(idx.size());
        row.acc = static_cast<double>(nearest_hits) / static_cast<double>(idx.size());
        if (!std::isfinite(row.loss)) {
            throw NumericError("finetune loss diverged at epoch " + std::to_string(epoch));
        }
        log.push_back(row);
    }
    return log;
}

}  // namespace ossa
