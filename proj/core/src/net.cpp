#include "ossa/net.hpp"

#include <cmath>
#include <string>

#include "ossa/errors.hpp"
#include "ossa/rng.hpp"

namespace ossa {

void EmbeddingModel::validate() const {
    if (layers.empty()) throw StateError("model has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        if (layer.bias.size() != layer.out_dim()) {
            throw DimError("layer " + std::to_string(l) + " bias size mismatch");
        }
        if (l + 1 < layers.size() && layer.out_dim() != layers[l + 1].in_dim()) {
            throw DimError("layer " + std::to_string(l) + " output dim " +
                           std::to_string(layer.out_dim()) + " does not feed layer " +
                           std::to_string(l + 1));
        }
        if (!all_finite(layer.weight.flat()) || !all_finite(layer.bias)) {
            throw NumericError("layer " + std::to_string(l) + " has non-finite parameters");
        }
    }
    if (layers.back().activation != Activation::none) {
        throw StateError("final layer must have no activation");
    }
}

EmbeddingModel make_model(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                          std::size_t embedding_dim, std::uint64_t seed) {
    if (input_dim == 0 || embedding_dim == 0) {
        throw DimError("input and embedding dims must be positive");
    }
    std::vector<std::size_t> widths;
    widths.push_back(input_dim);
    for (std::size_t h : hidden) widths.push_back(h);
    widths.push_back(embedding_dim);

    EmbeddingModel model;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Layer layer;
        const std::size_t in = widths[l], out = widths[l + 1];
        layer.weight = Matrix(out, in);
        layer.bias.assign(out, 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        for (double& w : layer.weight.flat()) w = rng.uniform(-bound, bound);
        for (double& b : layer.bias) b = rng.uniform(-bound, bound);
        layer.activation = (l + 2 < widths.size()) ? Activation::relu : Activation::none;
        model.layers.push_back(std::move(layer));
    }
    return model;
}

namespace {

void affine(const Layer& layer, std::span<const double> in, std::vector<double>& out) {
    out.assign(layer.out_dim(), 0.0);
    for (std::size_t r = 0; r < layer.out_dim(); ++r) {
        double acc = layer.bias[r];
        const double* wrow = layer.weight.flat().data() + r * layer.in_dim();
        for (std::size_t c = 0; c < layer.in_dim(); ++c) acc += wrow[c] * in[c];
        out[r] = acc;
    }
}

}  // namespace

ForwardTrace forward_trace(const EmbeddingModel& model, std::span<const double> x) {
    if (model.layers.empty()) throw StateError("model has no layers");
    if (x.size() != model.input_dim()) {
        throw DimError("input dim " + std::to_string(x.size()) + " != model input dim " +
                       std::to_string(model.input_dim()));
    }

    ForwardTrace trace;
    trace.post.reserve(model.layers.size() + 1);
    trace.pre.reserve(model.layers.size());
    trace.post.emplace_back(x.begin(), x.end());

    std::vector<double> z;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const Layer& layer = model.layers[l];
        affine(layer, trace.post.back(), z);
        if (!all_finite(z)) {
            throw NumericError("non-finite activation at layer " + std::to_string(l));
        }
        trace.pre.push_back(z);
        if (layer.activation == Activation::relu) {
            for (double& v : z) v = v > 0.0 ? v : 0.0;
        }
        trace.post.push_back(z);
    }
    return trace;
}

Embedding forward(const EmbeddingModel& model, std::span<const double> x) {
    ForwardTrace trace = forward_trace(model, x);
    return Embedding{std::move(trace.post.back())};
}

Embedding forward(const EmbeddingModel& model, const FeatureVector& x) {
    return forward(model, x.view());
}

ModelGrads make_zero_grads(const EmbeddingModel& model) {
    ModelGrads g;
    g.weight.reserve(model.layers.size());
    g.bias.reserve(model.layers.size());
    for (const Layer& layer : model.layers) {
        g.weight.emplace_back(layer.out_dim(), layer.in_dim());
        g.bias.emplace_back(layer.out_dim(), 0.0);
    }
    g.input.assign(model.input_dim(), 0.0);
    return g;
}

void backward(const EmbeddingModel& model, const ForwardTrace& trace,
              std::span<const double> upstream, ModelGrads& grads) {
    if (upstream.size() != model.output_dim()) {
        throw DimError("upstream grad dim " + std::to_string(upstream.size()) +
                       " != model output dim " + std::to_string(model.output_dim()));
    }
    if (grads.weight.size() != model.layers.size()) {
        throw DimError("gradient buffer does not match model layout");
    }

    std::vector<double> delta(upstream.begin(), upstream.end());
    std::vector<double> next_delta;
    for (std::size_t li = model.layers.size(); li-- > 0;) {
        const Layer& layer = model.layers[li];
        if (layer.activation == Activation::relu) {
            const std::vector<double>& z = trace.pre[li];
            for (std::size_t r = 0; r < delta.size(); ++r) {
                if (z[r] <= 0.0) delta[r] = 0.0;
            }
        }

        const std::vector<double>& in = trace.post[li];
        Matrix& wg = grads.weight[li];
        for (std::size_t r = 0; r < layer.out_dim(); ++r) {
            const double d = delta[r];
            if (d == 0.0) continue;
            double* wrow = wg.flat().data() + r * layer.in_dim();
            for (std::size_t c = 0; c < layer.in_dim(); ++c) wrow[c] += d * in[c];
            grads.bias[li][r] += d;
        }

        next_delta.assign(layer.in_dim(), 0.0);
        for (std::size_t r = 0; r < layer.out_dim(); ++r) {
            const double d = delta[r];
            if (d == 0.0) continue;
            const double* wrow = layer.weight.flat().data() + r * layer.in_dim();
            for (std::size_t c = 0; c < layer.in_dim(); ++c) next_delta[c] += d * wrow[c];
        }
        delta.swap(next_delta);
    }
    for (std::size_t c = 0; c < delta.size(); ++c) grads.input[c] += delta[c];
}

}  // namespace ossa
