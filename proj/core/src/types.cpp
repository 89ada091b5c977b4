#include "ossa/types.hpp"

#include <cmath>

#include "ossa/errors.hpp"

namespace ossa {

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "val") return Split::val;
    if (name == "test") return Split::test;
    throw ParseError("unknown split tag '" + name + "'");
}

bool all_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::size_t LabeledDataset::feature_dim() const {
    return samples.empty() ? 0 : samples.front().features.dim();
}

std::vector<ClassId> LabeledDataset::seen_classes() const {
    std::vector<bool> seen(class_names.size(), false);
    for (const auto& s : samples) {
        if (s.seen && !s.label.is_unknown()) {
            seen[static_cast<std::size_t>(s.label.value())] = true;
        }
    }
    std::vector<ClassId> out;
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i]) out.push_back(ClassId(static_cast<std::int32_t>(i)));
    }
    return out;
}

void LabeledDataset::validate() const {
    const std::size_t dim = feature_dim();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.features.dim() != dim) {
            throw DimError("sample " + std::to_string(i) + " has dim " +
                           std::to_string(s.features.dim()) + ", dataset dim is " +
                           std::to_string(dim));
        }
        if (!all_finite(s.features.view())) {
            throw NumericError("sample " + std::to_string(i) + " has non-finite features");
        }
        if (s.label.is_unknown() ||
            static_cast<std::size_t>(s.label.value()) >= class_names.size()) {
            throw LabelError("sample " + std::to_string(i) + " label " +
                             std::to_string(s.label.value()) + " not in class table");
        }
        if (!s.seen && s.split == Split::train) {
            throw LabelError("sample " + std::to_string(i) +
                             " is unseen-class but tagged split=train");
        }
    }
}

}  // namespace ossa
