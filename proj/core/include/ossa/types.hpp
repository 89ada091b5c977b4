#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ossa {

/// Identifier of a source class. Known classes use dense non-negative ids
/// 0..N-1; the distinguished `unknown()` sentinel marks a rejected sample.
class ClassId {
public:
    constexpr ClassId() = default;
    constexpr explicit ClassId(std::int32_t id) : id_(id) {}

    static constexpr ClassId unknown() { return ClassId(kUnknownId); }

    constexpr std::int32_t value() const { return id_; }
    constexpr bool is_unknown() const { return id_ == kUnknownId; }

    friend constexpr auto operator<=>(ClassId, ClassId) = default;

private:
    static constexpr std::int32_t kUnknownId = -1;
    std::int32_t id_ = kUnknownId;
};

enum class Split : std::uint8_t { train = 0, val = 1, test = 2 };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

/// Raw per-sample feature vector x.
struct FeatureVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    std::span<const double> view() const { return values; }
};

/// Learned representation h(x).
struct Embedding {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    std::span<const double> view() const { return values; }
};

struct LabeledSample {
    FeatureVector features;
    ClassId label;
    Split split = Split::train;
    bool seen = true;
};

/// A full experiment dataset. Class ids are dense 0..N-1 and index
/// `class_names`. Samples from unseen classes never carry Split::train.
struct LabeledDataset {
    std::vector<LabeledSample> samples;
    std::vector<std::string> class_names;

    std::size_t class_count() const { return class_names.size(); }
    std::size_t feature_dim() const;

    /// List of class ids that appear with seen=true, ascending.
    std::vector<ClassId> seen_classes() const;

    /// Throws if any structural invariant is violated: inconsistent feature
    /// dims, labels outside the class table, non-finite features, or an
    /// unseen-class sample in the train split.
    void validate() const;
};

bool all_finite(std::span<const double> values);

}  // namespace ossa
