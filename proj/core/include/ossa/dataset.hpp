#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ossa/types.hpp"

namespace ossa {

/// Rebalances the train split: every seen class keeps exactly
/// min-train-count samples, drawn uniformly without replacement from its own
/// train samples. Val/test samples and unseen-class samples pass through
/// untouched; surviving samples keep their original relative order.
/// Throws EmptyClassError if a seen class has no train samples.
LabeledDataset stratified_undersample(const LabeledDataset& data, std::uint64_t seed);

/// Text feature-file format:
///   OSSA-FEAT v1 dim=<D> classes=<N>
///   <class_id> <split> <seen:0|1> <D space-separated floats>
/// Floats round-trip exactly (written with 17 significant digits).
void write_feature_file(std::ostream& out, const LabeledDataset& data);
void write_feature_file(const std::string& path, const LabeledDataset& data);

/// Parses a feature file. Malformed input raises ParseError naming the
/// offending line number. Class names are synthesized as "class<i>".
LabeledDataset read_feature_file(std::istream& in);
LabeledDataset read_feature_file(const std::string& path);

}  // namespace ossa
