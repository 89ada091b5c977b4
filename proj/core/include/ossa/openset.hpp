#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ossa/types.hpp"

namespace ossa {

/// Per-class anchor learned from training embeddings: the centroid r, the
/// deviation sigma (sqrt of the (n-1)-normalized sum of squared distances
/// to r), and the training count n.
struct ClassReference {
    ClassId cls;
    Embedding r;
    double sigma = 0.0;
    std::size_t n = 0;
};

/// All class references plus the global acceptance threshold tau.
/// References are kept in ascending class-id order and are immutable after
/// construction except for tau.
class ReferenceSet {
public:
    ReferenceSet() = default;
    explicit ReferenceSet(std::vector<ClassReference> references);

    const std::vector<ClassReference>& references() const { return refs_; }
    std::size_t size() const { return refs_.size(); }
    std::size_t dim() const { return refs_.empty() ? 0 : refs_.front().r.dim(); }

    const ClassReference* find(ClassId cls) const;

    std::optional<double> tau() const { return tau_; }
    void set_tau(double tau);

private:
    std::vector<ClassReference> refs_;
    std::optional<double> tau_;
};

/// Centroid + deviation per class over training embeddings grouped by label.
/// Every class needs at least 2 embeddings (InsufficientClassError otherwise).
/// The returned set has tau unset.
ReferenceSet compute_references(std::span<const Embedding> embeddings,
                                std::span<const ClassId> labels);

/// Rule S: the class whose reference is nearest in plain L2 distance.
/// Ties break toward the lowest class id.
ClassId identify(const Embedding& emb, const ReferenceSet& refs);

/// Rule R's score: s = ||emb - r|| / sigma.
double normalized_distance(const Embedding& emb, const ClassReference& ref);

struct AttributionDecision {
    ClassId candidate;
    double normalized_distance = 0.0;
    bool accepted = false;
    ClassId final_label;  // candidate if accepted, unknown otherwise
};

/// Rule R after rule S: identify the candidate, then accept iff the
/// normalized distance is strictly below tau (s == tau rejects).
/// Throws StateError if tau is unset.
AttributionDecision decide(const Embedding& emb, const ReferenceSet& refs);

/// Binary format: magic "OSSA-REFS", version byte, u32 class count, u32 dim,
/// per class (u32 id, u32 n, f64 sigma, f64[dim] r), then f64 tau (NaN when
/// unset).
void save_references(std::ostream& out, const ReferenceSet& refs);
void save_references(const std::string& path, const ReferenceSet& refs);
ReferenceSet load_references(std::istream& in);
ReferenceSet load_references(const std::string& path);

}  // namespace ossa
