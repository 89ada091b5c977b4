#pragma once

#include <span>

#include "ossa/types.hpp"

namespace ossa {

/// Euclidean distance ||a - b||_2. Throws DimError on dimension mismatch.
double l2_distance(std::span<const double> a, std::span<const double> b);

/// Squared Euclidean distance ||a - b||_2^2.
double squared_l2_distance(std::span<const double> a, std::span<const double> b);

inline double l2_distance(const Embedding& a, const Embedding& b) {
    return l2_distance(a.view(), b.view());
}

inline double squared_l2_distance(const Embedding& a, const Embedding& b) {
    return squared_l2_distance(a.view(), b.view());
}

double l2_norm(std::span<const double> a);

}  // namespace ossa
