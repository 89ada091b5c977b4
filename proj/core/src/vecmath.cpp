#include "ossa/vecmath.hpp"

#include <cmath>
#include <string>

#include "ossa/errors.hpp"

namespace ossa {

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimError("vector dims differ: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
    }
}

}  // namespace

double squared_l2_distance(std::span<const double> a, std::span<const double> b) {
    check_dims(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_l2_distance(a, b));
}

double l2_norm(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace ossa
