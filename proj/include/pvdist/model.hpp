#pragma once

#include <stdexcept>

namespace pvdist {

/// Model parameters shared by every distribution query: the space dimension and
/// the point-process intensity (points per unit d-volume).
struct ModelParams {
    int d = 2;
    double lambda = 1.0;
};

/// Throws std::invalid_argument unless d >= 1 and lambda > 0.
inline void validate(const ModelParams& m) {
    if (m.d < 1)
        throw std::invalid_argument("ModelParams: dimension must be >= 1");
    if (!(m.lambda > 0.0))
        throw std::invalid_argument("ModelParams: intensity must be > 0");
}

}  // namespace pvdist
