#include "fbmsde/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fbmsde {

GridSpec::GridSpec(std::size_t n, double horizon) : n_(n), horizon_(horizon) {
    if (n < 2) {
        throw std::invalid_argument("GridSpec: n must be >= 2, got " + std::to_string(n));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("GridSpec: horizon T must be positive and finite");
    }
}

GridSpec GridSpec::refined(std::size_t factor) const {
    if (factor == 0) {
        throw std::invalid_argument("GridSpec::refined: factor must be positive");
    }
    return GridSpec(n_ * factor, horizon_);
}

GridSpec GridSpec::coarsened(std::size_t factor) const {
    if (factor == 0 || n_ % factor != 0) {
        throw std::invalid_argument("GridSpec::coarsened: n = " + std::to_string(n_) +
                                    " is not divisible by " + std::to_string(factor));
    }
    return GridSpec(n_ / factor, horizon_);
}

} // namespace fbmsde
