#include <stdexcept>

#include "fbmsde/fbm.hpp"

namespace fbmsde {

std::vector<double> first_increments(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("first_increments: need at least 2 values");
    }
    std::vector<double> out(values.size() - 1);
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        out[k] = values[k + 1] - values[k];
    }
    return out;
}

std::vector<double> second_order_increments(std::span<const double> values) {
    if (values.size() < 3) {
        throw std::invalid_argument("second_order_increments: need at least 3 values");
    }
    std::vector<double> out(values.size() - 2);
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        out[k - 1] = values[k + 1] - 2.0 * values[k] + values[k - 1];
    }
    return out;
}

} // namespace fbmsde
