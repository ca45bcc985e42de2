#pragma once

#include <cstddef>

namespace fbmsde {

// Uniform observation grid t_k = k T / n, k = 0..n.
class GridSpec {
public:
    // Throws std::invalid_argument unless n >= 2 and T > 0 (finite).
    GridSpec(std::size_t n, double horizon);

    std::size_t n() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return horizon_ / static_cast<double>(n_); }
    std::size_t points() const noexcept { return n_ + 1; }

    double time(std::size_t k) const noexcept {
        return static_cast<double>(k) * horizon_ / static_cast<double>(n_);
    }

    // Grid with `factor` times as many subintervals on the same horizon.
    GridSpec refined(std::size_t factor) const;
    // Inverse of refined(); throws unless n is divisible by factor.
    GridSpec coarsened(std::size_t factor) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t n_;
    double horizon_;
};

} // namespace fbmsde
