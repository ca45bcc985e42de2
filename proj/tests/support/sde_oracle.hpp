#pragma once

// Verhulst and Landau-Ginzburg solutions written out in their own closed
// forms, with the time integral on the same trapezoid nodes as the solver.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// xi e^{E_t} / (1 + xi int_0^t e^{E_s} ds), E_t = b t + c B_t
inline std::vector<double> verhulst(double xi, double b, double c, double dt_fine,
                                    const std::vector<double>& fine_b, std::size_t refine) {
    std::vector<double> out;
    long double integral = 0.0L;
    long double prev = 1.0L;
    for (std::size_t k = 0; k < fine_b.size(); ++k) {
        const long double e = std::exp(static_cast<long double>(b) * k * dt_fine +
                                       static_cast<long double>(c) * fine_b[k]);
        if (k > 0) {
            integral += 0.5L * dt_fine * (prev + e);
        }
        prev = e;
        if (k % refine == 0) {
            out.push_back(static_cast<double>(xi * e / (1.0L + xi * integral)));
        }
    }
    return out;
}

// xi e^{E_t} / sqrt(1 + 2 xi^2 int_0^t e^{2 E_s} ds)
inline std::vector<double> landau_ginzburg(double xi, double b, double c, double dt_fine,
                                           const std::vector<double>& fine_b,
                                           std::size_t refine) {
    std::vector<double> out;
    long double integral = 0.0L;
    long double prev = 1.0L;
    for (std::size_t k = 0; k < fine_b.size(); ++k) {
        const long double e = std::exp(static_cast<long double>(b) * k * dt_fine +
                                       static_cast<long double>(c) * fine_b[k]);
        if (k > 0) {
            integral += 0.5L * dt_fine * (prev * prev + e * e);
        }
        prev = e;
        if (k % refine == 0) {
            out.push_back(
                static_cast<double>(xi * e / std::sqrt(1.0L + 2.0L * xi * xi * integral)));
        }
    }
    return out;
}

} // namespace oracle
