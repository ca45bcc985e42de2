#pragma once

// Reference values evaluated once in high precision (mpmath, 30 digits) and
// frozen here.
namespace frozen {

inline constexpr double cov_1_3_h075 = 1.6838626489802209;     // (1 + 3^1.5 - 2^1.5) / 2
inline constexpr double cov_2_2_h06 = 2.2973967099940700;      // 2^1.2
inline constexpr double rho_0_h075 = 4.1655924453468797;       // (2 2^1.5 - 8) / (-0.5625)
inline constexpr double phi_10_1_h075 = 0.037048387306743585;     // 10^-1.5 (4 - 2^1.5)

} // namespace frozen
