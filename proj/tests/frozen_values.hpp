#pragma once

// Values produced by oracles/h_norm_oracle.py (dense phase grid plus
// Nelder-Mead polishing over the full torus, numpy/scipy).

namespace frozen {

inline constexpr double kHNorm_d2_1_2 = 2.828427124746;     // 2 sqrt 2
inline constexpr double kHNorm_d2_1_3 = 2.732050807569;     // 1 + sqrt 3
inline constexpr double kHNorm_d2_2_5 = 2.618033988750;     // golden ratio squared
inline constexpr double kHNorm_d3_1_4 = 3.863703305156;
inline constexpr double kHNorm_d3_3_7 = 3.188232838133;
inline constexpr double kHNorm_d2_70_169 = 2.591051417792;

}  // namespace frozen
