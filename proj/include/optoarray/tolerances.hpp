#pragma once

namespace optoarray::tolerance {

// Minimum eigenvalue of sigma + i*Omega accepted as physical.
inline constexpr double physicality = 1e-9;
// Agreement between two algebraic routes to the same quantity.
inline constexpr double formula = 1e-9;
// Negative radicand in the negativity formula that is still clamped to zero.
inline constexpr double radicand = 1e-10;
// Relative Lyapunov residual ||A S + S A^T + D||_F / ||D||_F.
inline constexpr double lyapunov_residual = 1e-10;

}  // namespace optoarray::tolerance
