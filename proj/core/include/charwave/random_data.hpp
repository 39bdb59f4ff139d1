#pragma once

#include <cstdint>

#include "charwave/cauchy.hpp"
#include "charwave/nullcone.hpp"
#include "charwave/nullplane.hpp"

namespace charwave {

// Band-limited trigonometric data with coefficients uniform in [-1, 1]
// damped by 1 / (1 + level sum). Same seed, same data.
PlaneCharData random_plane_data(const GridSpec& grid, std::uint64_t seed);

// Data carries a (1 - s^2)^3 factor times a quartic polynomial in s and
// phi-modes up to 2, so that g_phi / sqrt(1 - s^2) stays regular at the poles.
ConeCharData random_cone_data(const GridSpec& grid, std::uint64_t seed);

// Random psi and psi_t; P, Q, R are the exact gradient of psi, so the
// constraints hold up to the derivative truncation error.
CauchyState random_cauchy_state(const GridSpec& grid, std::uint64_t seed);

}  // namespace charwave
