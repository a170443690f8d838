#pragma once

namespace diffgeo {

// Numeric policy, centralized so grid-dependent slack has a single knob.
// TOL_EXACT guards identities that hold to roundoff on exact jets;
// TOL_NUM absorbs quadrature/interpolation error at the default grid.
inline constexpr double TOL_EXACT = 1e-10;
inline constexpr double TOL_NUM = 1e-6;

// Target for monotone inversion: |f(y) - x| <= TOL_ROOT.
inline constexpr double TOL_ROOT = 1e-13;

// Constructors reject jet grids whose first derivative dips below this.
inline constexpr double DPOS_MIN = 1e-9;

// Highest jet order the symbolic machinery is exercised at.
inline constexpr int K_MAX = 6;

// Default number of grid panels (N+1 uniform nodes on [0,1]).
inline constexpr int DEFAULT_GRID_N = 2048;

}  // namespace diffgeo
