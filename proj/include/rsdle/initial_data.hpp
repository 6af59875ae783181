#pragma once

#include "rsdle/gas.hpp"
#include "rsdle/grid.hpp"

namespace rsdle {

/// Constant gradient variables plus the anchor state (v_a, h_c) at r0.
struct PrescribedCharacterIC {
    double alpha0 = 0.0;
    double beta0 = 0.0;
    double v_a = 0.0;
    double h_c = 0.0;
    double r0 = 0.0;

    bool operator==(const PrescribedCharacterIC&) const = default;
};

/// rho = rho_const, u = sin(r - r_left) / eps.
struct SinusoidalIC {
    double eps = 1.0;
    double rho_const = 1.0;
    double r_left = 0.0;

    bool operator==(const SinusoidalIC&) const = default;
};

/// Substeps of the four-stage integrator per grid cell.
inline constexpr int kProfileSubsteps = 4;

/// Relative sonic band: |u^2 - h^2| < kSonicIntegrationTolerance (u^2 + h^2).
inline constexpr double kSonicIntegrationTolerance = 1e-8;

/// Integrates the radial (u, h) system implied by constant alpha, beta from
/// r0 to every cell center, then closes rho and p. Throws SonicSingularity or
/// NegativeSoundSpeed with the offending radius.
PrimitiveField synthesize_profiles(const PrescribedCharacterIC& spec, const RadialGrid& grid,
                                   const GasModel& model);

PrimitiveField sinusoidal_profiles(const SinusoidalIC& spec, const RadialGrid& grid,
                                   const GasModel& model);

/// max over interior cells of |alpha - alpha0| and |beta - beta0|.
double residual_check(const PrimitiveField& field, const PrescribedCharacterIC& spec,
                      const RadialGrid& grid, const GasModel& model);

}  // namespace rsdle
