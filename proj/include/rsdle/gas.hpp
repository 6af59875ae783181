#pragma once

#include <cstddef>
#include <string_view>

namespace rsdle {

/// Default absolute density floor for conserved -> primitive recovery.
inline constexpr double kDensityFloor = 1e-12;

/// Polytropic closure p = K rho^gamma in radial geometry of index m.
///
/// m = 1 is cylindrical and m = 2 spherical. m = 0 (planar) is accepted by
/// validate() so tests can switch the geometric terms off; configuration
/// files only accept 1 or 2.
struct GasModel {
    double K = 1.0;
    double gamma = 3.0;
    int m = 1;

    void validate() const;
    bool operator==(const GasModel&) const = default;
};

struct PrimitivePoint {
    double rho = 0.0;
    double u = 0.0;
    double p = 0.0;
    double h = 0.0;
};

struct SpeedPair {
    double c1 = 0.0;  ///< u - h
    double c2 = 0.0;  ///< u + h
};

struct RiemannPair {
    double z = 0.0;
    double w_inv = 0.0;
};

struct ConservedPoint {
    double s = 0.0;  ///< r^m rho
    double q = 0.0;  ///< r^m rho u
};

enum class RegimeClass { OutwardSupersonic, Subsonic, InwardSupersonic, Degenerate };

std::string_view to_string(RegimeClass regime);

double sound_speed(double rho, const GasModel& model);
double density_from_sound_speed(double h, const GasModel& model);
double pressure(double rho, const GasModel& model);

/// Builds a point whose p and h are computed through the closure.
PrimitivePoint make_primitive(double rho, double u, const GasModel& model);

SpeedPair characteristic_speeds(double u, double h);
RiemannPair riemann_invariants(double u, double h, const GasModel& model);

/// Sonic band used when no tolerance is given: 1e-9 * max(1, |c1|, |c2|).
double default_regime_tolerance(const SpeedPair& speeds);
RegimeClass classify_regime(const SpeedPair& speeds, double tol);
RegimeClass classify_regime(const SpeedPair& speeds);

/// r^m, with r^0 == 1 for every r.
double radial_weight(double r, int m);

ConservedPoint conserved_from_primitive(double rho, double u, double r, const GasModel& model);

/// Inverse of conserved_from_primitive. Throws PositivityError (carrying
/// `cell`) when s / r^m does not exceed `density_floor`.
PrimitivePoint primitive_from_conserved(double s, double q, double r, const GasModel& model,
                                        double density_floor = kDensityFloor,
                                        std::size_t cell = 0);

}  // namespace rsdle
