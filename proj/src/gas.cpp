#include "rsdle/gas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsdle/error.hpp"

namespace rsdle {

void GasModel::validate() const {
    if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("gas model: K must be positive");
    if (!(gamma > 1.0) || !std::isfinite(gamma))
        throw DomainError("gas model: gamma must exceed 1");
    if (m < 0 || m > 2) throw DomainError("gas model: geometry index m must be 0, 1 or 2");
}

std::string_view to_string(RegimeClass regime) {
    switch (regime) {
        case RegimeClass::OutwardSupersonic: return "outward-supersonic";
        case RegimeClass::Subsonic: return "subsonic";
        case RegimeClass::InwardSupersonic: return "inward-supersonic";
        case RegimeClass::Degenerate: return "degenerate";
    }
    return "unknown";
}

double sound_speed(double rho, const GasModel& model) {
    if (rho < 0.0) throw DomainError("sound_speed: negative density");
    if (rho == 0.0) return 0.0;
    return std::sqrt(model.K * model.gamma) * std::pow(rho, 0.5 * (model.gamma - 1.0));
}

double density_from_sound_speed(double h, const GasModel& model) {
    if (h < 0.0) throw DomainError("density_from_sound_speed: negative sound speed");
    if (h == 0.0) return 0.0;
    return std::pow(h * h / (model.K * model.gamma), 1.0 / (model.gamma - 1.0));
}

double pressure(double rho, const GasModel& model) {
    if (rho < 0.0) throw DomainError("pressure: negative density");
    return model.K * std::pow(rho, model.gamma);
}

PrimitivePoint make_primitive(double rho, double u, const GasModel& model) {
    return {rho, u, pressure(rho, model), sound_speed(rho, model)};
}

SpeedPair characteristic_speeds(double u, double h) { return {u - h, u + h}; }

RiemannPair riemann_invariants(double u, double h, const GasModel& model) {
    const double scaled = 2.0 * h / (model.gamma - 1.0);
    return {u - scaled, u + scaled};
}

double default_regime_tolerance(const SpeedPair& speeds) {
    return 1e-9 * std::max({1.0, std::abs(speeds.c1), std::abs(speeds.c2)});
}

RegimeClass classify_regime(const SpeedPair& speeds, double tol) {
    if (speeds.c1 > tol) return RegimeClass::OutwardSupersonic;
    if (speeds.c2 < -tol) return RegimeClass::InwardSupersonic;
    if (speeds.c1 < -tol && speeds.c2 > tol) return RegimeClass::Subsonic;
    return RegimeClass::Degenerate;
}

RegimeClass classify_regime(const SpeedPair& speeds) {
    return classify_regime(speeds, default_regime_tolerance(speeds));
}

double radial_weight(double r, int m) {
    switch (m) {
        case 0: return 1.0;
        case 1: return r;
        case 2: return r * r;
        default: return std::pow(r, m);
    }
}

ConservedPoint conserved_from_primitive(double rho, double u, double r, const GasModel& model) {
    const double s = radial_weight(r, model.m) * rho;
    return {s, s * u};
}

PrimitivePoint primitive_from_conserved(double s, double q, double r, const GasModel& model,
                                        double density_floor, std::size_t cell) {
    if (!(r > 0.0)) throw DomainError("primitive_from_conserved: radius must be positive");
    const double rho = s / radial_weight(r, model.m);
    // NaN lands here too.
    if (!(rho > density_floor)) throw PositivityError(cell, r, rho);
    return make_primitive(rho, q / s, model);
}

}  // namespace rsdle
