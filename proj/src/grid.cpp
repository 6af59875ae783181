#include "rsdle/grid.hpp"

#include <cmath>

#include "rsdle/error.hpp"

namespace rsdle {

RadialGrid::RadialGrid(double inner, double outer, std::size_t cells)
    : inner_(inner), outer_(outer), dr_(0.0) {
    if (!(inner >= 0.0) || !std::isfinite(outer) || !(outer > inner))
        throw DomainError("radial grid: need 0 <= inner < outer");
    if (cells == 0) throw DomainError("radial grid: need at least one cell");
    dr_ = (outer - inner) / static_cast<double>(cells);
    centers_.resize(cells);
    for (std::size_t j = 0; j < cells; ++j)
        centers_[j] = inner + (static_cast<double>(j) + 0.5) * dr_;
}

void PrimitiveField::resize(std::size_t n) {
    rho.assign(n, 0.0);
    u.assign(n, 0.0);
    p.assign(n, 0.0);
    h.assign(n, 0.0);
}

void PrimitiveField::set(std::size_t j, const PrimitivePoint& point) {
    rho[j] = point.rho;
    u[j] = point.u;
    p[j] = point.p;
    h[j] = point.h;
}

PrimitiveField PrimitiveField::from_density_velocity(std::span<const double> rho,
                                                     std::span<const double> u,
                                                     const GasModel& model) {
    if (rho.size() != u.size()) throw ShapeError("density and velocity lengths differ");
    PrimitiveField field;
    field.resize(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) field.set(j, make_primitive(rho[j], u[j], model));
    return field;
}

}  // namespace rsdle
