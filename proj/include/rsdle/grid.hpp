#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsdle/gas.hpp"

namespace rsdle {

/// Uniform cell-centered grid on [inner, outer].
class RadialGrid {
public:
    RadialGrid(double inner, double outer, std::size_t cells);

    double inner() const noexcept { return inner_; }
    double outer() const noexcept { return outer_; }
    std::size_t size() const noexcept { return centers_.size(); }
    double dr() const noexcept { return dr_; }

    double center(std::size_t j) const { return centers_[j]; }
    /// Left face of cell j; face(size()) is the outer boundary.
    double face(std::size_t j) const { return inner_ + static_cast<double>(j) * dr_; }
    std::span<const double> centers() const noexcept { return centers_; }

    bool operator==(const RadialGrid&) const = default;

private:
    double inner_;
    double outer_;
    double dr_;
    std::vector<double> centers_;
};

/// Cell-centered (rho, u, p, h).
struct PrimitiveField {
    std::vector<double> rho;
    std::vector<double> u;
    std::vector<double> p;
    std::vector<double> h;

    std::size_t size() const noexcept { return rho.size(); }
    PrimitivePoint at(std::size_t j) const { return {rho[j], u[j], p[j], h[j]}; }

    void resize(std::size_t n);
    void set(std::size_t j, const PrimitivePoint& point);

    /// Fills p and h through the closure.
    static PrimitiveField from_density_velocity(std::span<const double> rho,
                                                std::span<const double> u,
                                                const GasModel& model);
};

}  // namespace rsdle
