#include "rsdle/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rsdle/diagnostics.hpp"
#include "rsdle/error.hpp"

namespace rsdle {

namespace {

using State = std::array<double, 2>;  // (u, h)

class ProfileSystem {
public:
    ProfileSystem(const PrescribedCharacterIC& spec, const GasModel& model)
        : sum_(0.5 * (spec.alpha0 + spec.beta0)),
          diff_(spec.alpha0 - spec.beta0),
          quarter_(0.25 * (model.gamma - 1.0)),
          m_(static_cast<double>(model.m)) {}

    void check(double r, const State& y) const {
        const double u = y[0];
        const double h = y[1];
        if (!std::isfinite(u) || !std::isfinite(h)) throw SonicSingularity(r);
        if (h < 0.0) throw NegativeSoundSpeed(r);
        if (std::abs(u * u - h * h) < kSonicIntegrationTolerance * (u * u + h * h))
            throw SonicSingularity(r);
    }

    State rhs(double r, const State& y) const {
        const double u = y[0];
        const double h = y[1];
        const double denom = r * (u * u - h * h);
        return {sum_ + m_ * h * h * u / denom, quarter_ * (diff_ - 2.0 * m_ * h * u * u / denom)};
    }

    State step(double r, const State& y, double dr) const {
        auto axpy = [](const State& a, double c, const State& b) {
            return State{a[0] + c * b[0], a[1] + c * b[1]};
        };
        const State k1 = rhs(r, y);
        const State k2 = rhs(r + 0.5 * dr, axpy(y, 0.5 * dr, k1));
        const State k3 = rhs(r + 0.5 * dr, axpy(y, 0.5 * dr, k2));
        const State k4 = rhs(r + dr, axpy(y, dr, k3));
        return {y[0] + dr / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + dr / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
    }

    /// Advances y from r_from to r_to in substeps no longer than max_step.
    State integrate(double r_from, double r_to, State y, double max_step) const {
        const double span = r_to - r_from;
        if (span == 0.0) return y;
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_step - 1e-9)));
        const double step_size = span / n;
        double r = r_from;
        for (int i = 0; i < n; ++i) {
            y = this->step(r, y, step_size);
            r = (i + 1 == n) ? r_to : r + step_size;
            check(r, y);
        }
        return y;
    }

private:
    double sum_;
    double diff_;
    double quarter_;
    double m_;
};

}  // namespace

PrimitiveField synthesize_profiles(const PrescribedCharacterIC& spec, const RadialGrid& grid,
                                   const GasModel& model) {
    model.validate();
    if (!(spec.r0 >= grid.inner() && spec.r0 <= grid.outer()))
        throw DomainError("synthesize_profiles: anchor radius outside the grid");
    if (!(spec.r0 > 0.0)) throw DomainError("synthesize_profiles: anchor radius must be positive");
    if (spec.h_c < 0.0) throw NegativeSoundSpeed(spec.r0);

    const ProfileSystem system(spec, model);
    const State anchor{spec.v_a, spec.h_c};
    system.check(spec.r0, anchor);

    const std::size_t n = grid.size();
    const double max_step = grid.dr() / kProfileSubsteps;
    std::vector<State> values(n);

    // First cell at or beyond r0, then sweep outward in both directions.
    const auto centers = grid.centers();
    const std::size_t split = static_cast<std::size_t>(
        std::lower_bound(centers.begin(), centers.end(), spec.r0) - centers.begin());

    State y = anchor;
    double r = spec.r0;
    for (std::size_t j = split; j < n; ++j) {
        y = system.integrate(r, centers[j], y, max_step);
        r = centers[j];
        values[j] = y;
    }
    y = anchor;
    r = spec.r0;
    for (std::size_t j = split; j-- > 0;) {
        y = system.integrate(r, centers[j], y, max_step);
        r = centers[j];
        values[j] = y;
    }

    PrimitiveField field;
    field.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = values[j][0];
        const double h = values[j][1];
        const double rho = density_from_sound_speed(h, model);
        field.rho[j] = rho;
        field.u[j] = u;
        field.p[j] = pressure(rho, model);
        field.h[j] = h;
    }
    return field;
}

PrimitiveField sinusoidal_profiles(const SinusoidalIC& spec, const RadialGrid& grid,
                                   const GasModel& model) {
    model.validate();
    if (spec.eps == 0.0 || !std::isfinite(spec.eps))
        throw DomainError("sinusoidal_profiles: eps must be nonzero");
    if (!(spec.rho_const > 0.0)) throw DomainError("sinusoidal_profiles: rho_const must be positive");

    const PrimitivePoint base = make_primitive(spec.rho_const, 0.0, model);
    PrimitiveField field;
    field.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        PrimitivePoint point = base;
        point.u = std::sin(grid.center(j) - spec.r_left) / spec.eps;
        field.set(j, point);
    }
    return field;
}

double residual_check(const PrimitiveField& field, const PrescribedCharacterIC& spec,
                      const RadialGrid& grid, const GasModel& model) {
    const GradientField g = gradient_variables(field, grid, model);
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {
        worst = std::max({worst, std::abs(g.alpha[j] - spec.alpha0), std::abs(g.beta[j] - spec.beta0)});
    }
    return worst;
}

}  // namespace rsdle
