#include "rsdle/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsdle/error.hpp"

namespace rsdle {

std::string_view to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Periodic ? "periodic" : "neumann";
}

std::string_view to_string(CflSpeed speed) {
    return speed == CflSpeed::Advective ? "advective" : "characteristic";
}

std::string_view to_string(TimeIntegrator integrator) {
    return integrator == TimeIntegrator::SspRk3 ? "ssp_rk3" : "ssp_rk2";
}

std::string_view to_string(DissipationMode mode) {
    return mode == DissipationMode::Local ? "local" : "global";
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Completed: return "completed";
        case EventKind::BlowupDetected: return "blowup-detected";
        case EventKind::PositivityFailure: return "positivity-failure";
        case EventKind::NonFinite: return "non-finite";
        case EventKind::StepLimit: return "step-limit";
    }
    return "unknown";
}

void SchemeParams::validate() const {
    if (!(theta >= 1.0 && theta <= 2.0)) throw ConfigError("theta must satisfy 1 <= theta <= 2");
    if (!(courant > 0.0 && courant < 0.5))
        throw ConfigError("courant must satisfy 0 < courant < 1/2 (strict < 1/2)");
    if (!(varrho > 0.0) || !std::isfinite(varrho)) throw ConfigError("varrho must be positive");
    if (!std::isfinite(zeta1) || !std::isfinite(zeta2)) throw ConfigError("zeta1, zeta2 must be finite");
    if (!(density_floor_relative >= 0.0) || !(density_floor_relative < 1.0))
        throw ConfigError("density_floor_relative must lie in [0, 1)");
}

std::vector<double> with_ghosts(std::span<const double> v, BoundaryCondition bc) {
    const std::size_t n = v.size();
    if (n == 0) throw ShapeError("with_ghosts: empty field");
    std::vector<double> e(n + 2 * kGhostCells);
    std::copy(v.begin(), v.end(), e.begin() + kGhostCells);
    if (bc == BoundaryCondition::Periodic) {
        if (n < kGhostCells) throw ShapeError("periodic ghosts need at least two cells");
        e[0] = v[n - 2];
        e[1] = v[n - 1];
        e[n + 2] = v[0];
        e[n + 3] = v[1];
    } else {
        e[0] = e[1] = v[0];
        e[n + 2] = e[n + 3] = v[n - 1];
    }
    return e;
}

namespace {

double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

}  // namespace

double minmod2(double a, double b) {
    return 0.5 * (sign(a) + sign(b)) * std::min(std::abs(a), std::abs(b));
}

double minmod3(double a, double b, double c) { return minmod2(minmod2(a, b), c); }

std::vector<double> limited_slopes(std::span<const double> values, const RadialGrid& grid,
                                   const SchemeParams& params, BoundaryCondition bc) {
    const std::size_t n = values.size();
    const auto e = with_ghosts(values, bc);
    const double dr = grid.dr();
    const double one_sided = params.varrho * params.theta / dr;
    const double central = params.varrho / (2.0 * dr);
    std::vector<double> slopes(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = j + kGhostCells;
        slopes[j] = minmod3(one_sided * (e[i] - e[i - 1]), central * (e[i + 1] - e[i - 1]),
                            one_sided * (e[i + 1] - e[i]));
    }
    return slopes;
}

std::vector<InterfaceValues> reconstruct_interfaces(std::span<const double> values,
                                                    std::span<const double> slopes,
                                                    const RadialGrid& grid, BoundaryCondition bc) {
    const std::size_t n = values.size();
    if (slopes.size() != n) throw ShapeError("reconstruct_interfaces: slope count differs");
    const auto v = with_ghosts(values, bc);
    std::vector<double> sl(n + 2 * kGhostCells, 0.0);
    std::copy(slopes.begin(), slopes.end(), sl.begin() + kGhostCells);
    if (bc == BoundaryCondition::Periodic) {
        sl[1] = slopes[n - 1];
        sl[n + 2] = slopes[0];
    }
    const double quarter = 0.25 * grid.dr();
    std::vector<InterfaceValues> faces(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t left = k + 1;
        const std::size_t right = k + 2;
        faces[k] = {v[left] + quarter * sl[left], v[right] - quarter * sl[right]};
    }
    return faces;
}

double dissipation_coefficient(std::span<const double> speeds, double zeta1, double zeta2) {
    if (speeds.empty()) throw ShapeError("dissipation_coefficient: empty speed sequence");
    double b = 0.0;
    for (std::size_t j = 0; j + 1 < speeds.size(); ++j)
        b = std::max(b, std::abs(zeta1 * speeds[j] + zeta2 * speeds[j + 1]));
    return b;
}

double numerical_flux(const InterfaceValues& face, double speed_left, double speed_right,
                      double dissipation) {
    return 0.25 * (dissipation * (face.minus - face.plus) +
                   (speed_left + speed_right) * (face.minus + face.plus));
}

std::vector<double> pressure_gradient_source(std::span<const double> p, const RadialGrid& grid,
                                             const GasModel& model, const SchemeParams& params,
                                             BoundaryCondition bc) {
    auto source = limited_slopes(p, grid, params, bc);
    for (std::size_t j = 0; j < source.size(); ++j)
        source[j] = -radial_weight(grid.center(j), model.m) * source[j];
    return source;
}

ConservedField conserved_from_primitives(const PrimitiveField& field, const RadialGrid& grid,
                                         const GasModel& model) {
    ConservedField state;
    state.s.resize(field.size());
    state.q.resize(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) {
        const ConservedPoint c = conserved_from_primitive(field.rho[j], field.u[j], grid.center(j), model);
        state.s[j] = c.s;
        state.q[j] = c.q;
    }
    return state;
}

PrimitiveField recover_primitives(const ConservedField& state, const RadialGrid& grid,
                                  const GasModel& model, double density_floor) {
    PrimitiveField field;
    field.resize(state.size());
    for (std::size_t j = 0; j < state.size(); ++j)
        field.set(j, primitive_from_conserved(state.s[j], state.q[j], grid.center(j), model,
                                              density_floor, j));
    return field;
}

namespace {

/// Flux difference -(F_{j+1/2} - F_{j-1/2}) / dr for one conserved field.
std::vector<double> flux_divergence(std::span<const double> values, std::span<const double> ghost_speeds,
                                    const std::vector<double>& dissipation, const RadialGrid& grid,
                                    const SchemeParams& params, BoundaryCondition bc) {
    const std::size_t n = values.size();
    const auto slopes = limited_slopes(values, grid, params, bc);
    const auto faces = reconstruct_interfaces(values, slopes, grid, bc);
    std::vector<double> flux(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double b = dissipation.size() == 1 ? dissipation[0] : dissipation[k];
        flux[k] = numerical_flux(faces[k], ghost_speeds[k + 1], ghost_speeds[k + 2], b);
    }
    std::vector<double> out(n);
    const double inv_dr = 1.0 / grid.dr();
    for (std::size_t j = 0; j < n; ++j) out[j] = -(flux[j + 1] - flux[j]) * inv_dr;
    return out;
}

std::vector<double> dissipation_for(std::span<const double> ghost_speeds, const SchemeParams& params) {
    // Pairs (k+1, k+2) for faces k = 0..n of the ghosted sequence.
    const auto pairs = ghost_speeds.subspan(1, ghost_speeds.size() - 2);
    if (params.dissipation == DissipationMode::Global)
        return {dissipation_coefficient(pairs, params.zeta1, params.zeta2)};
    std::vector<double> local(pairs.size() - 1);
    for (std::size_t k = 0; k < local.size(); ++k)
        local[k] = std::abs(params.zeta1 * pairs[k] + params.zeta2 * pairs[k + 1]);
    return local;
}

}  // namespace

ConservedField semidiscrete_rhs(const ConservedField& state, const RadialGrid& grid,
                                const GasModel& model, const SchemeParams& params,
                                BoundaryCondition bc, double density_floor) {
    if (state.s.size() != grid.size() || state.q.size() != grid.size())
        throw ShapeError("semidiscrete_rhs: state and grid sizes differ");
    const PrimitiveField prim = recover_primitives(state, grid, model, density_floor);

    // f_j = H1(s_j)/s_j and g_j = H2(q_j)/q_j both reduce to u_j, so the s and
    // q dissipation scalars coincide.
    const auto speeds = with_ghosts(prim.u, bc);
    const auto b = dissipation_for(speeds, params);

    ConservedField rate;
    rate.s = flux_divergence(state.s, speeds, b, grid, params, bc);
    rate.q = flux_divergence(state.q, speeds, b, grid, params, bc);
    const auto source = pressure_gradient_source(prim.p, grid, model, params, bc);
    for (std::size_t j = 0; j < rate.q.size(); ++j) rate.q[j] += source[j];
    return rate;
}

double cfl_floor_speed(const RadialGrid& grid) { return 1e-12 * grid.dr(); }

double cfl_timestep(const PrimitiveField& field, const RadialGrid& grid, const SchemeParams& params) {
    double speed = cfl_floor_speed(grid);
    for (std::size_t j = 0; j < field.size(); ++j) {
        double c = std::abs(field.u[j]);
        if (params.cfl_speed == CflSpeed::Characteristic) c += field.h[j];
        speed = std::max(speed, c);
    }
    return params.courant * grid.dr() / speed;
}

namespace {

/// a + c * b, element-wise.
ConservedField axpy(const ConservedField& a, double c, const ConservedField& b) {
    ConservedField out = a;
    for (std::size_t j = 0; j < out.s.size(); ++j) {
        out.s[j] += c * b.s[j];
        out.q[j] += c * b.q[j];
    }
    return out;
}

/// wa * a + wb * b, element-wise.
ConservedField blend(double wa, const ConservedField& a, double wb, const ConservedField& b) {
    ConservedField out = a;
    for (std::size_t j = 0; j < out.s.size(); ++j) {
        out.s[j] = wa * a.s[j] + wb * b.s[j];
        out.q[j] = wa * a.q[j] + wb * b.q[j];
    }
    return out;
}

}  // namespace

ConservedField ssp_rk2_step(const ConservedField& state, double dt, const RhsEvaluator& rhs) {
    const ConservedField stage1 = axpy(state, dt, rhs(state));
    const ConservedField stage2 = axpy(stage1, dt, rhs(stage1));
    return blend(0.5, state, 0.5, stage2);
}

ConservedField ssp_rk3_step(const ConservedField& state, double dt, const RhsEvaluator& rhs) {
    const ConservedField stage1 = axpy(state, dt, rhs(state));
    const ConservedField stage2 = blend(0.75, state, 0.25, axpy(stage1, dt, rhs(stage1)));
    return blend(1.0 / 3.0, state, 2.0 / 3.0, axpy(stage2, dt, rhs(stage2)));
}

namespace {

std::optional<std::size_t> first_non_finite(const ConservedField& state) {
    for (std::size_t j = 0; j < state.size(); ++j)
        if (!std::isfinite(state.s[j]) || !std::isfinite(state.q[j])) return j;
    return std::nullopt;
}

double run_density_floor(const ConservedField& initial, const RadialGrid& grid, const GasModel& model,
                         const SchemeParams& params) {
    double peak = 0.0;
    for (std::size_t j = 0; j < initial.size(); ++j)
        peak = std::max(peak, initial.s[j] / radial_weight(grid.center(j), model.m));
    return params.density_floor_relative * peak;
}

}  // namespace

AdvanceResult advance(const ConservedField& initial, const RadialGrid& grid, const GasModel& model,
                      const SchemeParams& params, BoundaryCondition bc, double t_end,
                      std::span<const Observer> observers, const AdvanceOptions& options) {
    model.validate();
    params.validate();
    if (!(t_end >= 0.0)) throw DomainError("advance: t_end must be nonnegative");

    AdvanceResult result;
    result.state = initial;
    result.density_floor = run_density_floor(initial, grid, model, params);
    const double floor = result.density_floor;

    auto record_failure = [&](double t, EventKind kind, std::optional<std::size_t> cell,
                              std::string detail) {
        result.events.push_back(Event{t, kind, cell, std::move(detail)});
    };

    if (auto bad = first_non_finite(result.state)) {
        record_failure(0.0, EventKind::NonFinite, bad, "non-finite initial state");
        return result;
    }
    try {
        result.primitives = recover_primitives(result.state, grid, model, floor);
    } catch (const PositivityError& e) {
        record_failure(0.0, EventKind::PositivityFailure, e.cell(), e.what());
        return result;
    }

    auto notify = [&](double dt, bool clipped) -> bool {
        const StepView view{result.steps, result.time, dt, clipped, result.state, result.primitives};
        for (const Observer& observer : observers) {
            if (auto event = observer(view)) {
                result.events.push_back(std::move(*event));
                return false;
            }
        }
        return true;
    };
    if (!notify(0.0, false)) return result;

    const RhsEvaluator rhs = [&](const ConservedField& state) {
        return semidiscrete_rhs(state, grid, model, params, bc, floor);
    };

    while (result.time < t_end) {
        if (result.steps >= options.max_steps) {
            record_failure(result.time, EventKind::StepLimit, std::nullopt, "step limit reached");
            return result;
        }
        double dt = cfl_timestep(result.primitives, grid, params);
        bool clipped = false;
        if (result.time + dt >= t_end) {
            dt = t_end - result.time;
            clipped = true;
        }

        ConservedField next;
        PrimitiveField next_prim;
        try {
            next = params.integrator == TimeIntegrator::SspRk3 ? ssp_rk3_step(result.state, dt, rhs)
                                                               : ssp_rk2_step(result.state, dt, rhs);
            if (auto bad = first_non_finite(next)) {
                record_failure(result.time + dt, EventKind::NonFinite, bad, "non-finite state after step");
                return result;
            }
            next_prim = recover_primitives(next, grid, model, floor);
        } catch (const PositivityError& e) {
            std::ostringstream os;
            os << e.what() << "; blow-up candidate";
            record_failure(result.time + dt, EventKind::PositivityFailure, e.cell(), os.str());
            return result;
        }

        result.state = std::move(next);
        result.primitives = std::move(next_prim);
        result.time = clipped ? t_end : result.time + dt;
        ++result.steps;
        if (!notify(dt, clipped)) return result;
    }
    result.events.push_back(Event{result.time, EventKind::Completed, std::nullopt, "reached t_end"});
    return result;
}

}  // namespace rsdle
