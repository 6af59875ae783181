#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsdle/gas.hpp"
#include "rsdle/grid.hpp"

namespace rsdle {

enum class BoundaryCondition { NeumannZeroGradient, Periodic };

/// Speed entering the time-step restriction.
enum class CflSpeed {
    Characteristic,  ///< max |u| + h
    Advective,       ///< max |u| only, the transport speeds f = g = u
};

enum class TimeIntegrator { SspRk2, SspRk3 };

/// Global uses one max over all interfaces per field, Local uses the pair
/// value at each interface.
enum class DissipationMode { Global, Local };

std::string_view to_string(BoundaryCondition bc);
std::string_view to_string(CflSpeed speed);
std::string_view to_string(TimeIntegrator integrator);
std::string_view to_string(DissipationMode mode);

struct SchemeParams {
    double varrho = 1.0;
    double theta = 1.0;
    double zeta1 = 2.0;
    double zeta2 = 2.0;
    double courant = 0.1;
    CflSpeed cfl_speed = CflSpeed::Characteristic;
    TimeIntegrator integrator = TimeIntegrator::SspRk2;
    DissipationMode dissipation = DissipationMode::Global;
    /// Positivity floor during a run, relative to the largest initial density.
    double density_floor_relative = 1e-12;

    /// Throws ConfigError: 1 <= theta <= 2, 0 < courant < 1/2, varrho > 0.
    void validate() const;
    bool operator==(const SchemeParams&) const = default;
};

/// Weighted variables s = r^m rho and q = r^m rho u, one value per cell.
struct ConservedField {
    std::vector<double> s;
    std::vector<double> q;

    std::size_t size() const noexcept { return s.size(); }
};

inline constexpr std::size_t kGhostCells = 2;

/// values with two ghost cells on each side filled per bc.
std::vector<double> with_ghosts(std::span<const double> values, BoundaryCondition bc);

double minmod2(double a, double b);
double minmod3(double a, double b, double c);

/// Limited slope of each cell from the three candidate differences.
std::vector<double> limited_slopes(std::span<const double> values, const RadialGrid& grid,
                                   const SchemeParams& params, BoundaryCondition bc);

struct InterfaceValues {
    double minus = 0.0;  ///< from the left cell
    double plus = 0.0;   ///< from the right cell
};

/// Quarter-cell linear reconstruction at all size()+1 faces. Face k lies
/// between cells k-1 and k; faces 0 and size() use ghost values and slopes
/// (ghost slopes vanish under Neumann and wrap under Periodic).
std::vector<InterfaceValues> reconstruct_interfaces(std::span<const double> values,
                                                    std::span<const double> slopes,
                                                    const RadialGrid& grid, BoundaryCondition bc);

/// max over adjacent pairs of |zeta1 v_j + zeta2 v_{j+1}|.
double dissipation_coefficient(std::span<const double> speeds, double zeta1, double zeta2);

double numerical_flux(const InterfaceValues& face, double speed_left, double speed_right,
                      double dissipation);

/// -r_j^m times the limited slope of p.
std::vector<double> pressure_gradient_source(std::span<const double> p, const RadialGrid& grid,
                                             const GasModel& model, const SchemeParams& params,
                                             BoundaryCondition bc);

ConservedField conserved_from_primitives(const PrimitiveField& field, const RadialGrid& grid,
                                         const GasModel& model);

/// Throws PositivityError at the first cell whose density is not above floor.
PrimitiveField recover_primitives(const ConservedField& state, const RadialGrid& grid,
                                  const GasModel& model, double density_floor = kDensityFloor);

ConservedField semidiscrete_rhs(const ConservedField& state, const RadialGrid& grid,
                                const GasModel& model, const SchemeParams& params,
                                BoundaryCondition bc, double density_floor = kDensityFloor);

/// Speed below which the step stops shrinking, 1e-12 grid cells per unit time.
double cfl_floor_speed(const RadialGrid& grid);

double cfl_timestep(const PrimitiveField& field, const RadialGrid& grid, const SchemeParams& params);

using RhsEvaluator = std::function<ConservedField(const ConservedField&)>;

ConservedField ssp_rk2_step(const ConservedField& state, double dt, const RhsEvaluator& rhs);
ConservedField ssp_rk3_step(const ConservedField& state, double dt, const RhsEvaluator& rhs);

enum class EventKind { Completed, BlowupDetected, PositivityFailure, NonFinite, StepLimit };

std::string_view to_string(EventKind kind);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::Completed;
    std::optional<std::size_t> cell;
    std::string detail;
};

/// State handed to observers: once before the first step (step 0, dt 0) and
/// after every accepted step.
struct StepView {
    std::size_t step;
    double time;
    double dt;
    bool clipped;
    const ConservedField& state;
    const PrimitiveField& primitives;
};

/// Returning an event stops the run and records it as terminal.
using Observer = std::function<std::optional<Event>(const StepView&)>;

struct AdvanceOptions {
    std::size_t max_steps = 200'000'000;
};

struct AdvanceResult {
    ConservedField state;
    PrimitiveField primitives;
    double time = 0.0;
    std::size_t steps = 0;
    double density_floor = 0.0;
    std::vector<Event> events;

    const Event& terminal() const { return events.back(); }
    bool completed() const { return terminal().kind == EventKind::Completed; }
};

/// Steps to t_end (last step clipped onto it) or until a terminal event.
/// Scheme failures end up in the event log instead of propagating.
AdvanceResult advance(const ConservedField& initial, const RadialGrid& grid, const GasModel& model,
                      const SchemeParams& params, BoundaryCondition bc, double t_end,
                      std::span<const Observer> observers, const AdvanceOptions& options = {});

}  // namespace rsdle
