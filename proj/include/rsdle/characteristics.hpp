#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rsdle/diagnostics.hpp"
#include "rsdle/gas.hpp"
#include "rsdle/grid.hpp"
#include "rsdle/scheme.hpp"

namespace rsdle {

/// One = slow family (speed c1, gradient variable beta, flow map xi).
/// Two = fast family (speed c2, gradient variable alpha, flow map psi).
enum class Family { One, Two };

std::string_view to_string(Family family);

struct FieldSample {
    double c1 = 0.0;
    double c2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Time series of (c1, c2, alpha, beta) on a fixed grid with bilinear
/// interpolation in (r, t). Radii beyond the outermost cell centers take the
/// boundary cell value.
class FieldTrajectory {
public:
    explicit FieldTrajectory(RadialGrid grid);

    void add_frame(double time, const PrimitiveField& field, const GradientField& gradients);
    void add_frame(double time, std::vector<double> c1, std::vector<double> c2,
                   std::vector<double> alpha, std::vector<double> beta);

    const RadialGrid& grid() const noexcept { return grid_; }
    std::size_t frames() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }

    FieldSample sample(double time, double r) const;

    /// Drops every odd-indexed frame.
    void decimate();
    /// Field value of a single stored frame at radius r.
    FieldSample sample_frame(std::size_t frame, double r) const;

private:
    struct Frame {
        std::vector<double> c1, c2, alpha, beta;
    };

    RadialGrid grid_;
    std::vector<double> times_;
    std::vector<Frame> data_;
};

/// Observer that appends a frame whenever at least `min_spacing` has passed
/// since the last stored frame, up to `horizon`. min_spacing = 0 stores
/// every solver step.
Observer make_trajectory_recorder(FieldTrajectory& trajectory, const GasModel& model,
                                  double min_spacing, double horizon);

/// Observer that stores every solver step until `max_frames` frames are held,
/// then halves the stored set and doubles its step stride, so memory stays
/// bounded on long runs.
Observer make_strided_recorder(FieldTrajectory& trajectory, const GasModel& model,
                               std::size_t max_frames, double horizon);

enum class PathExit { None, Inner, Outer };

struct PathSample {
    double t = 0.0;
    double r = 0.0;
    double c_own = 0.0;    ///< c1 for family One, c2 for family Two
    double gvar = 0.0;     ///< beta for One, alpha for Two
    double partner = 0.0;  ///< alpha for One, beta for Two
    double c1 = 0.0;
    double c2 = 0.0;
};

struct CharacteristicPath {
    Family family = Family::One;
    double r_origin = 0.0;
    std::vector<PathSample> samples;
    PathExit exit = PathExit::None;
};

/// Integrates dr/dt = c_family(r, t) across each stored frame interval with
/// the classical four-stage rule. The path stops at the last sample inside
/// the grid when it leaves.
CharacteristicPath advance_flow_map(Family family, double r_origin, const FieldTrajectory& trajectory);

struct RiccatiPrediction {
    std::vector<double> time;
    std::vector<double> predicted;
    std::optional<double> divergence_time;

    /// Linear interpolation of the prediction.
    double at(double t) const;
};

/// Magnitude multiple of max(1, |g0|) at which the prediction counts as
/// divergent.
inline constexpr double kRiccatiDivergenceCap = 1e8;

/// Integrates the family's Riccati transport
///   d(beta o xi)/dt  = -beta^2  + m c2^2 / (2 r c1) (alpha - beta)
///   d(alpha o psi)/dt = -alpha^2 + m c1^2 / (2 r c2) (beta - alpha)
/// from the path's first field-sampled value, with the partner variable and
/// speeds taken from the path samples. gamma = 3 only.
RiccatiPrediction riccati_along_path(const CharacteristicPath& path, const GasModel& model);

/// Closed-form solution of dg/dt = -g^2: g0 / (1 + g0 t).
double decoupled_riccati(double g0, double t);

/// Space-time region bounded by psi(a, t) on the left and xi(b, t) on the right.
struct InfluenceDomain {
    CharacteristicPath left;
    CharacteristicPath right;
    double t_begin = 0.0;
    double t_end = 0.0;
    std::optional<double> t_max;

    double left_at(double t) const;
    double right_at(double t) const;
    bool contains(double t, double r) const;
};

InfluenceDomain influence_domain(double a, double b, const FieldTrajectory& trajectory);

enum class TransitionDirection { RtoC, CtoR };

std::string_view to_string(TransitionDirection direction);

struct TransitionEvent {
    Family family = Family::One;
    double t_event = 0.0;
    double r_event = 0.0;
    TransitionDirection direction = TransitionDirection::RtoC;
    int partner_sign = 0;
    RegimeClass regime = RegimeClass::Degenerate;
    /// True when the bracketing samples sit in different regimes.
    bool mixed = false;
};

/// Relative sign tolerance: a sign only counts where |gvar| exceeds this
/// multiple of the field scale.
inline constexpr double kTransitionSignTolerance = 1e-6;

/// Strict sign changes of gvar between consecutive significant samples.
/// field_scale <= 0 means max |gvar| over the path.
std::vector<TransitionEvent> transition_events(const CharacteristicPath& path, double field_scale = 0.0);

/// The single direction the wave-character tables allow, if any applies.
std::optional<TransitionDirection> allowed_direction(RegimeClass regime, Family family, int partner_sign);

/// Events violating the transition table of `regime`.
std::vector<TransitionEvent> check_transition_rules(std::span<const TransitionEvent> events,
                                                    RegimeClass regime);

struct TransitionAudit {
    std::size_t judged = 0;
    std::size_t unjudged = 0;
    std::vector<TransitionEvent> violations;
};

/// Judges each event against the table of its own regime; mixed-regime,
/// degenerate and zero-partner events are counted as unjudged.
TransitionAudit audit_transitions(std::span<const TransitionEvent> events);

/// Largest |d(c_own)/dt - (+/-) m/(4r) (c2^2 - c1^2)| along the path, with the
/// time derivative taken by centered differences of the samples. Exact
/// transport law for gamma = 3 only.
double speed_transport_mismatch(const CharacteristicPath& path, const GasModel& model);

}  // namespace rsdle
