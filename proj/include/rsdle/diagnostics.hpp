#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rsdle/gas.hpp"
#include "rsdle/grid.hpp"

namespace rsdle {

/// R/C label of one characteristic family at one cell. Boundary marks an
/// exact zero; Invalid marks a near-sonic cell that was masked out.
enum class WaveCharacter { Rarefaction, Compression, Boundary, Invalid };

std::string_view to_string(WaveCharacter character);
WaveCharacter classify_character(double gradient_value);

/// Cell-centered alpha (2-family) and beta (1-family) with their labels.
/// char1 follows the sign of beta, char2 the sign of alpha.
struct GradientField {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<WaveCharacter> char1;
    std::vector<WaveCharacter> char2;

    std::size_t size() const noexcept { return alpha.size(); }
    bool valid(std::size_t j) const { return char1[j] != WaveCharacter::Invalid; }
};

/// Second-order centered differences in the interior and second-order
/// one-sided differences at both ends. Needs at least 3 values.
std::vector<double> centered_derivative(std::span<const double> values, double dr);

/// Relative band |c| <= kSonicMaskTolerance * (|u| + h) inside which a cell
/// counts as sonic for the gradient variables.
inline constexpr double kSonicMaskTolerance = 1e-6;

/// Gradient variables from unlimited centered differences of u and h.
/// Throws SonicDiagnostic listing every cell whose c1 or c2 is sonic.
GradientField gradient_variables(const PrimitiveField& field, const RadialGrid& grid,
                                 const GasModel& model);

/// Same as gradient_variables but sonic cells are labeled Invalid and
/// carry NaN instead of throwing.
GradientField gradient_variables_masked(const PrimitiveField& field, const RadialGrid& grid,
                                        const GasModel& model);

/// Ingredients and result of the finite-time singularity bound.
struct CompressionBound {
    double S1 = 0.0;  ///< inf c1(., 0)
    double S2 = 0.0;  ///< sup c2(., 0)
    double r_star = 0.0;
    double alpha0 = 0.0;  ///< alpha(r_star, 0)
    double M = 0.0;
    double eps = 0.0;
    double t_star = 0.0;
};

struct SingularityBound {
    double eps = 0.0;
    double t_star = 0.0;
};

/// M = m S2^2 / (2 r_star S1).
double strong_compression_threshold(double S1, double S2, double r_star, int m);

/// eps = 1 - M/|alpha0| and t_star = -1/(eps alpha0). Requires alpha0 < -M.
SingularityBound singularity_time_bound(double alpha0_at_rstar, double M);

/// Scans every cell as a candidate r_star and returns the smallest t_star.
/// Throws NotStrongCompression unless the field is outward supersonic with
/// alpha, beta < 0 everywhere and at least one cell exceeds the threshold.
CompressionBound best_compression_bound(const PrimitiveField& initial, const GradientField& grad,
                                        const RadialGrid& grid, const GasModel& model);

/// One stored field state. dt is the step that produced it (0 initially).
struct Snapshot {
    double time = 0.0;
    double dt = 0.0;
    bool clipped = false;
    PrimitiveField field;
};

using SpaceTimeMask = std::function<bool(double t, double r)>;

/// Largest violation of c1(r,t) >= min c1(.,0) and c2(r,t) <= max c2(.,0)
/// over the points the mask accepts. The first snapshot is the initial data.
double speed_bounds_check(std::span<const Snapshot> trajectory, const RadialGrid& grid,
                          const SpaceTimeMask& mask);

enum class BlowupTrigger { GradientThreshold, PositivityFailure, NonFinite, StepCollapse };

std::string_view to_string(BlowupTrigger trigger);

struct BlowupReport {
    bool detected = false;
    double t_detect = 0.0;
    std::size_t cell = 0;
    BlowupTrigger trigger = BlowupTrigger::GradientThreshold;
};

inline constexpr double kDefaultBlowupFactor = 50.0;

/// Streaming form of detect_blowup, fed one state at a time.
///
/// The first observation fixes the reference max|u_r| and the first nonzero
/// step fixes the reference dt. Clipped final steps are ignored by the
/// step-collapse test.
class BlowupDetector {
public:
    explicit BlowupDetector(const RadialGrid& grid, double threshold_factor = kDefaultBlowupFactor);

    std::optional<BlowupReport> observe(double time, double dt, bool clipped,
                                        const PrimitiveField& field);

    double threshold() const noexcept { return threshold_; }

private:
    double dr_;
    double factor_;
    bool primed_ = false;
    double threshold_ = 0.0;
    double reference_dt_ = 0.0;
};

BlowupReport detect_blowup(std::span<const Snapshot> snapshots, const RadialGrid& grid,
                           double threshold_factor = kDefaultBlowupFactor);

struct CurvePoint {
    double u = 0.0;
    double h = 0.0;
};

std::vector<CurvePoint> invariant_curve(const PrimitiveField& field);

/// Row-major (time x radius) matrix.
struct Heatmap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

/// Stacks equally sized rows; throws ShapeError on ragged input.
Heatmap heatmap_accumulate(std::span<const std::vector<double>> rows);

}  // namespace rsdle
