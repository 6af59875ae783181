#include "rsdle/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsdle/error.hpp"

namespace rsdle {

std::string_view to_string(WaveCharacter character) {
    switch (character) {
        case WaveCharacter::Rarefaction: return "R";
        case WaveCharacter::Compression: return "C";
        case WaveCharacter::Boundary: return "0";
        case WaveCharacter::Invalid: return "invalid";
    }
    return "unknown";
}

WaveCharacter classify_character(double gradient_value) {
    if (std::isnan(gradient_value)) return WaveCharacter::Invalid;
    if (gradient_value > 0.0) return WaveCharacter::Rarefaction;
    if (gradient_value < 0.0) return WaveCharacter::Compression;
    return WaveCharacter::Boundary;
}

std::vector<double> centered_derivative(std::span<const double> v, double dr) {
    const std::size_t n = v.size();
    if (n < 3) throw ShapeError("centered_derivative needs at least 3 values");
    std::vector<double> d(n);
    const double inv2 = 1.0 / (2.0 * dr);
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) * inv2;
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2;
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv2;
    return d;
}

namespace {

bool is_sonic(double c, double u, double h) {
    return std::abs(c) <= kSonicMaskTolerance * (std::abs(u) + h);
}

GradientField compute_gradients(const PrimitiveField& field, const RadialGrid& grid,
                                const GasModel& model, std::vector<std::size_t>* sonic) {
    const std::size_t n = field.size();
    if (n != grid.size()) throw ShapeError("gradient_variables: field and grid sizes differ");
    const auto u_r = centered_derivative(field.u, grid.dr());
    const auto h_r = centered_derivative(field.h, grid.dr());
    const double k = 2.0 / (model.gamma - 1.0);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    GradientField g;
    g.alpha.resize(n);
    g.beta.resize(n);
    g.char1.resize(n);
    g.char2.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = field.u[j];
        const double h = field.h[j];
        const SpeedPair c = characteristic_speeds(u, h);
        if (is_sonic(c.c1, u, h) || is_sonic(c.c2, u, h)) {
            if (sonic) sonic->push_back(j);
            g.alpha[j] = g.beta[j] = nan;
            g.char1[j] = g.char2[j] = WaveCharacter::Invalid;
            continue;
        }
        const double geom = static_cast<double>(model.m) / grid.center(j) * h * u;
        g.alpha[j] = u_r[j] + k * h_r[j] + geom / c.c2;
        g.beta[j] = u_r[j] - k * h_r[j] - geom / c.c1;
        g.char1[j] = classify_character(g.beta[j]);
        g.char2[j] = classify_character(g.alpha[j]);
    }
    return g;
}

}  // namespace

GradientField gradient_variables(const PrimitiveField& field, const RadialGrid& grid,
                                 const GasModel& model) {
    std::vector<std::size_t> sonic;
    GradientField g = compute_gradients(field, grid, model, &sonic);
    if (!sonic.empty()) throw SonicDiagnostic(std::move(sonic));
    return g;
}

GradientField gradient_variables_masked(const PrimitiveField& field, const RadialGrid& grid,
                                        const GasModel& model) {
    return compute_gradients(field, grid, model, nullptr);
}

double strong_compression_threshold(double S1, double S2, double r_star, int m) {
    if (!(S1 > 0.0) || !(S2 >= S1) || !(r_star > 0.0) || m < 0)
        throw DomainError("strong_compression_threshold: need 0 < S1 <= S2, r_star > 0, m >= 0");
    return static_cast<double>(m) * S2 * S2 / (2.0 * r_star * S1);
}

SingularityBound singularity_time_bound(double alpha0, double M) {
    if (!(alpha0 < -M) || !(M >= 0.0))
        throw NotStrongCompression("singularity_time_bound: alpha0 must lie strictly below -M");
    const double eps = 1.0 - M / std::abs(alpha0);
    return {eps, -1.0 / (eps * alpha0)};
}

CompressionBound best_compression_bound(const PrimitiveField& initial, const GradientField& grad,
                                        const RadialGrid& grid, const GasModel& model) {
    const std::size_t n = initial.size();
    if (grad.size() != n || grid.size() != n) throw ShapeError("best_compression_bound: sizes differ");
    double S1 = std::numeric_limits<double>::infinity();
    double S2 = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const SpeedPair c = characteristic_speeds(initial.u[j], initial.h[j]);
        S1 = std::min(S1, c.c1);
        S2 = std::max(S2, c.c2);
        if (!grad.valid(j) || !(grad.alpha[j] < 0.0) || !(grad.beta[j] < 0.0))
            throw NotStrongCompression("initial data is not compressive in both families at cell " +
                                       std::to_string(j));
    }
    if (!(S1 > 0.0)) throw NotStrongCompression("initial data is not outward supersonic");

    std::optional<CompressionBound> best;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = grid.center(j);
        const double M = strong_compression_threshold(S1, S2, r, model.m);
        if (!(grad.alpha[j] < -M)) continue;
        const SingularityBound b = singularity_time_bound(grad.alpha[j], M);
        if (!best || b.t_star < best->t_star) best = CompressionBound{S1, S2, r, grad.alpha[j], M, b.eps, b.t_star};
    }
    if (!best) throw NotStrongCompression("no cell satisfies alpha(r*, 0) < -M");
    return *best;
}

double speed_bounds_check(std::span<const Snapshot> trajectory, const RadialGrid& grid,
                          const SpaceTimeMask& mask) {
    if (trajectory.empty()) return 0.0;
    const PrimitiveField& initial = trajectory.front().field;
    double min_c1 = std::numeric_limits<double>::infinity();
    double max_c2 = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < initial.size(); ++j) {
        min_c1 = std::min(min_c1, initial.u[j] - initial.h[j]);
        max_c2 = std::max(max_c2, initial.u[j] + initial.h[j]);
    }
    double violation = 0.0;
    for (const Snapshot& snap : trajectory) {
        for (std::size_t j = 0; j < snap.field.size(); ++j) {
            if (!mask(snap.time, grid.center(j))) continue;
            const double c1 = snap.field.u[j] - snap.field.h[j];
            const double c2 = snap.field.u[j] + snap.field.h[j];
            violation = std::max({violation, min_c1 - c1, c2 - max_c2});
        }
    }
    return violation;
}

std::string_view to_string(BlowupTrigger trigger) {
    switch (trigger) {
        case BlowupTrigger::GradientThreshold: return "gradient-threshold";
        case BlowupTrigger::PositivityFailure: return "positivity-failure";
        case BlowupTrigger::NonFinite: return "non-finite";
        case BlowupTrigger::StepCollapse: return "step-collapse";
    }
    return "unknown";
}

BlowupDetector::BlowupDetector(const RadialGrid& grid, double threshold_factor)
    : dr_(grid.dr()), factor_(threshold_factor) {
    if (!(threshold_factor > 1.0)) throw DomainError("blow-up threshold factor must exceed 1");
}

std::optional<BlowupReport> BlowupDetector::observe(double time, double dt, bool clipped,
                                                    const PrimitiveField& field) {
    const std::size_t n = field.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(field.rho[j]) || !std::isfinite(field.u[j]) ||
            !std::isfinite(field.h[j]))
            return BlowupReport{true, time, j, BlowupTrigger::NonFinite};
    }

    const auto u_r = centered_derivative(field.u, dr_);
    std::size_t arg = 0;
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(u_r[j]) > peak) {
            peak = std::abs(u_r[j]);
            arg = j;
        }
    }
    if (!primed_) {
        primed_ = true;
        threshold_ = factor_ * std::max(1.0, peak);
        return std::nullopt;
    }
    if (peak > threshold_) return BlowupReport{true, time, arg, BlowupTrigger::GradientThreshold};

    if (dt > 0.0 && !clipped) {
        if (reference_dt_ == 0.0) {
            reference_dt_ = dt;
        } else if (dt < 1e-12 * reference_dt_) {
            return BlowupReport{true, time, arg, BlowupTrigger::StepCollapse};
        }
    }
    return std::nullopt;
}

BlowupReport detect_blowup(std::span<const Snapshot> snapshots, const RadialGrid& grid,
                           double threshold_factor) {
    BlowupDetector detector(grid, threshold_factor);
    for (const Snapshot& snap : snapshots) {
        if (auto report = detector.observe(snap.time, snap.dt, snap.clipped, snap.field))
            return *report;
    }
    return {};
}

std::vector<CurvePoint> invariant_curve(const PrimitiveField& field) {
    std::vector<CurvePoint> curve(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) curve[j] = {field.u[j], field.h[j]};
    return curve;
}

Heatmap heatmap_accumulate(std::span<const std::vector<double>> rows) {
    Heatmap map;
    if (rows.empty()) return map;
    map.rows = rows.size();
    map.cols = rows.front().size();
    map.values.reserve(map.rows * map.cols);
    for (const auto& row : rows) {
        if (row.size() != map.cols) throw ShapeError("heatmap rows have different lengths");
        map.values.insert(map.values.end(), row.begin(), row.end());
    }
    return map;
}

}  // namespace rsdle
