#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsdle/characteristics.hpp"
#include "rsdle/config.hpp"
#include "rsdle/diagnostics.hpp"
#include "rsdle/scheme.hpp"

namespace rsdle {

/// Stored values per trajectory across the four recorded fields.
inline constexpr std::size_t kTrajectoryValueBudget = std::size_t{1} << 25;
/// Fraction of the detection time kept for the transition audit.
inline constexpr double kPreBreakdownFraction = 0.9;

struct SimulationOptions {
    /// Run after the built-in observers; any of them may end the run.
    std::vector<Observer> extra_observers;
    bool record_trajectory = true;
    bool run_audit = true;
    AdvanceOptions advance;
};

struct SnapshotRecord {
    double time = 0.0;
    PrimitiveField field;
    GradientField gradients;
};

struct AuditSummary {
    std::size_t paths_per_family = 0;
    /// Upper end of the audited window.
    double t_window = 0.0;
    std::vector<TransitionEvent> events;
    TransitionAudit audit;
    /// The transition tables are only proven for gamma = 3.
    bool heuristic = false;

    bool ran() const noexcept { return paths_per_family > 0; }
};

struct SimulationResult {
    CaseConfig config;
    RadialGrid grid;
    PrimitiveField initial;
    std::vector<double> targets;
    std::vector<SnapshotRecord> snapshots;
    AdvanceResult run;
    std::optional<BlowupReport> blowup;
    std::optional<FieldTrajectory> trajectory;
    AuditSummary audit;
};

/// Snapshot targets k t_end / (S - 1), k = 0..S-1.
std::vector<double> snapshot_targets(double t_end, std::size_t count);

/// Trajectory frame cap for a grid, combining the configured limit with
/// kTrajectoryValueBudget.
std::size_t trajectory_frame_cap(const CaseConfig& config);

/// Evenly spaced cell-midpoint origins used by the audit.
std::vector<double> audit_origins(const RadialGrid& grid, std::size_t count);

/// Runs the case in memory. Initial-data failures propagate as exceptions;
/// scheme failures end up in run.events.
SimulationResult simulate(const CaseConfig& config, const SimulationOptions& options = {});

enum class RunStatus { Completed, Blowup, Error };

std::string_view to_string(RunStatus status);
RunStatus status_of(EventKind terminal);

struct RunOptions {
    bool record_timings = false;
    SimulationOptions simulation;
};

struct RunOutcome {
    RunStatus status = RunStatus::Error;
    std::filesystem::path output_dir;
    std::string error;
    std::optional<SimulationResult> result;
};

inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kManifestFormat = "rsdle-run/1";

/// Creates and probes `output_dir` before any computation (IoError), removes
/// artifacts of earlier runs, simulates and writes every artifact plus the
/// manifest. Library errors during the run become status Error with a
/// manifest; I/O errors propagate.
RunOutcome run_case(const CaseConfig& config, const std::filesystem::path& output_dir,
                    const RunOptions& options = {});

/// Throws IoError when the directory cannot be created or written.
void ensure_writable_directory(const std::filesystem::path& dir);

/// Artifact file names a run may produce, as found in `dir`.
std::vector<std::filesystem::path> run_artifacts(const std::filesystem::path& dir);

}  // namespace rsdle
