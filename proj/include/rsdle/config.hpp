#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rsdle/diagnostics.hpp"
#include "rsdle/gas.hpp"
#include "rsdle/grid.hpp"
#include "rsdle/initial_data.hpp"
#include "rsdle/scheme.hpp"

namespace rsdle {

struct GridSpec {
    double inner = 0.0;
    double outer = 1.0;
    std::size_t cells = 512;

    RadialGrid make() const { return RadialGrid(inner, outer, cells); }
    bool operator==(const GridSpec&) const = default;
};

using InitialCondition = std::variant<PrescribedCharacterIC, SinusoidalIC>;

struct DiagnosticToggles {
    double blowup_factor = kDefaultBlowupFactor;
    /// Characteristic origins per family for the transition audit; 0 disables it.
    std::size_t audit_paths = 32;
    /// Upper bound on stored trajectory frames for the audit.
    std::size_t trajectory_frames = 4096;

    bool operator==(const DiagnosticToggles&) const = default;
};

inline constexpr std::size_t kMinCells = 16;
inline constexpr std::size_t kMinSnapshots = 2;
inline constexpr std::size_t kDeskScaleCells = 512;
inline constexpr std::size_t kPaperScaleCells = 8192;

struct CaseConfig {
    std::string case_id = "custom";
    GasModel model;
    GridSpec grid;
    BoundaryCondition bc = BoundaryCondition::NeumannZeroGradient;
    InitialCondition ic = PrescribedCharacterIC{};
    SchemeParams params;
    double t_end = 1.0;
    std::size_t snapshots = 100;
    DiagnosticToggles diagnostics;
    /// Empty means "choose at run time".
    std::string output_dir;

    /// Throws ConfigError.
    void validate() const;
    bool operator==(const CaseConfig&) const = default;
};

std::vector<std::string> builtin_case_ids();

/// Throws LookupError listing the valid ids.
CaseConfig builtin_case(std::string_view id, bool paper_scale = false);

/// Flat `key = value` text, one key per line, `#` starts a comment.
/// Throws ConfigError with the offending line number.
CaseConfig parse_config(std::string_view text);

CaseConfig load_config(const std::filesystem::path& path);

/// Text that parse_config maps back to an equal CaseConfig.
std::string format_config(const CaseConfig& config);

/// Resolves a CLI argument: a builtin id first, then a config file.
CaseConfig resolve_case(std::string_view id_or_path, bool paper_scale = false);

PrimitiveField initial_field(const CaseConfig& config, const RadialGrid& grid);

}  // namespace rsdle
