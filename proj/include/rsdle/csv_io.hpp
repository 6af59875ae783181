#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsdle/diagnostics.hpp"
#include "rsdle/grid.hpp"

namespace rsdle {

inline constexpr std::string_view kSnapshotHeader = "r,rho,u,p,h,alpha,beta,c1,c2";
inline constexpr std::string_view kCurveHeader = "u,h";
inline constexpr std::string_view kHeatmapCorner = "t\\r";
/// printf format of every number written: 17 significant digits, scientific.
inline constexpr const char* kNumberFormat = "%.16e";

std::string format_number(double value);

void write_snapshot(const std::filesystem::path& path, const RadialGrid& grid, const PrimitiveField& field,
                    const GradientField& gradients);

/// First row: the corner label followed by the radii. Then one row per time.
void write_heatmap(const std::filesystem::path& path, const Heatmap& map, std::span<const double> times,
                   std::span<const double> radii);

void write_curve(const std::filesystem::path& path, std::span<const CurvePoint> curve);

struct SnapshotTable {
    std::vector<double> r, rho, u, p, h, alpha, beta, c1, c2;

    std::size_t size() const noexcept { return r.size(); }
};

struct HeatmapTable {
    std::vector<double> times;
    std::vector<double> radii;
    Heatmap values;
};

/// Readers throw IoError naming the offending line.
SnapshotTable read_snapshot(const std::filesystem::path& path);
HeatmapTable read_heatmap(const std::filesystem::path& path);
std::vector<CurvePoint> read_curve(const std::filesystem::path& path);

/// Writes `content` byte for byte; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rsdle
