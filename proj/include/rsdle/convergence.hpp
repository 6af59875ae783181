#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsdle/config.hpp"

namespace rsdle {

/// Relative L1 level treated as round-off.
inline constexpr double kRoundoffLevel = 1e-13;

/// Averages consecutive blocks of fine cells onto a grid with `coarse_cells`
/// cells. Throws ShapeError unless the fine count is a multiple.
std::vector<double> restrict_average(std::span<const double> fine, std::size_t coarse_cells);

/// dr * sum |a - b|.
double l1_distance(std::span<const double> a, std::span<const double> b, double dr);

/// log(e_coarse / e_fine) / log(ratio).
double observed_order(double e_coarse, double e_fine, double ratio);

struct ConvergenceRow {
    std::string field;
    std::size_t coarse = 0;
    std::size_t fine = 0;
    /// L1 distance between the coarse solution and the restricted fine one.
    double l1_error = 0.0;
    /// Absent on the first pair of each field.
    std::optional<double> order;
    /// The error of this pair or the previous one is at round-off level.
    bool exact = false;
};

struct ConvergenceStudy {
    std::vector<std::size_t> meshes;
    std::vector<ConvergenceRow> rows;

    /// Rows of one field, coarse to fine.
    std::vector<ConvergenceRow> field_rows(const std::string& field) const;
};

/// Throws DomainError unless there are at least two meshes, each a proper
/// multiple of the one before.
void validate_meshes(std::span<const std::size_t> meshes);

/// Runs `base` on each mesh (concurrently) to base.t_end and compares
/// successive meshes on rho and u. Throws ConvergenceAborted naming the first
/// mesh that did not finish.
ConvergenceStudy convergence_study(const CaseConfig& base, std::span<const std::size_t> meshes);

/// Columns field,coarse,fine,l1_error,order. The order column is empty on
/// the first pair and reads "exact" at round-off level.
std::string format_convergence_csv(const ConvergenceStudy& study);
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceStudy& study);

}  // namespace rsdle
