#include "rsdle/error.hpp"

#include <sstream>

namespace rsdle {

namespace {

std::string describe_positivity(std::size_t cell, double radius, double density) {
    std::ostringstream os;
    os.precision(17);
    os << "positivity failure at cell " << cell << " (r=" << radius << "): density " << density
       << " below floor";
    return os.str();
}

std::string describe_cells(const std::vector<std::size_t>& cells) {
    std::ostringstream os;
    os << "sonic cells in gradient diagnostics:";
    const std::size_t shown = cells.size() < 16 ? cells.size() : 16;
    for (std::size_t i = 0; i < shown; ++i) os << ' ' << cells[i];
    if (shown < cells.size()) os << " ... (" << cells.size() << " total)";
    return os.str();
}

std::string at_radius(const char* what, double r) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at r=" << r;
    return os.str();
}

}  // namespace

PositivityError::PositivityError(std::size_t cell, double radius, double density)
    : Error(describe_positivity(cell, radius, density)),
      cell_(cell),
      radius_(radius),
      density_(density) {}

SonicSingularity::SonicSingularity(double radius)
    : Error(at_radius("sonic singularity in initial-data integration", radius)), radius_(radius) {}

NegativeSoundSpeed::NegativeSoundSpeed(double radius)
    : Error(at_radius("sound speed driven negative in initial-data integration", radius)),
      radius_(radius) {}

SonicDiagnostic::SonicDiagnostic(std::vector<std::size_t> cells)
    : Error(describe_cells(cells)), cells_(std::move(cells)) {}

UnsupportedGamma::UnsupportedGamma(double gamma)
    : Error("Riccati transport is only available for gamma = 3, got " + std::to_string(gamma)) {}

SonicOnPath::SonicOnPath(double time)
    : Error("characteristic speed crosses zero along the path at t=" + std::to_string(time)),
      time_(time) {}

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

ConvergenceAborted::ConvergenceAborted(std::size_t cells, double time, const std::string& reason)
    : Error("convergence study aborted on the " + std::to_string(cells) + "-cell mesh at t=" +
            std::to_string(time) + ": " + reason),
      cells_(cells),
      time_(time) {}

}  // namespace rsdle
