#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdle {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Density fell below the positivity floor during primitive recovery.
class PositivityError : public Error {
public:
    PositivityError(std::size_t cell, double radius, double density);

    std::size_t cell() const noexcept { return cell_; }
    double radius() const noexcept { return radius_; }
    double density() const noexcept { return density_; }

private:
    std::size_t cell_;
    double radius_;
    double density_;
};

/// Initial-data integration hit the sonic line u^2 = h^2.
class SonicSingularity : public Error {
public:
    explicit SonicSingularity(double radius);
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

class NegativeSoundSpeed : public Error {
public:
    explicit NegativeSoundSpeed(double radius);
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

/// Gradient variables requested at cells where c1 or c2 vanishes.
class SonicDiagnostic : public Error {
public:
    explicit SonicDiagnostic(std::vector<std::size_t> cells);
    const std::vector<std::size_t>& cells() const noexcept { return cells_; }

private:
    std::vector<std::size_t> cells_;
};

class NotStrongCompression : public Error {
public:
    using Error::Error;
};

class UnsupportedGamma : public Error {
public:
    explicit UnsupportedGamma(double gamma);
};

class SonicOnPath : public Error {
public:
    explicit SonicOnPath(double time);
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Configuration problem. line() is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& message);
    explicit ConfigError(const std::string& message) : ConfigError(0, message) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A convergence-study mesh ended without reaching t_end.
class ConvergenceAborted : public Error {
public:
    ConvergenceAborted(std::size_t cells, double time, const std::string& reason);
    std::size_t cells() const noexcept { return cells_; }
    double time() const noexcept { return time_; }

private:
    std::size_t cells_;
    double time_;
};

}  // namespace rsdle
