#pragma once

#include <stdexcept>
#include <string>

namespace sphaar {

// Error taxonomy shared by all modules. Each class corresponds to one
// failure category surfaced through the CLI as a machine-readable type.

class InputDomainError : public std::invalid_argument {
public:
    explicit InputDomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

class LookupError : public std::out_of_range {
public:
    explicit LookupError(const std::string& msg) : std::out_of_range(msg) {}
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed container or image file.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// External denoiser failure; carries the process diagnostics verbatim.
class PluginError : public std::runtime_error {
public:
    PluginError(const std::string& msg, std::string diagnostics)
        : std::runtime_error(diagnostics.empty() ? msg : msg + "\n" + diagnostics),
          diagnostics_(std::move(diagnostics)) {}
    const std::string& diagnostics() const noexcept { return diagnostics_; }

private:
    std::string diagnostics_;
};

// Non-finite iterate detected by the solver.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, int iteration)
        : std::runtime_error(msg + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_ = 0;
};

}  // namespace sphaar
