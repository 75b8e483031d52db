#pragma once

#include <stdexcept>
#include <string>

namespace carbon {

// CLI exit codes. Library errors carry the code they map to.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_calibration = 3,
    exit_analytics = 4,
    exit_io = 5,
};

class Error : public std::runtime_error {
public:
    Error(const std::string& msg, int code) : std::runtime_error(msg), code_(code) {}
    int exit_code() const { return code_; }

private:
    int code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg, exit_config) {}
};

struct CalibrationError : Error {
    explicit CalibrationError(const std::string& msg) : Error(msg, exit_calibration) {}
};

struct AnalyticsError : Error {
    explicit AnalyticsError(const std::string& msg) : Error(msg, exit_analytics) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg, exit_io) {}
};

// Thrown when a forward simulation produces a degenerate trajectory
// (non-finite state, non-positive consumption). Carries the period.
class SimulationError : public AnalyticsError {
public:
    SimulationError(const std::string& msg, int period)
        : AnalyticsError(msg + " (period " + std::to_string(period) + ")"), period_(period) {}
    int period() const { return period_; }

private:
    int period_;
};

}  // namespace carbon
