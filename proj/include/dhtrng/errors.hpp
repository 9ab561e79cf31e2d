#pragma once

#include <stdexcept>
#include <string>

namespace dhtrng {

// Invalid configuration or parameter domain.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The event queue ran dry or the netlist reached a dead state.
class SimulationFault : public std::runtime_error {
public:
    explicit SimulationFault(const std::string& what) : std::runtime_error(what) {}
};

// Input stream shorter than the minimum a statistical test requires.
class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dhtrng
