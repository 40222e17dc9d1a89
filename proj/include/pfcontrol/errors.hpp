#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pfc {

/// A grid, parameter set or scenario violates one of its invariants.
class InvalidSpec : public std::invalid_argument {
public:
    InvalidSpec(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Two mesh functions that must share a shape do not.
class ShapeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time-stepping sweep produced a non-finite value.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& solver, std::size_t level)
        : std::runtime_error(solver + " produced a non-finite value at time level " +
                             std::to_string(level)),
          level_(level) {}

    std::size_t level() const noexcept { return level_; }

private:
    std::size_t level_;
};

}  // namespace pfc
