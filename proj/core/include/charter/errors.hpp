#pragma once

#include <stdexcept>
#include <string>

namespace charter {

/// Error codes for precondition and validation failures. Decisions that are
/// ordinary outcomes (a denied skill call, an insufficient pool) are returned
/// as values, not thrown.
enum class Errc {
    // contract validation / lifecycle
    invalid_budget,
    invalid_duration,
    invalid_threshold,
    duplicate_criterion,
    duplicate_skill,
    not_drafted,
    resources_unavailable,
    not_active,
    already_terminal,
    missing_criterion,
    unknown_contract,

    // accounting
    contract_not_active,
    negative_delta,
    token_mismatch,
    not_activated,
    unsorted_thresholds,

    // delegation
    empty_children,
    non_positive_weight,
    invalid_cap_multiplier,
    conservation_violation,
    temporal_overrun,
    parent_not_active,
    not_terminal,
    already_released,

    // simulation / cli
    invalid_pattern,
    empty_traces,
    parse_error,
    validation_error,
    io_error,
    mismatch,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace charter
