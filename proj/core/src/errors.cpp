#include "charter/errors.hpp"

namespace charter {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_budget: return "InvalidBudget";
        case Errc::invalid_duration: return "InvalidDuration";
        case Errc::invalid_threshold: return "InvalidThreshold";
        case Errc::duplicate_criterion: return "DuplicateCriterion";
        case Errc::duplicate_skill: return "DuplicateSkill";
        case Errc::not_drafted: return "NotDrafted";
        case Errc::resources_unavailable: return "ResourcesUnavailable";
        case Errc::not_active: return "NotActive";
        case Errc::already_terminal: return "AlreadyTerminal";
        case Errc::missing_criterion: return "MissingCriterion";
        case Errc::unknown_contract: return "UnknownContract";
        case Errc::contract_not_active: return "ContractNotActive";
        case Errc::negative_delta: return "NegativeDelta";
        case Errc::token_mismatch: return "TokenMismatch";
        case Errc::not_activated: return "NotActivated";
        case Errc::unsorted_thresholds: return "UnsortedThresholds";
        case Errc::empty_children: return "EmptyChildren";
        case Errc::non_positive_weight: return "NonPositiveWeight";
        case Errc::invalid_cap_multiplier: return "InvalidCapMultiplier";
        case Errc::conservation_violation: return "ConservationViolation";
        case Errc::temporal_overrun: return "TemporalOverrun";
        case Errc::parent_not_active: return "ParentNotActive";
        case Errc::not_terminal: return "NotTerminal";
        case Errc::already_released: return "AlreadyReleased";
        case Errc::invalid_pattern: return "InvalidPattern";
        case Errc::empty_traces: return "EmptyTraces";
        case Errc::parse_error: return "ParseError";
        case Errc::validation_error: return "ValidationError";
        case Errc::io_error: return "IoError";
        case Errc::mismatch: return "Mismatch";
    }
    return "UnknownError";
}

} // namespace charter
