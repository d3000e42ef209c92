#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "charter/resource_vector.hpp"

namespace charter {

/// Monotonic timestamps and durations in milliseconds. The clock is always
/// injected; nothing in the engine reads wall-clock time.
using Timestamp = std::int64_t;
using DurationMs = std::int64_t;

/// Input specification: schema reference, named validation predicates and an
/// ordered list of preprocessing identifiers. Execution of the preprocessing
/// steps is out of scope; the identifiers are carried opaquely.
struct InputSpec {
    std::string schema_id;
    std::vector<std::string> validation_rules;
    std::vector<std::string> preprocessing_ids;
};

/// Output specification: schema reference, minimum acceptable quality in
/// [0,1] and an opaque formatting requirement.
struct OutputSpec {
    std::string schema_id;
    double q_min = 0.0;
    std::string format_id;
};

/// One capability the contract permits, with an optional hard cap on how
/// often it may be invoked. cost_estimate and success_prob inform routing
/// decisions; they are estimates, not charges.
struct SkillSpec {
    std::string skill_id;
    ResourceVector cost_estimate;
    double success_prob = 1.0;
    std::optional<std::int64_t> call_limit;
};

/// Duration is the operational primitive: the deadline is always derived as
/// t_start + tau and never stored. t_start is set exactly once, at activation.
struct TemporalConstraint {
    std::optional<Timestamp> t_start;
    DurationMs tau = 0;

    std::optional<Timestamp> deadline() const {
        if (!t_start) return std::nullopt;
        return *t_start + tau;
    }
};

struct SuccessCriterion {
    std::string criterion_id;
    double weight = 0.0;
};

/// Weighted fulfillment conditions. Weights are normalized to sum to 1 when
/// the contract is drafted; theta is interpreted against normalized weights.
struct SuccessCriteria {
    std::vector<SuccessCriterion> criteria;
    double theta = 1.0;
};

/// Events that end the contract regardless of fulfillment. Resource
/// exhaustion and duration expiry are unconditional for every contract; only
/// cancellation handling and the fatal-error set are configurable.
/// fatal_error_codes is a configuration hook: callers that observe one of
/// these codes signal cancellation.
struct TerminationConditions {
    bool accept_cancel_signal = true;
    std::set<std::string> fatal_error_codes;

    static constexpr bool resource_exhaustion = true;
    static constexpr bool duration_expiry = true;
};

enum class Lifecycle { drafted, active, fulfilled, violated, expired, terminated };

const char* to_string(Lifecycle state) noexcept;
bool is_terminal(Lifecycle state) noexcept;

/// Why a contract reached its terminal state. `triggered` names every guard
/// that held at the deciding observation, not only the one that won on
/// precedence.
struct TerminalCause {
    std::string reason;
    std::vector<std::string> triggered;
};

/// An agent contract: input/output specifications, permitted skills, a
/// multi-dimensional budget, a duration limit, weighted success criteria and
/// termination conditions, plus lifecycle state.
struct Contract {
    std::string contract_id;
    std::optional<std::string> parent_id;
    InputSpec input;
    OutputSpec output;
    std::vector<SkillSpec> skills;
    ResourceVector budget;
    TemporalConstraint temporal;
    SuccessCriteria success;
    TerminationConditions termination;

    Lifecycle state = Lifecycle::drafted;
    std::optional<TerminalCause> terminal_cause;

    bool active() const { return state == Lifecycle::active; }
    bool terminal() const { return is_terminal(state); }
    const SkillSpec* find_skill(const std::string& skill_id) const;
};

/// The full seven-tuple specification handed to draft_contract. contract_id
/// may be left empty for the registry to assign.
struct ContractSpec {
    std::string contract_id;
    std::optional<std::string> parent_id;
    InputSpec input;
    OutputSpec output;
    std::vector<SkillSpec> skills;
    ResourceVector budget;
    DurationMs tau = 0;
    SuccessCriteria success;
    TerminationConditions termination;
};

/// What the governor can see between calls: cumulative consumption, the
/// current time, whether a cancel signal is pending, and the truth value of
/// every success criterion.
struct Observation {
    ResourceVector consumption;
    Timestamp now = 0;
    bool cancel = false;
    std::map<std::string, bool> criterion_truth;
};

/// Outcome of one guard evaluation. next == active means stay.
struct GuardDecision {
    Lifecycle next = Lifecycle::active;
    std::vector<std::string> triggered;
    double score = 0.0;

    bool stay() const { return next == Lifecycle::active; }
};

struct SuccessScore {
    double score = 0.0;
    bool fulfilled = false;
};

enum class SkillDenial { not_in_skill_set, skill_limit_reached };

struct SkillDecision {
    bool allowed = false;
    std::optional<SkillDenial> reason;
};

const char* to_string(SkillDenial reason) noexcept;

/// Validates the specification and returns a DRAFTED contract with success
/// weights normalized to sum to 1. No resources are reserved yet.
///
/// Throws InvalidBudget, InvalidDuration, InvalidThreshold,
/// DuplicateCriterion or DuplicateSkill.
Contract draft_contract(const ContractSpec& spec);

/// DRAFTED -> ACTIVE. `resources_available` is the already-evaluated
/// availability predicate (e.g. whether the parent's remaining budget covers
/// this contract). Sets t_start = now.
void activate(Contract& contract, Timestamp now, bool resources_available);

/// Evaluates every lifecycle guard against one observation and returns
/// exactly one decision. Precedence when several guards hold simultaneously:
/// cancel > violation > expiry > fulfillment; a breached contract is never
/// recorded as fulfilled. The violation comparison is inclusive (c >= b), so
/// consuming exactly the budget is a breach; a zero bound only breaches once
/// the dimension is actually used.
GuardDecision evaluate_guards(const Contract& contract, const Observation& obs);

/// Weighted fulfillment score over normalized weights. Every criterion must
/// have a truth value; a missing entry is an error, never treated as false.
SuccessScore evaluate_success(const SuccessCriteria& success,
                              const std::map<std::string, bool>& criterion_truth);

/// Breached budget dimensions for an observation against a budget: every
/// bounded dimension where consumption has reached the bound.
std::vector<std::string> breached_dimensions(const ResourceVector& consumption,
                                             const ResourceVector& budget);

/// Gate for one skill invocation. Denies skills outside S and skills whose
/// call limit has been reached.
SkillDecision authorize_skill(const Contract& contract, const std::string& skill_id,
                              std::int64_t prior_calls_of_skill);

/// Applies a decision produced by evaluate_guards. Terminal states absorb:
/// transitioning out of one throws AlreadyTerminal. A stay decision is a
/// no-op. Returns true when the contract reached a terminal state.
bool apply_transition(Contract& contract, const GuardDecision& decision);

} // namespace charter
