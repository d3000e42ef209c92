#include "charter/contract.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "charter/errors.hpp"

namespace charter {

const char* to_string(Lifecycle state) noexcept {
    switch (state) {
        case Lifecycle::drafted: return "DRAFTED";
        case Lifecycle::active: return "ACTIVE";
        case Lifecycle::fulfilled: return "FULFILLED";
        case Lifecycle::violated: return "VIOLATED";
        case Lifecycle::expired: return "EXPIRED";
        case Lifecycle::terminated: return "TERMINATED";
    }
    return "?";
}

bool is_terminal(Lifecycle state) noexcept {
    return state == Lifecycle::fulfilled || state == Lifecycle::violated ||
           state == Lifecycle::expired || state == Lifecycle::terminated;
}

const char* to_string(SkillDenial reason) noexcept {
    switch (reason) {
        case SkillDenial::not_in_skill_set: return "NotInSkillSet";
        case SkillDenial::skill_limit_reached: return "SkillLimitReached";
    }
    return "?";
}

const SkillSpec* Contract::find_skill(const std::string& skill_id) const {
    for (const auto& skill : skills)
        if (skill.skill_id == skill_id) return &skill;
    return nullptr;
}

namespace {

void validate_spec(const ContractSpec& spec) {
    if (!spec.budget.all_non_negative())
        raise(Errc::invalid_budget, "budget quantities must be non-negative: " + spec.budget.to_string());
    if (spec.tau <= 0)
        raise(Errc::invalid_duration, "tau must be positive, got " + std::to_string(spec.tau) + "ms");
    if (spec.success.theta < 0.0 || spec.success.theta > 1.0)
        raise(Errc::invalid_threshold, "theta outside [0,1]: " + std::to_string(spec.success.theta));
    if (spec.output.q_min < 0.0 || spec.output.q_min > 1.0)
        raise(Errc::invalid_threshold, "q_min outside [0,1]: " + std::to_string(spec.output.q_min));

    std::set<std::string> criterion_ids;
    double weight_sum = 0.0;
    for (const auto& criterion : spec.success.criteria) {
        if (!criterion_ids.insert(criterion.criterion_id).second)
            raise(Errc::duplicate_criterion, criterion.criterion_id);
        if (criterion.weight < 0.0)
            raise(Errc::validation_error, "negative weight on criterion " + criterion.criterion_id);
        weight_sum += criterion.weight;
    }
    if (!spec.success.criteria.empty() && weight_sum <= 0.0)
        raise(Errc::validation_error, "criterion weights must have a positive sum");

    std::set<std::string> skill_ids;
    for (const auto& skill : spec.skills) {
        if (!skill_ids.insert(skill.skill_id).second)
            raise(Errc::duplicate_skill, skill.skill_id);
        if (skill.success_prob < 0.0 || skill.success_prob > 1.0)
            raise(Errc::validation_error, "success_prob outside [0,1] on skill " + skill.skill_id);
        if (skill.call_limit && *skill.call_limit < 0)
            raise(Errc::validation_error, "negative call_limit on skill " + skill.skill_id);
        if (!skill.cost_estimate.all_non_negative())
            raise(Errc::validation_error, "negative cost_estimate on skill " + skill.skill_id);
    }
}

} // namespace

Contract draft_contract(const ContractSpec& spec) {
    validate_spec(spec);

    Contract contract;
    contract.contract_id = spec.contract_id;
    contract.parent_id = spec.parent_id;
    contract.input = spec.input;
    contract.output = spec.output;
    contract.skills = spec.skills;
    contract.budget = spec.budget;
    contract.temporal.tau = spec.tau;
    contract.success = spec.success;
    contract.termination = spec.termination;
    contract.state = Lifecycle::drafted;

    // Normalize weights once, at draft time; theta is read against the
    // normalized sum.
    double weight_sum = 0.0;
    for (const auto& criterion : spec.success.criteria) weight_sum += criterion.weight;
    if (weight_sum > 0.0)
        for (auto& criterion : contract.success.criteria) criterion.weight /= weight_sum;

    return contract;
}

void activate(Contract& contract, Timestamp now, bool resources_available) {
    if (contract.state != Lifecycle::drafted)
        raise(Errc::not_drafted, contract.contract_id + " is " + to_string(contract.state));
    if (!resources_available)
        raise(Errc::resources_unavailable, contract.contract_id);
    contract.state = Lifecycle::active;
    contract.temporal.t_start = now;
}

SuccessScore evaluate_success(const SuccessCriteria& success,
                              const std::map<std::string, bool>& criterion_truth) {
    double score = 0.0;
    for (const auto& criterion : success.criteria) {
        auto it = criterion_truth.find(criterion.criterion_id);
        if (it == criterion_truth.end())
            raise(Errc::missing_criterion, criterion.criterion_id);
        if (it->second) score += criterion.weight;
    }
    return SuccessScore{score, score >= success.theta};
}

std::vector<std::string> breached_dimensions(const ResourceVector& consumption,
                                             const ResourceVector& budget) {
    std::vector<std::string> breached;
    // Bounded budget dimensions: inclusive comparison, but an unused zero
    // bound is not a breach (a zero budget means the dimension is forbidden,
    // not pre-breached).
    for (const auto& [dimension, bound] : budget.entries()) {
        if (bound == ResourceVector::kOpen) continue;
        const std::int64_t used = consumption.get(dimension);
        if (used >= bound && !(used == 0 && bound == 0)) breached.push_back(dimension);
    }
    // Dimensions consumed without any budget entry are bounded at 0.
    for (const auto& [dimension, used] : consumption.entries()) {
        if (budget.has(dimension) || used <= 0) continue;
        breached.push_back(dimension);
    }
    std::sort(breached.begin(), breached.end());
    return breached;
}

GuardDecision evaluate_guards(const Contract& contract, const Observation& obs) {
    if (contract.state != Lifecycle::active)
        raise(Errc::not_active, contract.contract_id + " is " + to_string(contract.state));

    const bool cancelled = obs.cancel && contract.termination.accept_cancel_signal;
    const auto breached = breached_dimensions(obs.consumption, contract.budget);
    const bool expired = obs.now - *contract.temporal.t_start > contract.temporal.tau;
    const auto success = evaluate_success(contract.success, obs.criterion_truth);

    GuardDecision decision;
    decision.score = success.score;

    if (cancelled) decision.triggered.push_back("cancel");
    for (const auto& dimension : breached) decision.triggered.push_back("budget:" + dimension);
    if (expired) decision.triggered.push_back("expiry");
    if (success.fulfilled) decision.triggered.push_back("fulfillment");

    if (cancelled)
        decision.next = Lifecycle::terminated;
    else if (!breached.empty())
        decision.next = Lifecycle::violated;
    else if (expired)
        decision.next = Lifecycle::expired;
    else if (success.fulfilled)
        decision.next = Lifecycle::fulfilled;
    else
        decision.next = Lifecycle::active;

    if (decision.stay()) decision.triggered.clear();
    return decision;
}

SkillDecision authorize_skill(const Contract& contract, const std::string& skill_id,
                              std::int64_t prior_calls_of_skill) {
    if (contract.state != Lifecycle::active)
        raise(Errc::not_active, contract.contract_id + " is " + to_string(contract.state));

    const SkillSpec* skill = contract.find_skill(skill_id);
    if (skill == nullptr) return SkillDecision{false, SkillDenial::not_in_skill_set};
    if (skill->call_limit && prior_calls_of_skill >= *skill->call_limit)
        return SkillDecision{false, SkillDenial::skill_limit_reached};
    return SkillDecision{true, std::nullopt};
}

bool apply_transition(Contract& contract, const GuardDecision& decision) {
    if (contract.terminal())
        raise(Errc::already_terminal,
              contract.contract_id + " is " + to_string(contract.state));
    if (decision.stay()) return false;

    contract.state = decision.next;
    TerminalCause cause;
    cause.reason = to_string(decision.next);
    cause.triggered = decision.triggered;
    contract.terminal_cause = std::move(cause);
    return true;
}

} // namespace charter
