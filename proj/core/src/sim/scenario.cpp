#include "charter/sim/scenario.hpp"

#include "charter/errors.hpp"

namespace charter::sim {

const char* to_string(Pattern pattern) noexcept {
    switch (pattern) {
        case Pattern::iterative_refinement: return "iterative_refinement";
        case Pattern::routing: return "routing";
        case Pattern::orchestrator_workers: return "orchestrator_workers";
    }
    return "?";
}

Pattern pattern_from_string(const std::string& name) {
    if (name == "iterative_refinement") return Pattern::iterative_refinement;
    if (name == "routing") return Pattern::routing;
    if (name == "orchestrator_workers") return Pattern::orchestrator_workers;
    raise(Errc::validation_error, "unknown pattern: " + name);
}

const char* to_string(Condition condition) noexcept {
    return condition == Condition::contracted ? "CONTRACTED" : "UNCONTRACTED";
}

Condition condition_from_string(const std::string& name) {
    if (name == "CONTRACTED" || name == "contracted") return Condition::contracted;
    if (name == "UNCONTRACTED" || name == "uncontracted") return Condition::uncontracted;
    raise(Errc::validation_error, "unknown condition: " + name);
}

ContractTemplate apply_mode(ModeKind mode, ContractTemplate base) {
    base.tau_ms = mode_profile(mode).tau_ms;
    return base;
}

const SimAgentModel& ScenarioSpec::agent(const std::string& role) const {
    auto it = agents.find(role);
    if (it == agents.end()) raise(Errc::validation_error, "unknown agent role: " + role);
    return it->second;
}

const ContractTemplate& ScenarioSpec::contract_template(const std::string& tname) const {
    auto it = templates.find(tname);
    if (it == templates.end()) raise(Errc::validation_error, "unknown template: " + tname);
    return it->second;
}

} // namespace charter::sim
