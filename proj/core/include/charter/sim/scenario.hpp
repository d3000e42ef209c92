#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charter/contract.hpp"
#include "charter/delegation.hpp"
#include "charter/resource_vector.hpp"
#include "charter/sim/model.hpp"

namespace charter::sim {

enum class Pattern { iterative_refinement, routing, orchestrator_workers };
enum class Condition { contracted, uncontracted };

const char* to_string(Pattern pattern) noexcept;
Pattern pattern_from_string(const std::string& name);
const char* to_string(Condition condition) noexcept;
Condition condition_from_string(const std::string& name);

/// Reusable contract shape for one role: everything in the seven-tuple that
/// is not assigned by an allocation plan.
struct ContractTemplate {
    ResourceVector budget;
    DurationMs tau_ms = 0;
    double q_min = 0.8;
    SuccessCriteria success;
    std::vector<SkillSpec> skills;
};

/// Sets the mode's duration limit on a template. Idempotent; the reasoning
/// multiplier applies to agent models at draw time, not to the template.
ContractTemplate apply_mode(ModeKind mode, ContractTemplate base);

struct IterativeParams {
    std::string coder_role;
    std::optional<std::string> reviewer_role; // absent: single-agent refinement
    std::string template_name;
    // UNCONTRACTED variant: only the iteration cap is enforced; the listed
    // dimensions run open and the duration limit is effectively unbounded.
    std::int64_t uncontracted_iteration_cap = 6;
    std::vector<std::string> uncontracted_open = {"token", "llm_call"};
    DurationMs uncontracted_tau_ms = 3600000;
};

struct WorkerSpec {
    std::string name;
    std::string agent;
    std::string template_name;
    double weight = 1.0;
    ResourceVector request; // negotiated strategy only
};

struct OrchestratorParams {
    std::string root_template;
    std::vector<WorkerSpec> workers;
    AllocationStrategy strategy = AllocationStrategy::proportional;
    bool topups = true;
    double topup_threshold = 0.8;
};

struct SpecialistSpec {
    std::string name;
    std::string agent;
    std::string template_name;
};

struct RoutingTask {
    std::vector<std::string> required_skills;
    double weight = 1.0;
};

struct RoutingParams {
    std::string root_template;
    std::vector<SpecialistSpec> specialists;
    std::vector<RoutingTask> tasks;
};

/// A full experiment description: pattern, roles, templates and trial plan.
struct ScenarioSpec {
    std::string name;
    Pattern pattern = Pattern::iterative_refinement;
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    Condition condition = Condition::contracted;

    double reserve_fraction = 0.10;
    std::vector<double> alert_thresholds = {0.8};
    double cap_multiplier = 2.0;

    std::map<std::string, SimAgentModel> agents;
    std::map<std::string, ContractTemplate> templates;

    std::optional<IterativeParams> iterative;
    std::optional<OrchestratorParams> orchestrator;
    std::optional<RoutingParams> routing;

    /// Strategy-mode scenarios run the trial set once per listed mode.
    std::vector<ModeKind> modes;

    const SimAgentModel& agent(const std::string& role) const;
    const ContractTemplate& contract_template(const std::string& name) const;
};

} // namespace charter::sim
