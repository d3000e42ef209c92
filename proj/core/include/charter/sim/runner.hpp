#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charter/sim/scenario.hpp"
#include "charter/trace.hpp"

namespace charter::sim {

/// Everything observable about one simulated trial: the full audit trace,
/// the terminal state and consumption totals per contract, and convenience
/// aggregates for summaries.
struct TrialTrace {
    std::uint64_t trial_index = 0;
    std::optional<ModeKind> mode;
    std::vector<TraceEvent> events;
    std::map<std::string, Lifecycle> outcome;
    std::map<std::string, ResourceVector> totals;
    std::string root_id;
    bool success = false;
    std::int64_t iterations_used = 0;
    std::optional<bool> conservation_ok;
    std::string disposition = "completed"; // or "no_specialist"

    std::int64_t total_tokens = 0;
    std::int64_t reasoning_tokens = 0;
    Lifecycle root_outcome = Lifecycle::drafted;
};

/// Coder<->Reviewer refinement loop (single-agent when no reviewer role is
/// configured). CONTRACTED trials run the full guard loop between calls;
/// UNCONTRACTED trials bound only the iteration count.
std::vector<TrialTrace> run_iterative_refinement(const ScenarioSpec& spec);

/// Orchestrator drafts subcontracts per the configured strategy, runs the
/// workers sequentially, returns unused budget to the pool after each worker
/// and lets budget-aware workers request top-ups. Each trial ends with a
/// conservation check embedded in its trace.
std::vector<TrialTrace> run_orchestrator_workers(const ScenarioSpec& spec);

/// Router matches the drawn task's required skills against specialist
/// contracts, reserves budget for the chosen branch only, and returns unused
/// reservations to the pool. Ties break on lower total cost estimate, then
/// lexicographic agent id.
std::vector<TrialTrace> run_routing(const ScenarioSpec& spec);

/// Dispatches on spec.pattern; runs the trial set per mode when the scenario
/// lists modes.
std::vector<TrialTrace> run_scenario(const ScenarioSpec& spec);

} // namespace charter::sim
