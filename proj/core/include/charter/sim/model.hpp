#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "charter/contract.hpp"
#include "charter/ledger.hpp"
#include "charter/resource_vector.hpp"

namespace charter::sim {

/// Bounded integer distribution for per-call token draws.
struct TriangularSpec {
    std::int64_t min = 0;
    std::int64_t mode = 0;
    std::int64_t max = 0;
};

/// Fixed per-call split of a token draw into categories; whatever the input
/// and reasoning fractions leave over is output.
struct TokenSplit {
    double input = 0.4;
    double reasoning = 0.3;
};

/// Uniform distribution over [min, max] within [0,1] for the synthetic
/// per-trial quality score compared against the contract's q_min.
struct QualityDist {
    double min = 0.0;
    double max = 1.0;
};

/// Logical call duration: base plus a per-generated-token term (reasoning and
/// output tokens; the prompt is not generated).
struct LatencySpec {
    std::int64_t base_ms = 500;
    double per_token_ms = 0.0;
};

/// Behavioral stand-in for an LLM agent with stochastic consumption.
struct SimAgentModel {
    std::string agent_id;
    TriangularSpec per_call_tokens;
    TokenSplit token_split;
    std::map<std::string, double> per_call_skills; // skill -> use probability per call
    double convergence_prob_per_iteration = 0.0;
    QualityDist quality_distribution;
    bool budget_aware = false;
    /// Per-call draws scale by (1 + growth * (iteration - 1)), modeling the
    /// context accumulated across refinement rounds.
    double tokens_growth_per_iteration = 0.0;
    LatencySpec latency;
};

enum class ModeKind { urgent, economical, balanced };

const char* to_string(ModeKind mode) noexcept;
ModeKind mode_from_string(const std::string& name);

/// Duration limit and reasoning-token multiplier per contract mode. URGENT
/// runs with no extended reasoning at all.
struct ModeProfile {
    DurationMs tau_ms = 0;
    double reasoning_multiplier = 1.0;
};

ModeProfile mode_profile(ModeKind mode) noexcept;

/// Draw shrink factor for budget-aware agents: 1.0 below 50% utilization,
/// tapering linearly to 0.3 at 100% and flat beyond.
double budget_aware_shrink(double aggregate_utilization) noexcept;

/// One simulated call's token outcome.
struct CallDraw {
    TokenBreakdown tokens;
    DurationMs duration_ms = 0;
};

/// Draws one call: triangular total, scaled by the iteration-growth factor
/// and the budget-aware shrink, split into categories, with the reasoning
/// share scaled by the mode multiplier.
CallDraw draw_call(class SplitMix64& rng, const SimAgentModel& model, std::int64_t iteration,
                   double shrink_factor, double reasoning_multiplier);

/// Largest total a single call can draw at the given iteration (shrink and
/// reasoning multipliers at their maxima). Bounds the overshoot any one
/// recording can cause.
std::int64_t max_call_tokens(const SimAgentModel& model, std::int64_t iteration);

} // namespace charter::sim
