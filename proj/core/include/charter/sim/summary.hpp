#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "charter/sim/runner.hpp"

namespace charter::sim {

/// Aggregates over a set of trials from one condition (and one mode, when
/// modes are in play).
struct SummaryStats {
    std::int64_t trials = 0;
    double mean_tokens = 0.0;
    std::optional<double> variance_tokens; // undefined for a single trial
    double success_rate = 0.0;
    double mean_iterations = 0.0;
    double mean_reasoning_tokens = 0.0;
    double timeout_rate = 0.0; // fraction of trials whose root EXPIRED

    std::int64_t fulfilled = 0;
    std::int64_t violated = 0;
    std::int64_t expired = 0;
    std::int64_t terminated = 0;

    std::int64_t conservation_checked = 0;
    std::int64_t conservation_ok = 0;
};

/// Sample mean and unbiased sample variance over trial token totals, plus
/// outcome tallies. Deterministic given the traces. Throws EmptyTraces.
SummaryStats summarize(const std::vector<TrialTrace>& traces);

} // namespace charter::sim
