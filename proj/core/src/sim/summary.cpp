#include "charter/sim/summary.hpp"

#include "charter/errors.hpp"

namespace charter::sim {

SummaryStats summarize(const std::vector<TrialTrace>& traces) {
    if (traces.empty()) raise(Errc::empty_traces, "summarize needs at least one trial");

    SummaryStats stats;
    stats.trials = static_cast<std::int64_t>(traces.size());

    double token_sum = 0.0;
    double iteration_sum = 0.0;
    double reasoning_sum = 0.0;
    for (const auto& trial : traces) {
        token_sum += static_cast<double>(trial.total_tokens);
        iteration_sum += static_cast<double>(trial.iterations_used);
        reasoning_sum += static_cast<double>(trial.reasoning_tokens);
        switch (trial.root_outcome) {
            case Lifecycle::fulfilled: stats.fulfilled += 1; break;
            case Lifecycle::violated: stats.violated += 1; break;
            case Lifecycle::expired: stats.expired += 1; break;
            case Lifecycle::terminated: stats.terminated += 1; break;
            default: break;
        }
        if (trial.conservation_ok) {
            stats.conservation_checked += 1;
            if (*trial.conservation_ok) stats.conservation_ok += 1;
        }
    }

    const double n = static_cast<double>(traces.size());
    stats.mean_tokens = token_sum / n;
    stats.mean_iterations = iteration_sum / n;
    stats.mean_reasoning_tokens = reasoning_sum / n;
    stats.success_rate = static_cast<double>(stats.fulfilled) / n;
    stats.timeout_rate = static_cast<double>(stats.expired) / n;

    if (traces.size() > 1) {
        double squares = 0.0;
        for (const auto& trial : traces) {
            const double d = static_cast<double>(trial.total_tokens) - stats.mean_tokens;
            squares += d * d;
        }
        stats.variance_tokens = squares / (n - 1.0);
    }
    return stats;
}

} // namespace charter::sim
