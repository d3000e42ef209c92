#include "charter/sim/model.hpp"

#include <algorithm>
#include <cmath>

#include "charter/errors.hpp"
#include "charter/sim/rng.hpp"

namespace charter::sim {

const char* to_string(ModeKind mode) noexcept {
    switch (mode) {
        case ModeKind::urgent: return "URGENT";
        case ModeKind::economical: return "ECONOMICAL";
        case ModeKind::balanced: return "BALANCED";
    }
    return "?";
}

ModeKind mode_from_string(const std::string& name) {
    if (name == "URGENT") return ModeKind::urgent;
    if (name == "ECONOMICAL") return ModeKind::economical;
    if (name == "BALANCED") return ModeKind::balanced;
    raise(Errc::validation_error, "unknown mode: " + name);
}

ModeProfile mode_profile(ModeKind mode) noexcept {
    switch (mode) {
        case ModeKind::urgent: return ModeProfile{8000, 0.0};
        case ModeKind::economical: return ModeProfile{10000, 0.5};
        case ModeKind::balanced: return ModeProfile{30000, 1.0};
    }
    return ModeProfile{};
}

double budget_aware_shrink(double aggregate_utilization) noexcept {
    if (aggregate_utilization < 0.5) return 1.0;
    if (aggregate_utilization >= 1.0) return 0.3;
    return 1.0 - 1.4 * (aggregate_utilization - 0.5);
}

namespace {

double growth_scale(const SimAgentModel& model, std::int64_t iteration) {
    return 1.0 + model.tokens_growth_per_iteration * static_cast<double>(iteration - 1);
}

} // namespace

CallDraw draw_call(SplitMix64& rng, const SimAgentModel& model, std::int64_t iteration,
                   double shrink_factor, double reasoning_multiplier) {
    const std::int64_t raw = rng.triangular(model.per_call_tokens.min, model.per_call_tokens.mode,
                                            model.per_call_tokens.max);
    const double scale = growth_scale(model, iteration) * shrink_factor;
    const auto total = static_cast<std::int64_t>(
        std::llround(static_cast<double>(raw) * std::max(scale, 0.0)));

    const auto input = static_cast<std::int64_t>(
        std::floor(static_cast<double>(total) * model.token_split.input));
    const auto reasoning_raw = static_cast<std::int64_t>(
        std::floor(static_cast<double>(total) * model.token_split.reasoning));
    const std::int64_t output = total - input - reasoning_raw;
    const auto reasoning = static_cast<std::int64_t>(
        std::floor(static_cast<double>(reasoning_raw) * reasoning_multiplier));

    CallDraw draw;
    draw.tokens = TokenBreakdown{input, reasoning, output};
    draw.duration_ms =
        model.latency.base_ms +
        static_cast<std::int64_t>(std::llround(model.latency.per_token_ms *
                                               static_cast<double>(reasoning + output)));
    return draw;
}

std::int64_t max_call_tokens(const SimAgentModel& model, std::int64_t iteration) {
    return static_cast<std::int64_t>(std::llround(
        static_cast<double>(model.per_call_tokens.max) * growth_scale(model, iteration)));
}

} // namespace charter::sim
