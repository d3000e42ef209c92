#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "charter/contract.hpp"
#include "charter/resource_vector.hpp"

namespace charter {

/// Token usage split by category: prompt/input, internal reasoning, output.
struct TokenBreakdown {
    std::int64_t input_tokens = 0;
    std::int64_t reasoning_tokens = 0;
    std::int64_t output_tokens = 0;

    std::int64_t total() const { return input_tokens + reasoning_tokens + output_tokens; }

    TokenBreakdown& operator+=(const TokenBreakdown& other) {
        input_tokens += other.input_tokens;
        reasoning_tokens += other.reasoning_tokens;
        output_tokens += other.output_tokens;
        return *this;
    }
};

/// Per-contract cumulative consumption record. A call's consumption is only
/// knowable after the call completes, so recording is atomic at call
/// granularity: a delta is applied in full (even when it overshoots the
/// budget, which is then flagged) or rejected in full.
struct Ledger {
    std::string contract_id;
    ResourceVector consumed;
    TokenBreakdown token_detail;
    std::map<std::string, std::int64_t> per_skill_calls;
    std::set<std::string> violated_dimensions;
    std::uint64_t sequence = 0;

    // Edge-trigger memory: (threshold, dimension-or-duration) pairs that have
    // already fired for this contract.
    std::set<std::pair<double, std::string>> fired_alerts;

    std::int64_t skill_calls(const std::string& skill_id) const {
        auto it = per_skill_calls.find(skill_id);
        return it == per_skill_calls.end() ? 0 : it->second;
    }
};

struct RecordResult {
    ResourceVector snapshot;
    std::vector<std::string> newly_violated;
    std::uint64_t sequence = 0;
};

/// Applies one call's consumption to the ledger. The owning contract must be
/// ACTIVE; recording against a terminal contract is rejected, which is what
/// stops an agent's subsequent calls after a breach. The delta is all-or-
/// nothing; newly_violated lists the dimensions whose bound was crossed by
/// this recording.
///
/// Unbroken token deltas (no TokenBreakdown supplied) are attributed to
/// output_tokens so the cumulative breakdown always reconciles with
/// consumed[token].
///
/// Throws ContractNotActive, NegativeDelta or TokenMismatch.
RecordResult record_consumption(Ledger& ledger, const Contract& contract,
                                const ResourceVector& delta,
                                const std::optional<TokenBreakdown>& token_detail = std::nullopt,
                                const std::optional<std::string>& skill_id = std::nullopt,
                                Timestamp now = 0);

struct ControllableBudget {
    std::int64_t remaining = 0;
    bool exhausted = false;
};

/// Tokens still steerable once the prompt is accounted for: B_tok - r_in,
/// saturating at zero (flagged exhausted when input alone meets the budget).
ControllableBudget controllable_budget(std::int64_t total_token_budget,
                                       std::int64_t input_tokens);

/// Snapshot of how close a contract is to each of its bounds.
/// aggregate = max(tau_util, max over bounded dimensions of c/b). A zero
/// bound with positive consumption reports +infinity; zero over zero reports
/// 0. Ratios are not clamped at 1: values above 1 coexist with breach
/// detection after an overshooting recording.
struct UtilizationReport {
    ResourceVector consumption;
    std::map<std::string, double> utilization;
    double tau_util = 0.0;
    double aggregate = 0.0;
};

/// Pure read of consumption and utilization at `now`. Requires an activated
/// contract (t_start set); throws NotActivated otherwise.
UtilizationReport monitor(const Contract& contract, const Ledger& ledger, Timestamp now);

struct Alert {
    double threshold = 0.0;
    std::string dimension; // resource dimension, or "duration" for tau
};

/// Duration pseudo-dimension used in alerts.
inline constexpr const char* kDurationDimension = "duration";

/// Fires at most one alert per (threshold, dimension) per contract lifetime.
/// Thresholds must be strictly increasing, each in (0,1]. A single check that
/// jumps across several thresholds fires them all, lowest first.
std::vector<Alert> check_thresholds(Ledger& ledger, const UtilizationReport& report,
                                    const std::vector<double>& thresholds);

/// Exactly "Budget: <used>/<total>", base-10, no padding or separators. The
/// string is injected into agent prompts, so it is bit-exact; overshoot is
/// displayed, never clamped. The dimension argument names what is being
/// reported and does not appear in the string.
std::string format_budget_status(std::int64_t consumed, std::int64_t budget,
                                 const std::string& dimension);

} // namespace charter
