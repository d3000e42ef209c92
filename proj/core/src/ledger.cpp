#include "charter/ledger.hpp"

#include <algorithm>
#include <limits>

#include "charter/errors.hpp"

namespace charter {

RecordResult record_consumption(Ledger& ledger, const Contract& contract,
                                const ResourceVector& delta,
                                const std::optional<TokenBreakdown>& token_detail,
                                const std::optional<std::string>& skill_id, Timestamp /*now*/) {
    // Validate everything before touching state so a rejection leaves the
    // ledger exactly as it was.
    if (!contract.active())
        raise(Errc::contract_not_active,
              contract.contract_id + " is " + to_string(contract.state));
    if (!delta.all_non_negative())
        raise(Errc::negative_delta, delta.to_string());
    if (!delta.all_finite())
        raise(Errc::negative_delta, "delta must be finite: " + delta.to_string());
    if (token_detail && token_detail->total() != delta.get(dim::token))
        raise(Errc::token_mismatch,
              "breakdown total " + std::to_string(token_detail->total()) + " != delta token " +
                  std::to_string(delta.get(dim::token)));

    const auto before = breached_dimensions(ledger.consumed, contract.budget);

    ledger.consumed += delta;
    if (token_detail) {
        ledger.token_detail += *token_detail;
    } else {
        ledger.token_detail.output_tokens += delta.get(dim::token);
    }
    if (skill_id) ledger.per_skill_calls[*skill_id] += 1;
    ledger.sequence += 1;

    const auto after = breached_dimensions(ledger.consumed, contract.budget);
    ledger.violated_dimensions = {after.begin(), after.end()};

    RecordResult result;
    result.snapshot = ledger.consumed;
    result.sequence = ledger.sequence;
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(result.newly_violated));
    return result;
}

ControllableBudget controllable_budget(std::int64_t total_token_budget,
                                       std::int64_t input_tokens) {
    if (input_tokens >= total_token_budget) return ControllableBudget{0, true};
    return ControllableBudget{total_token_budget - input_tokens, false};
}

UtilizationReport monitor(const Contract& contract, const Ledger& ledger, Timestamp now) {
    if (!contract.temporal.t_start)
        raise(Errc::not_activated, contract.contract_id);

    UtilizationReport report;
    report.consumption = ledger.consumed;
    report.tau_util = static_cast<double>(now - *contract.temporal.t_start) /
                      static_cast<double>(contract.temporal.tau);

    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (const auto& [dimension, bound] : contract.budget.entries()) {
        if (bound == ResourceVector::kOpen) continue;
        const std::int64_t used = ledger.consumed.get(dimension);
        double ratio = 0.0;
        if (bound > 0)
            ratio = static_cast<double>(used) / static_cast<double>(bound);
        else if (used > 0)
            ratio = kInf;
        report.utilization[dimension] = ratio;
    }
    // Consumption on dimensions with no budget entry is bounded at 0.
    for (const auto& [dimension, used] : ledger.consumed.entries()) {
        if (contract.budget.has(dimension) || used <= 0) continue;
        report.utilization[dimension] = kInf;
    }

    report.aggregate = report.tau_util;
    for (const auto& [dimension, ratio] : report.utilization)
        report.aggregate = std::max(report.aggregate, ratio);
    return report;
}

std::vector<Alert> check_thresholds(Ledger& ledger, const UtilizationReport& report,
                                    const std::vector<double>& thresholds) {
    double previous = 0.0;
    for (double threshold : thresholds) {
        if (threshold <= previous || threshold > 1.0)
            raise(Errc::unsorted_thresholds,
                  "thresholds must be strictly increasing within (0,1]");
        previous = threshold;
    }

    std::vector<Alert> fired;
    for (double threshold : thresholds) {
        auto consider = [&](const std::string& dimension, double ratio) {
            if (ratio < threshold) return;
            if (!ledger.fired_alerts.emplace(threshold, dimension).second) return;
            fired.push_back(Alert{threshold, dimension});
        };
        consider(kDurationDimension, report.tau_util);
        for (const auto& [dimension, ratio] : report.utilization) consider(dimension, ratio);
    }
    return fired;
}

std::string format_budget_status(std::int64_t consumed, std::int64_t budget,
                                 const std::string& /*dimension*/) {
    return "Budget: " + std::to_string(consumed) + "/" + std::to_string(budget);
}

} // namespace charter
