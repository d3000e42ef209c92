#include "charter/delegation.hpp"

#include <algorithm>
#include <cmath>

#include "charter/errors.hpp"

namespace charter {

const char* to_string(AllocationStrategy strategy) noexcept {
    switch (strategy) {
        case AllocationStrategy::proportional: return "proportional";
        case AllocationStrategy::equal: return "equal";
        case AllocationStrategy::negotiated: return "negotiated";
    }
    return "?";
}

AllocationStrategy allocation_strategy_from_string(const std::string& name) {
    if (name == "proportional") return AllocationStrategy::proportional;
    if (name == "equal") return AllocationStrategy::equal;
    if (name == "negotiated") return AllocationStrategy::negotiated;
    raise(Errc::validation_error, "unknown allocation strategy: " + name);
}

ResourceVector AllocationPlan::child_total() const {
    ResourceVector total;
    for (const auto& child : child_allocations) total += child.budget;
    return total;
}

ResourceVector AllocationPlan::total() const { return child_total() + reserve; }

namespace {

void check_reserve_fraction(double reserve_fraction) {
    if (!(reserve_fraction >= 0.0 && reserve_fraction < 1.0))
        raise(Errc::validation_error,
              "reserve_fraction must be in [0,1): " + std::to_string(reserve_fraction));
}

std::int64_t floor_fraction(std::int64_t amount, double fraction) {
    return static_cast<std::int64_t>(
        std::floor(static_cast<long double>(amount) * static_cast<long double>(fraction)));
}

// floor(weight / weight_sum * amount) in extended precision; exact whenever
// the mathematical result is an integer and the operands are representable.
std::int64_t floor_share(std::int64_t amount, double weight, double weight_sum) {
    const long double share = static_cast<long double>(amount) *
                              static_cast<long double>(weight) /
                              static_cast<long double>(weight_sum);
    return static_cast<std::int64_t>(std::floor(share));
}

} // namespace

AllocationPlan allocate_proportional(const ResourceVector& parent_budget,
                                     const std::vector<double>& weights,
                                     double reserve_fraction) {
    if (weights.empty()) raise(Errc::empty_children, "proportional allocation needs children");
    for (double w : weights)
        if (!(w > 0.0)) raise(Errc::non_positive_weight, std::to_string(w));
    check_reserve_fraction(reserve_fraction);

    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w;

    AllocationPlan plan;
    plan.strategy = AllocationStrategy::proportional;
    plan.source_budget = parent_budget;
    plan.child_allocations.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        plan.child_allocations[i].label = "child_" + std::to_string(i);

    for (const auto& [dimension, amount] : parent_budget.entries()) {
        if (amount == ResourceVector::kOpen) continue;
        std::int64_t reserve = floor_fraction(amount, reserve_fraction);
        const std::int64_t distributable = amount - reserve;
        std::int64_t handed_out = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const std::int64_t share = floor_share(distributable, weights[i], weight_sum);
            if (share > 0) plan.child_allocations[i].budget.set(dimension, share);
            handed_out += share;
        }
        reserve += distributable - handed_out; // flooring remainder
        plan.reserve.set(dimension, reserve);
    }
    return plan;
}

AllocationPlan allocate_equal(const ResourceVector& parent_budget, std::size_t n_children,
                              double reserve_fraction) {
    if (n_children == 0) raise(Errc::empty_children, "equal allocation needs children");
    auto plan = allocate_proportional(parent_budget, std::vector<double>(n_children, 1.0),
                                      reserve_fraction);
    plan.strategy = AllocationStrategy::equal;
    return plan;
}

AllocationPlan allocate_negotiated(const ResourceVector& parent_budget,
                                   const std::vector<ResourceVector>& requests,
                                   double reserve_fraction, double cap_multiplier) {
    if (requests.empty()) raise(Errc::empty_children, "negotiated allocation needs children");
    if (!(cap_multiplier >= 1.0))
        raise(Errc::invalid_cap_multiplier, std::to_string(cap_multiplier));
    check_reserve_fraction(reserve_fraction);
    for (const auto& request : requests)
        if (!request.all_non_negative() || !request.all_finite())
            raise(Errc::validation_error, "requests must be finite and non-negative");

    const auto n = static_cast<std::int64_t>(requests.size());

    AllocationPlan plan;
    plan.strategy = AllocationStrategy::negotiated;
    plan.source_budget = parent_budget;
    plan.child_allocations.resize(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i)
        plan.child_allocations[i].label = "child_" + std::to_string(i);

    for (const auto& [dimension, amount] : parent_budget.entries()) {
        if (amount == ResourceVector::kOpen) continue;
        const std::int64_t reserve0 = floor_fraction(amount, reserve_fraction);
        const std::int64_t distributable = amount - reserve0;
        const std::int64_t cap = static_cast<std::int64_t>(
            std::floor(static_cast<long double>(cap_multiplier) *
                       static_cast<long double>(distributable / n)));

        std::vector<std::int64_t> grants(requests.size(), 0);
        std::int64_t granted_total = 0;
        std::int64_t request_total = 0;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            const std::int64_t requested = requests[i].get(dimension);
            request_total += requested;
            grants[i] = std::min(requested, cap);
            granted_total += grants[i];
        }
        if (granted_total > distributable) {
            // Over-claimed even under caps: rescale to requests, floor, re-cap.
            granted_total = 0;
            for (std::size_t i = 0; i < requests.size(); ++i) {
                const std::int64_t requested = requests[i].get(dimension);
                const std::int64_t scaled =
                    floor_share(distributable, static_cast<double>(requested),
                                static_cast<double>(request_total));
                grants[i] = std::min(scaled, cap);
                granted_total += grants[i];
            }
        }
        for (std::size_t i = 0; i < requests.size(); ++i)
            if (grants[i] > 0) plan.child_allocations[i].budget.set(dimension, grants[i]);
        plan.reserve.set(dimension, amount - granted_total);
    }
    return plan;
}

ResourceVector release_to_pool(BudgetPool& pool, const Contract& child,
                               const Ledger& child_ledger) {
    if (!child.terminal())
        raise(Errc::not_terminal, child.contract_id + " is " + to_string(child.state));
    if (pool.released_children.count(child.contract_id))
        raise(Errc::already_released, child.contract_id);

    const ResourceVector returned = child.budget.saturating_minus(child_ledger.consumed);
    pool.available += returned;
    pool.returned_log.emplace_back(child.contract_id, returned);
    pool.released_children.insert(child.contract_id);
    return returned;
}

PoolGrant request_from_pool(BudgetPool& pool, const std::string& child_id,
                            const ResourceVector& amount) {
    if (!amount.all_non_negative() || !amount.all_finite())
        raise(Errc::validation_error, "pool request must be finite and non-negative");
    if (!amount.fits_within(pool.available)) return PoolGrant{false, pool.available};

    ResourceVector remaining;
    for (const auto& [dimension, quantity] : pool.available.entries())
        remaining.set(dimension, quantity - amount.get(dimension));
    pool.available = std::move(remaining);
    pool.granted_log.emplace_back(child_id, amount);
    return PoolGrant{true, pool.available};
}

} // namespace charter
