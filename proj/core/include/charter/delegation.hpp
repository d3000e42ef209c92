#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "charter/contract.hpp"
#include "charter/ledger.hpp"
#include "charter/resource_vector.hpp"

namespace charter {

enum class AllocationStrategy { proportional, equal, negotiated };

const char* to_string(AllocationStrategy strategy) noexcept;
AllocationStrategy allocation_strategy_from_string(const std::string& name);

struct ChildAllocation {
    std::string label;
    ResourceVector budget;
};

/// A parent budget split into child budgets plus a reserve. Every plan
/// produced by the allocate_* functions satisfies, dimension-wise and in
/// exact integer arithmetic:
///
///     sum of child budgets + reserve = source budget
///
/// Flooring remainders are routed into the reserve, never dropped. Open
/// (unbounded) dimensions of the source are not allocatable and are skipped.
struct AllocationPlan {
    std::string parent_id;
    std::vector<ChildAllocation> child_allocations;
    ResourceVector reserve;
    ResourceVector source_budget;
    AllocationStrategy strategy = AllocationStrategy::proportional;

    ResourceVector child_total() const;
    ResourceVector total() const; // child_total + reserve
};

/// Splits B - reserve by normalized weights, flooring per dimension.
/// reserve_fraction in [0,1); weights must all be positive.
AllocationPlan allocate_proportional(const ResourceVector& parent_budget,
                                     const std::vector<double>& weights,
                                     double reserve_fraction);

/// Equal split: proportional with unit weights.
AllocationPlan allocate_equal(const ResourceVector& parent_budget, std::size_t n_children,
                              double reserve_fraction);

/// Request-based allocation with per-child caps at cap_multiplier times the
/// equal share (cap_multiplier >= 1). If granted requests would exceed the
/// distributable amount on a dimension, grants are rescaled proportionally
/// to the requests, floored, and re-capped; whatever remains goes to the
/// reserve.
AllocationPlan allocate_negotiated(const ResourceVector& parent_budget,
                                   const std::vector<ResourceVector>& requests,
                                   double reserve_fraction, double cap_multiplier);

/// Shared reallocation pool fed by a plan's reserve and by unused budget
/// returned from terminal children. available is non-negative at all times
/// and always equals initial reserve + sum(returned) - sum(granted).
struct BudgetPool {
    std::string parent_id;
    ResourceVector available;
    ResourceVector initial_reserve;
    std::vector<std::pair<std::string, ResourceVector>> returned_log;
    std::vector<std::pair<std::string, ResourceVector>> granted_log;
    std::set<std::string> released_children;
};

/// Returns a terminal child's unused budget to the pool: max(b - c, 0) per
/// dimension. Overshot dimensions return zero; the deficit surfaces through
/// verify_conservation instead of as a negative pool entry.
/// Throws NotTerminal or AlreadyReleased.
ResourceVector release_to_pool(BudgetPool& pool, const Contract& child, const Ledger& child_ledger);

struct PoolGrant {
    bool granted = false;
    ResourceVector available; // snapshot after the operation (or at denial)
};

/// Grants the full amount iff the pool covers it on every dimension; partial
/// grants are never issued. The caller applies the matching budget amendment
/// to the child contract.
PoolGrant request_from_pool(BudgetPool& pool, const std::string& child_id,
                            const ResourceVector& amount);

/// One failed conservation check. lhs/rhs are the two sides of the violated
/// inequality or identity on `dimension`.
struct ConservationViolation {
    std::string node;
    std::string check; // "plan", "pool", "reconciliation", "overcommitted", "subtree"
    std::string dimension;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
};

struct ConservationReport {
    std::vector<ConservationViolation> violations;
    bool ok() const { return violations.empty(); }
};

} // namespace charter
