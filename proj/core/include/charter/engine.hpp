#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charter/contract.hpp"
#include "charter/delegation.hpp"
#include "charter/ledger.hpp"
#include "charter/resource_vector.hpp"
#include "charter/trace.hpp"

namespace charter {

/// In-memory contract registry wiring the lifecycle, the ledgers, the
/// delegation tree and the audit trace together. One engine governs one
/// delegation tree (or forest); transitions for a given contract must be
/// externally serialized (single writer per contract).
class Engine {
public:
    /// Validates and registers a DRAFTED contract. Assigns contract_id when
    /// the spec leaves it empty; parent_id, when present, must refer to a
    /// registered contract. Emits a DRAFTED event.
    std::string draft(ContractSpec spec, Timestamp now = 0);

    /// DRAFTED -> ACTIVE. For a child contract drafted directly (outside an
    /// allocation plan) this checks and reserves the child budget against the
    /// parent's unallocated remainder; plan-drafted children were reserved at
    /// drafting time. Emits an ACTIVE event.
    void activate(const std::string& contract_id, Timestamp now);

    /// Records one call's consumption against the contract's ledger and emits
    /// a CONSUMPTION event. See record_consumption for the atomicity rules.
    RecordResult record(const std::string& contract_id, const ResourceVector& delta,
                        const std::optional<TokenBreakdown>& token_detail = std::nullopt,
                        const std::optional<std::string>& skill_id = std::nullopt,
                        Timestamp now = 0);

    /// Evaluates the guards against the ledger snapshot plus the supplied
    /// cancel flag and criterion truths, applies the transition, and emits
    /// the terminal event when one occurs.
    GuardDecision step(const std::string& contract_id, Timestamp now, bool cancel,
                       const std::map<std::string, bool>& criterion_truth);

    /// Skill gate backed by the ledger's per-skill call counts.
    SkillDecision authorize(const std::string& contract_id, const std::string& skill_id) const;

    UtilizationReport monitor_contract(const std::string& contract_id, Timestamp now) const;

    /// Runs threshold checks against a fresh utilization report, emitting one
    /// ALERT event per newly crossed (threshold, dimension) pair.
    std::vector<Alert> check_alerts(const std::string& contract_id, Timestamp now,
                                    const std::vector<double>& thresholds);

    /// Drafts one child per plan entry, all-or-nothing. child_specs align
    /// with plan.child_allocations; each child's budget is taken from the
    /// plan, its parent_id is set, and its duration must fit inside the
    /// parent's remaining time. The plan total (children + reserve) must fit
    /// in the parent's unallocated remainder; the reserve seeds the parent's
    /// pool. Emits ALLOCATION plus one DRAFTED per child.
    ///
    /// Throws ParentNotActive, ConservationViolation or TemporalOverrun.
    std::vector<std::string> draft_subcontracts(const std::string& parent_id,
                                                const AllocationPlan& plan,
                                                std::vector<ContractSpec> child_specs,
                                                Timestamp now);

    /// Returns a terminal child's unused budget to its parent's pool and
    /// emits a POOL event.
    ResourceVector release_child(const std::string& child_id, Timestamp now);

    /// Requests a top-up from the parent's pool for an ACTIVE child. On grant
    /// the child's budget is amended upward and an AMENDMENT event is
    /// emitted; a denial changes nothing and returns the available snapshot.
    PoolGrant request_topup(const std::string& child_id, const ResourceVector& amount,
                            Timestamp now);

    /// Checks conservation over the whole registry: per-plan totals against
    /// their source, pool log identities, allocation reconciliation, node
    /// overcommitment and subtree consumption against each node's budget.
    /// Violations are data, not errors.
    ConservationReport verify_conservation() const;

    /// verify_conservation plus a CONSERVATION_CHECK trace event.
    ConservationReport check_conservation(Timestamp now);

    // ---- read access ----
    bool has(const std::string& contract_id) const { return nodes_.count(contract_id) > 0; }
    const Contract& contract(const std::string& contract_id) const;
    const Ledger& ledger(const std::string& contract_id) const;
    const std::vector<std::string>& children(const std::string& contract_id) const;
    const BudgetPool* pool(const std::string& parent_id) const;
    const std::vector<std::string>& contract_ids() const { return order_; }

    /// Budget not yet consumed by the node itself nor handed to children or
    /// reserves. Open dimensions stay open.
    ResourceVector remaining_budget(const std::string& contract_id) const;

    /// Total consumption of a contract and all its descendants.
    ResourceVector subtree_consumption(const std::string& contract_id) const;

    const TraceLog& trace() const { return trace_; }

private:
    struct Node {
        Contract contract;
        Ledger ledger;
        ResourceVector initial_budget;
        ResourceVector allocated; // finite totals handed to children + reserves
        std::vector<std::string> children;
        std::vector<AllocationPlan> plans;
        bool reserved_via_plan = false;
        // True once this node's budget is carved out of the parent: at
        // drafting for plan children, at activation for direct children.
        bool reserved = false;
    };

    Node& node(const std::string& contract_id);
    const Node& node(const std::string& contract_id) const;
    std::string register_node(Contract contract, bool reserved_via_plan, Timestamp now);
    void emit_terminal(const Node& n, const GuardDecision& decision, Timestamp now);

    std::map<std::string, Node> nodes_;
    std::vector<std::string> order_;
    std::map<std::string, BudgetPool> pools_;
    TraceLog trace_;
    std::uint64_t next_id_ = 0;
};

} // namespace charter
