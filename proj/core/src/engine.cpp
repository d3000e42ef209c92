#include "charter/engine.hpp"

#include <algorithm>

#include "charter/errors.hpp"

namespace charter {

namespace {

ResourceVector finite_part(const ResourceVector& vector) {
    ResourceVector out;
    for (const auto& [dimension, quantity] : vector.entries())
        if (quantity != ResourceVector::kOpen) out.set(dimension, quantity);
    return out;
}

nlohmann::json cause_json(const TerminalCause& cause) {
    return {{"reason", cause.reason}, {"triggered", cause.triggered}};
}

} // namespace

Engine::Node& Engine::node(const std::string& contract_id) {
    auto it = nodes_.find(contract_id);
    if (it == nodes_.end()) raise(Errc::unknown_contract, contract_id);
    return it->second;
}

const Engine::Node& Engine::node(const std::string& contract_id) const {
    auto it = nodes_.find(contract_id);
    if (it == nodes_.end()) raise(Errc::unknown_contract, contract_id);
    return it->second;
}

const Contract& Engine::contract(const std::string& contract_id) const {
    return node(contract_id).contract;
}

const Ledger& Engine::ledger(const std::string& contract_id) const {
    return node(contract_id).ledger;
}

const std::vector<std::string>& Engine::children(const std::string& contract_id) const {
    return node(contract_id).children;
}

const BudgetPool* Engine::pool(const std::string& parent_id) const {
    auto it = pools_.find(parent_id);
    return it == pools_.end() ? nullptr : &it->second;
}

std::string Engine::register_node(Contract contract, bool reserved_via_plan, Timestamp now) {
    if (contract.contract_id.empty())
        contract.contract_id = "c" + std::to_string(next_id_++);
    if (nodes_.count(contract.contract_id))
        raise(Errc::validation_error, "duplicate contract_id: " + contract.contract_id);

    Node n;
    n.initial_budget = contract.budget;
    n.reserved_via_plan = reserved_via_plan;
    n.reserved = reserved_via_plan;
    n.ledger.contract_id = contract.contract_id;

    nlohmann::json payload = {{"budget", to_json(contract.budget)}};
    if (contract.parent_id) {
        payload["parent_id"] = *contract.parent_id;
        nodes_.at(*contract.parent_id).children.push_back(contract.contract_id);
    }

    const std::string id = contract.contract_id;
    n.contract = std::move(contract);
    nodes_.emplace(id, std::move(n));
    order_.push_back(id);
    trace_.append(now, id, TraceEventKind::drafted, std::move(payload));
    return id;
}

std::string Engine::draft(ContractSpec spec, Timestamp now) {
    if (spec.parent_id && !nodes_.count(*spec.parent_id))
        raise(Errc::unknown_contract, "parent " + *spec.parent_id);
    Contract contract = draft_contract(spec);
    return register_node(std::move(contract), /*reserved_via_plan=*/false, now);
}

ResourceVector Engine::remaining_budget(const std::string& contract_id) const {
    const Node& n = node(contract_id);
    ResourceVector remaining;
    for (const auto& [dimension, bound] : n.contract.budget.entries()) {
        if (bound == ResourceVector::kOpen) {
            remaining.mark_open(dimension);
            continue;
        }
        const std::int64_t rest =
            bound - n.ledger.consumed.get(dimension) - n.allocated.get(dimension);
        remaining.set(dimension, std::max<std::int64_t>(rest, 0));
    }
    return remaining;
}

void Engine::activate(const std::string& contract_id, Timestamp now) {
    Node& n = node(contract_id);

    bool available = true;
    if (n.contract.parent_id && !n.reserved_via_plan) {
        const auto parent_remaining = remaining_budget(*n.contract.parent_id);
        available = n.contract.budget.fits_within(parent_remaining);
        if (available) {
            nodes_.at(*n.contract.parent_id).allocated += finite_part(n.contract.budget);
            n.reserved = true;
        }
    }
    charter::activate(n.contract, now, available);
    trace_.append(now, contract_id, TraceEventKind::active, {{"t_start", now}});
}

RecordResult Engine::record(const std::string& contract_id, const ResourceVector& delta,
                            const std::optional<TokenBreakdown>& token_detail,
                            const std::optional<std::string>& skill_id, Timestamp now) {
    Node& n = node(contract_id);
    RecordResult result = record_consumption(n.ledger, n.contract, delta, token_detail, skill_id, now);

    nlohmann::json payload = {
        {"delta", to_json(delta)},
        {"snapshot", to_json(result.snapshot)},
        {"newly_violated", result.newly_violated},
    };
    if (skill_id) payload["skill"] = *skill_id;
    if (token_detail)
        payload["tokens"] = {{"input", token_detail->input_tokens},
                             {"reasoning", token_detail->reasoning_tokens},
                             {"output", token_detail->output_tokens}};
    trace_.append(now, contract_id, TraceEventKind::consumption, std::move(payload));
    return result;
}

GuardDecision Engine::step(const std::string& contract_id, Timestamp now, bool cancel,
                           const std::map<std::string, bool>& criterion_truth) {
    Node& n = node(contract_id);
    Observation obs;
    obs.consumption = n.ledger.consumed;
    obs.now = now;
    obs.cancel = cancel;
    obs.criterion_truth = criterion_truth;

    GuardDecision decision = evaluate_guards(n.contract, obs);
    if (!decision.stay()) {
        apply_transition(n.contract, decision);
        emit_terminal(n, decision, now);
    }
    return decision;
}

void Engine::emit_terminal(const Node& n, const GuardDecision& decision, Timestamp now) {
    nlohmann::json payload = {{"cause", cause_json(*n.contract.terminal_cause)},
                              {"score", decision.score}};
    trace_.append(now, n.contract.contract_id, terminal_event_kind(n.contract.state),
                  std::move(payload));
}

SkillDecision Engine::authorize(const std::string& contract_id, const std::string& skill_id) const {
    const Node& n = node(contract_id);
    return authorize_skill(n.contract, skill_id, n.ledger.skill_calls(skill_id));
}

UtilizationReport Engine::monitor_contract(const std::string& contract_id, Timestamp now) const {
    const Node& n = node(contract_id);
    return monitor(n.contract, n.ledger, now);
}

std::vector<Alert> Engine::check_alerts(const std::string& contract_id, Timestamp now,
                                        const std::vector<double>& thresholds) {
    Node& n = node(contract_id);
    const auto report = monitor(n.contract, n.ledger, now);
    const auto fired = check_thresholds(n.ledger, report, thresholds);
    for (const auto& alert : fired)
        trace_.append(now, contract_id, TraceEventKind::alert,
                      {{"threshold", alert.threshold}, {"dimension", alert.dimension}});
    return fired;
}

std::vector<std::string> Engine::draft_subcontracts(const std::string& parent_id,
                                                    const AllocationPlan& plan,
                                                    std::vector<ContractSpec> child_specs,
                                                    Timestamp now) {
    Node& parent = node(parent_id);
    if (!parent.contract.active())
        raise(Errc::parent_not_active,
              parent_id + " is " + to_string(parent.contract.state));
    if (!plan.parent_id.empty() && plan.parent_id != parent_id)
        raise(Errc::validation_error,
              "plan parent " + plan.parent_id + " does not match " + parent_id);
    if (child_specs.size() != plan.child_allocations.size())
        raise(Errc::validation_error, "child_specs do not align with plan allocations");

    const ResourceVector plan_total = plan.total();
    const ResourceVector parent_remaining = remaining_budget(parent_id);
    if (!plan_total.fits_within(parent_remaining))
        raise(Errc::conservation_violation,
              "plan total " + plan_total.to_string() + " exceeds parent remaining " +
                  parent_remaining.to_string());

    const Timestamp parent_deadline = *parent.contract.temporal.deadline();
    const DurationMs parent_time_left = parent_deadline - now;
    for (const auto& spec : child_specs)
        if (spec.tau > parent_time_left)
            raise(Errc::temporal_overrun,
                  "child tau " + std::to_string(spec.tau) + "ms exceeds parent remaining " +
                      std::to_string(parent_time_left) + "ms");

    // Draft everything into temporaries first so rejection is all-or-nothing.
    std::vector<Contract> drafted;
    drafted.reserve(child_specs.size());
    for (std::size_t i = 0; i < child_specs.size(); ++i) {
        ContractSpec spec = std::move(child_specs[i]);
        spec.parent_id = parent_id;
        spec.budget = plan.child_allocations[i].budget;
        drafted.push_back(draft_contract(spec));
    }

    nlohmann::json children_json = nlohmann::json::array();
    AllocationPlan recorded = plan;
    recorded.parent_id = parent_id;

    std::vector<std::string> child_ids;
    child_ids.reserve(drafted.size());

    parent.allocated += finite_part(plan_total);
    auto& pool_entry = pools_.try_emplace(parent_id, BudgetPool{parent_id, {}, {}, {}, {}, {}})
                           .first->second;
    pool_entry.available += plan.reserve;
    pool_entry.initial_reserve += plan.reserve;

    for (std::size_t i = 0; i < drafted.size(); ++i) {
        children_json.push_back({{"label", plan.child_allocations[i].label},
                                 {"budget", to_json(plan.child_allocations[i].budget)}});
    }
    trace_.append(now, parent_id, TraceEventKind::allocation,
                  {{"strategy", to_string(plan.strategy)},
                   {"reserve", to_json(plan.reserve)},
                   {"children", std::move(children_json)}});

    for (auto& contract : drafted)
        child_ids.push_back(register_node(std::move(contract), /*reserved_via_plan=*/true, now));

    node(parent_id).plans.push_back(std::move(recorded));
    return child_ids;
}

ResourceVector Engine::release_child(const std::string& child_id, Timestamp now) {
    Node& child = node(child_id);
    if (!child.contract.parent_id)
        raise(Errc::validation_error, child_id + " has no parent to release to");
    const std::string parent_id = *child.contract.parent_id;
    auto& pool_entry =
        pools_.try_emplace(parent_id, BudgetPool{parent_id, {}, {}, {}, {}, {}}).first->second;

    const ResourceVector returned = release_to_pool(pool_entry, child.contract, child.ledger);
    trace_.append(now, parent_id, TraceEventKind::pool,
                  {{"child_id", child_id},
                   {"returned", to_json(returned)},
                   {"available", to_json(pool_entry.available)}});
    return returned;
}

PoolGrant Engine::request_topup(const std::string& child_id, const ResourceVector& amount,
                                Timestamp now) {
    Node& child = node(child_id);
    if (!child.contract.active())
        raise(Errc::not_active, child_id + " is " + to_string(child.contract.state));
    if (!child.contract.parent_id)
        raise(Errc::validation_error, child_id + " has no parent pool");

    auto it = pools_.find(*child.contract.parent_id);
    if (it == pools_.end()) return PoolGrant{false, ResourceVector{}};

    PoolGrant grant = request_from_pool(it->second, child_id, amount);
    if (grant.granted) {
        child.contract.budget += amount;
        trace_.append(now, child_id, TraceEventKind::amendment,
                      {{"amount", to_json(amount)},
                       {"available", to_json(grant.available)},
                       {"budget", to_json(child.contract.budget)}});
    }
    return grant;
}

ResourceVector Engine::subtree_consumption(const std::string& contract_id) const {
    const Node& n = node(contract_id);
    ResourceVector total = n.ledger.consumed;
    for (const auto& child_id : n.children) total += subtree_consumption(child_id);
    return total;
}

ConservationReport Engine::verify_conservation() const {
    ConservationReport report;
    auto flag = [&](const std::string& node_id, const std::string& check,
                    const std::string& dimension, std::int64_t lhs, std::int64_t rhs) {
        report.violations.push_back(ConservationViolation{node_id, check, dimension, lhs, rhs});
    };

    for (const auto& id : order_) {
        const Node& n = nodes_.at(id);

        // Plan totals never exceed the budget they were drawn from.
        for (const auto& plan : n.plans) {
            const ResourceVector total = plan.total();
            for (const auto& [dimension, amount] : total.entries()) {
                const std::int64_t source = plan.source_budget.is_open(dimension)
                                                ? ResourceVector::kOpen
                                                : plan.source_budget.get(dimension);
                if (source != ResourceVector::kOpen && amount > source)
                    flag(id, "plan", dimension, amount, source);
            }
        }

        // Pool log identity: available = reserve0 + returned - granted, >= 0.
        if (const BudgetPool* p = pool(id)) {
            ResourceVector replayed = p->initial_reserve;
            for (const auto& [child, returned] : p->returned_log) replayed += returned;
            ResourceVector granted;
            for (const auto& [child, amount] : p->granted_log) granted += amount;

            std::set<std::string> dims;
            for (const auto& [d, q] : replayed.entries()) dims.insert(d);
            for (const auto& [d, q] : granted.entries()) dims.insert(d);
            for (const auto& [d, q] : p->available.entries()) dims.insert(d);
            for (const auto& d : dims) {
                const std::int64_t expected = replayed.get(d) - granted.get(d);
                if (expected != p->available.get(d) || p->available.get(d) < 0)
                    flag(id, "pool", d, expected, p->available.get(d));
            }
        }

        // Reconciliation: current child budgets + pool - returns == allocated.
        if (!n.children.empty() || pool(id) != nullptr) {
            ResourceVector lhs;
            for (const auto& child_id : n.children) {
                const Node& child = nodes_.at(child_id);
                if (!child.reserved) continue; // budget not carved out yet
                lhs += finite_part(child.contract.budget);
            }
            ResourceVector returned_total;
            if (const BudgetPool* p = pool(id)) {
                lhs += p->available;
                for (const auto& [child, returned] : p->returned_log) returned_total += returned;
            }
            std::set<std::string> dims;
            for (const auto& [d, q] : lhs.entries()) dims.insert(d);
            for (const auto& [d, q] : returned_total.entries()) dims.insert(d);
            for (const auto& [d, q] : n.allocated.entries()) dims.insert(d);
            for (const auto& d : dims) {
                const std::int64_t left = lhs.get(d) - returned_total.get(d);
                if (left != n.allocated.get(d))
                    flag(id, "reconciliation", d, left, n.allocated.get(d));
            }
        }

        // Own consumption plus outstanding allocations must fit the budget.
        for (const auto& [dimension, bound] : n.contract.budget.entries()) {
            if (bound == ResourceVector::kOpen) continue;
            const std::int64_t committed =
                n.ledger.consumed.get(dimension) + n.allocated.get(dimension);
            if (committed > bound) flag(id, "overcommitted", dimension, committed, bound);
        }

        // Subtree consumption respects the node budget.
        const ResourceVector subtree = subtree_consumption(id);
        for (const auto& [dimension, bound] : n.contract.budget.entries()) {
            if (bound == ResourceVector::kOpen) continue;
            if (subtree.get(dimension) > bound)
                flag(id, "subtree", dimension, subtree.get(dimension), bound);
        }
    }
    return report;
}

ConservationReport Engine::check_conservation(Timestamp now) {
    ConservationReport report = verify_conservation();
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"node", v.node},
                              {"check", v.check},
                              {"dimension", v.dimension},
                              {"lhs", v.lhs},
                              {"rhs", v.rhs}});
    // The root of the forest owns the check record; fall back to the first
    // contract ever registered.
    const std::string owner = order_.empty() ? std::string("-") : order_.front();
    trace_.append(now, owner, TraceEventKind::conservation_check,
                  {{"ok", report.ok()}, {"violations", std::move(violations)}});
    return report;
}

} // namespace charter
