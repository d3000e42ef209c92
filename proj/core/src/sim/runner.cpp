#include "charter/sim/runner.hpp"

#include <algorithm>

#include "charter/engine.hpp"
#include "charter/errors.hpp"
#include "charter/sim/rng.hpp"

namespace charter::sim {

namespace {

struct TrialContext {
    Engine engine;
    SplitMix64 rng;
    Timestamp now = 0;

    TrialContext(std::uint64_t trial_seed) : rng(trial_seed) {}
};

ContractSpec to_contract_spec(const ContractTemplate& tmpl, std::string contract_id) {
    ContractSpec spec;
    spec.contract_id = std::move(contract_id);
    spec.budget = tmpl.budget;
    spec.tau = tmpl.tau_ms;
    spec.success = tmpl.success;
    spec.skills = tmpl.skills;
    spec.input.schema_id = "sim/task";
    spec.output.schema_id = "sim/result";
    spec.output.q_min = tmpl.q_min;
    return spec;
}

/// Truth values for every configured criterion. The simulator synthesizes
/// two signals: convergence (the task finished) and quality (the per-trial
/// quality draw met q_min). Unknown criterion ids read false.
std::map<std::string, bool> build_truth(const SuccessCriteria& success, bool converged,
                                        bool quality) {
    std::map<std::string, bool> truth;
    for (const auto& criterion : success.criteria) {
        if (criterion.criterion_id == "converged")
            truth[criterion.criterion_id] = converged;
        else if (criterion.criterion_id == "quality")
            truth[criterion.criterion_id] = quality;
        else
            truth[criterion.criterion_id] = false;
    }
    return truth;
}

bool draw_quality_flag(SplitMix64& rng, const SimAgentModel& model, double q_min) {
    const double q = rng.uniform(model.quality_distribution.min, model.quality_distribution.max);
    return q >= q_min;
}

/// One simulated call: draw, advance the clock, record post-hoc, run alert
/// checks (contracted only) and evaluate the guards.
GuardDecision do_call(TrialContext& ctx, const std::string& contract_id,
                      const SimAgentModel& model, bool contracted, double reasoning_mult,
                      std::int64_t iteration, const std::vector<double>& thresholds,
                      const std::map<std::string, bool>& truth) {
    Engine& engine = ctx.engine;

    double shrink = 1.0;
    if (contracted && model.budget_aware)
        shrink = budget_aware_shrink(engine.monitor_contract(contract_id, ctx.now).aggregate);
    const CallDraw draw = draw_call(ctx.rng, model, iteration, shrink, reasoning_mult);

    // Skill usage: draw every configured skill so the stream stays aligned,
    // use the first authorized one. A denied skill means the tool is
    // unavailable; the call itself still happens.
    std::optional<std::string> used_skill;
    for (const auto& [skill_id, probability] : model.per_call_skills) {
        if (!ctx.rng.bernoulli(probability)) continue;
        const SkillDecision decision = engine.authorize(contract_id, skill_id);
        if (decision.allowed && !used_skill) used_skill = skill_id;
    }

    ctx.now += draw.duration_ms;
    ResourceVector delta;
    delta.set(dim::token, draw.tokens.total());
    if (engine.contract(contract_id).budget.has(dim::llm_call)) delta.set(dim::llm_call, 1);

    engine.record(contract_id, delta, draw.tokens, used_skill, ctx.now);
    if (contracted && !thresholds.empty()) engine.check_alerts(contract_id, ctx.now, thresholds);
    return engine.step(contract_id, ctx.now, false, truth);
}

struct LoopOptions {
    bool contracted = true;
    double reasoning_mult = 1.0;
    std::vector<double> thresholds;
    bool allow_topups = false;
    double topup_threshold = 0.8;
};

/// Runs one contract to its terminal state: calls, convergence draws and
/// (when the budget tracks them) iteration ticks. Returns iterations started.
std::int64_t run_agent_loop(TrialContext& ctx, const std::string& contract_id,
                            const SimAgentModel& coder, const SimAgentModel* reviewer,
                            bool quality_flag, const LoopOptions& options) {
    Engine& engine = ctx.engine;
    const SuccessCriteria criteria = engine.contract(contract_id).success;
    const bool tick_iterations = engine.contract(contract_id).budget.has(dim::iteration);
    const SimAgentModel& decider = reviewer ? *reviewer : coder;

    bool converged = false;
    auto truth = build_truth(criteria, converged, quality_flag);

    std::int64_t iteration = 0;
    while (engine.contract(contract_id).active()) {
        ++iteration;

        if (options.allow_topups && options.contracted) {
            const double aggregate =
                engine.monitor_contract(contract_id, ctx.now).aggregate;
            if (aggregate >= options.topup_threshold) {
                ResourceVector want;
                want.set(dim::token, max_call_tokens(coder, iteration));
                engine.request_topup(contract_id, want, ctx.now);
            }
        }

        if (!do_call(ctx, contract_id, coder, options.contracted, options.reasoning_mult,
                     iteration, options.thresholds, truth)
                 .stay())
            break;
        if (reviewer &&
            !do_call(ctx, contract_id, *reviewer, options.contracted, options.reasoning_mult,
                     iteration, options.thresholds, truth)
                 .stay())
            break;

        if (ctx.rng.bernoulli(decider.convergence_prob_per_iteration)) {
            converged = true;
            truth = build_truth(criteria, converged, quality_flag);
            if (!engine.step(contract_id, ctx.now, false, truth).stay()) break;
        }

        if (tick_iterations) {
            ResourceVector tick;
            tick.set(dim::iteration, 1);
            engine.record(contract_id, tick, std::nullopt, std::nullopt, ctx.now);
            if (!engine.step(contract_id, ctx.now, false, truth).stay()) break;
        }
    }
    return iteration;
}

TrialTrace finalize(TrialContext& ctx, const std::string& root_id, std::uint64_t trial_index,
                    std::optional<ModeKind> mode, std::int64_t iterations,
                    std::string disposition = "completed",
                    std::optional<bool> conservation_ok = std::nullopt) {
    TrialTrace trial;
    trial.trial_index = trial_index;
    trial.mode = mode;
    trial.events = ctx.engine.trace().events();
    trial.root_id = root_id;
    trial.iterations_used = iterations;
    trial.disposition = std::move(disposition);
    trial.conservation_ok = conservation_ok;

    for (const auto& id : ctx.engine.contract_ids()) {
        const Contract& contract = ctx.engine.contract(id);
        const Ledger& ledger = ctx.engine.ledger(id);
        trial.outcome[id] = contract.state;
        trial.totals[id] = ledger.consumed;
        trial.total_tokens += ledger.consumed.get(dim::token);
        trial.reasoning_tokens += ledger.token_detail.reasoning_tokens;
    }
    trial.root_outcome = ctx.engine.contract(root_id).state;
    trial.success = trial.root_outcome == Lifecycle::fulfilled;
    return trial;
}

std::uint64_t trial_stream(std::size_t mode_index, std::uint64_t trial) {
    return (static_cast<std::uint64_t>(mode_index) << 32) | trial;
}

TrialTrace run_one_iterative(const ScenarioSpec& spec, const IterativeParams& params,
                             std::optional<ModeKind> mode, std::uint64_t trial_index,
                             std::uint64_t trial_seed) {
    TrialContext ctx(trial_seed);
    const bool contracted = spec.condition == Condition::contracted;

    ContractTemplate tmpl = spec.contract_template(params.template_name);
    double reasoning_mult = 1.0;
    if (mode) {
        tmpl = apply_mode(*mode, tmpl);
        reasoning_mult = mode_profile(*mode).reasoning_multiplier;
    }
    if (!contracted) {
        ResourceVector budget;
        budget.set(dim::iteration, params.uncontracted_iteration_cap);
        for (const auto& dimension : params.uncontracted_open) budget.mark_open(dimension);
        tmpl.budget = budget;
        tmpl.tau_ms = params.uncontracted_tau_ms;
    }

    const SimAgentModel& coder = spec.agent(params.coder_role);
    const SimAgentModel* reviewer =
        params.reviewer_role ? &spec.agent(*params.reviewer_role) : nullptr;

    const std::string id = ctx.engine.draft(to_contract_spec(tmpl, "main"), ctx.now);
    ctx.engine.activate(id, ctx.now);
    const bool quality_flag = draw_quality_flag(ctx.rng, coder, tmpl.q_min);

    LoopOptions options;
    options.contracted = contracted;
    options.reasoning_mult = reasoning_mult;
    options.thresholds = spec.alert_thresholds;
    const std::int64_t iterations =
        run_agent_loop(ctx, id, coder, reviewer, quality_flag, options);

    return finalize(ctx, id, trial_index, mode, iterations);
}

TrialTrace run_one_orchestrator(const ScenarioSpec& spec, const OrchestratorParams& params,
                                std::uint64_t trial_index, std::uint64_t trial_seed) {
    TrialContext ctx(trial_seed);
    Engine& engine = ctx.engine;
    const bool contracted = spec.condition == Condition::contracted;

    ContractTemplate root_tmpl = spec.contract_template(params.root_template);
    if (!contracted) {
        // No delegation limits: the pipeline runs with open dimensions.
        ResourceVector open;
        for (const auto& [dimension, bound] : root_tmpl.budget.entries())
            open.mark_open(dimension);
        root_tmpl.budget = open;
    }
    const std::string root = engine.draft(to_contract_spec(root_tmpl, "orchestrator"), ctx.now);
    engine.activate(root, ctx.now);
    const Timestamp root_deadline = *engine.contract(root).temporal.deadline();

    std::vector<std::string> worker_ids;
    if (contracted) {
        AllocationPlan plan;
        switch (params.strategy) {
            case AllocationStrategy::proportional: {
                std::vector<double> weights;
                for (const auto& worker : params.workers) weights.push_back(worker.weight);
                plan = allocate_proportional(engine.contract(root).budget, weights,
                                             spec.reserve_fraction);
                break;
            }
            case AllocationStrategy::equal:
                plan = allocate_equal(engine.contract(root).budget, params.workers.size(),
                                      spec.reserve_fraction);
                break;
            case AllocationStrategy::negotiated: {
                std::vector<ResourceVector> requests;
                for (const auto& worker : params.workers) requests.push_back(worker.request);
                plan = allocate_negotiated(engine.contract(root).budget, requests,
                                           spec.reserve_fraction, spec.cap_multiplier);
                break;
            }
        }
        plan.parent_id = root;
        std::vector<ContractSpec> child_specs;
        for (std::size_t i = 0; i < params.workers.size(); ++i) {
            const auto& worker = params.workers[i];
            plan.child_allocations[i].label = worker.name;
            ContractTemplate child_tmpl = spec.contract_template(worker.template_name);
            child_tmpl.tau_ms = std::min<DurationMs>(child_tmpl.tau_ms, root_deadline - ctx.now);
            child_specs.push_back(to_contract_spec(child_tmpl, worker.name));
        }
        worker_ids = engine.draft_subcontracts(root, plan, std::move(child_specs), ctx.now);
    } else {
        for (const auto& worker : params.workers) {
            ContractTemplate child_tmpl = spec.contract_template(worker.template_name);
            ResourceVector open;
            for (const auto& [dimension, bound] : child_tmpl.budget.entries())
                open.mark_open(dimension);
            child_tmpl.budget = open;
            child_tmpl.tau_ms = std::min<DurationMs>(child_tmpl.tau_ms, root_deadline - ctx.now);
            ContractSpec child_spec = to_contract_spec(child_tmpl, worker.name);
            child_spec.parent_id = root;
            worker_ids.push_back(engine.draft(std::move(child_spec), ctx.now));
        }
    }

    std::int64_t iterations = 0;
    bool all_fulfilled = true;
    for (std::size_t i = 0; i < params.workers.size(); ++i) {
        const auto& worker = params.workers[i];
        const std::string& worker_id = worker_ids[i];
        const SimAgentModel& model = spec.agent(worker.agent);

        engine.activate(worker_id, ctx.now);
        const bool quality_flag =
            draw_quality_flag(ctx.rng, model, engine.contract(worker_id).output.q_min);

        LoopOptions options;
        options.contracted = contracted;
        options.thresholds = spec.alert_thresholds;
        options.allow_topups = params.topups;
        options.topup_threshold = params.topup_threshold;
        iterations += run_agent_loop(ctx, worker_id, model, nullptr, quality_flag, options);

        all_fulfilled = all_fulfilled && engine.contract(worker_id).state == Lifecycle::fulfilled;
        if (contracted) engine.release_child(worker_id, ctx.now);
    }

    const auto& root_criteria = engine.contract(root).success;
    const auto truth = build_truth(root_criteria, all_fulfilled, all_fulfilled);
    if (engine.step(root, ctx.now, false, truth).stay())
        engine.step(root, ctx.now, /*cancel=*/true, truth); // pipeline failed: abort the root

    const ConservationReport conservation = engine.check_conservation(ctx.now);
    return finalize(ctx, root, trial_index, std::nullopt, iterations, "completed",
                    conservation.ok());
}

TrialTrace run_one_routing(const ScenarioSpec& spec, const RoutingParams& params,
                           std::uint64_t trial_index, std::uint64_t trial_seed) {
    TrialContext ctx(trial_seed);
    Engine& engine = ctx.engine;
    const bool contracted = spec.condition == Condition::contracted;

    const ContractTemplate& root_tmpl = spec.contract_template(params.root_template);
    const std::string root = engine.draft(to_contract_spec(root_tmpl, "router"), ctx.now);
    engine.activate(root, ctx.now);
    const Timestamp root_deadline = *engine.contract(root).temporal.deadline();

    // Draw the task category.
    double weight_sum = 0.0;
    for (const auto& task : params.tasks) weight_sum += task.weight;
    double u = ctx.rng.next_double() * weight_sum;
    const RoutingTask* task = &params.tasks.back();
    for (const auto& candidate : params.tasks) {
        if (u < candidate.weight) {
            task = &candidate;
            break;
        }
        u -= candidate.weight;
    }

    // Candidates must cover every required skill and fit the root's budget.
    const ResourceVector root_remaining = engine.remaining_budget(root);
    const SpecialistSpec* chosen = nullptr;
    std::int64_t chosen_cost = 0;
    for (const auto& specialist : params.specialists) {
        const ContractTemplate& tmpl = spec.contract_template(specialist.template_name);
        bool covers = true;
        for (const auto& required : task->required_skills) {
            bool found = false;
            for (const auto& skill : tmpl.skills) found = found || skill.skill_id == required;
            covers = covers && found;
        }
        if (!covers || !tmpl.budget.fits_within(root_remaining)) continue;

        std::int64_t cost = 0;
        for (const auto& skill : tmpl.skills)
            for (const auto& [dimension, quantity] : skill.cost_estimate.entries())
                cost += quantity;
        if (chosen == nullptr || cost < chosen_cost ||
            (cost == chosen_cost && specialist.agent < chosen->agent)) {
            chosen = &specialist;
            chosen_cost = cost;
        }
    }

    if (chosen == nullptr) {
        const auto truth = build_truth(engine.contract(root).success, false, false);
        engine.step(root, ctx.now, /*cancel=*/true, truth);
        const ConservationReport conservation = engine.check_conservation(ctx.now);
        return finalize(ctx, root, trial_index, std::nullopt, 0, "no_specialist",
                        conservation.ok());
    }

    ContractTemplate branch_tmpl = spec.contract_template(chosen->template_name);
    branch_tmpl.tau_ms = std::min<DurationMs>(branch_tmpl.tau_ms, root_deadline - ctx.now);

    // Reserve the chosen branch only; everything else sits in the pool.
    AllocationPlan plan;
    plan.parent_id = root;
    plan.strategy = AllocationStrategy::negotiated;
    plan.source_budget = engine.contract(root).budget;
    plan.child_allocations.push_back(ChildAllocation{chosen->name, branch_tmpl.budget});
    for (const auto& [dimension, bound] : plan.source_budget.entries()) {
        if (bound == ResourceVector::kOpen) continue;
        plan.reserve.set(dimension, bound - branch_tmpl.budget.get(dimension));
    }

    const auto ids = engine.draft_subcontracts(
        root, plan, {to_contract_spec(branch_tmpl, chosen->name)}, ctx.now);
    engine.activate(ids[0], ctx.now);

    const SimAgentModel& model = spec.agent(chosen->agent);
    const bool quality_flag = draw_quality_flag(ctx.rng, model, branch_tmpl.q_min);

    LoopOptions options;
    options.contracted = contracted;
    options.thresholds = spec.alert_thresholds;
    const std::int64_t iterations =
        run_agent_loop(ctx, ids[0], model, nullptr, quality_flag, options);

    const bool branch_ok = engine.contract(ids[0]).state == Lifecycle::fulfilled;
    engine.release_child(ids[0], ctx.now);

    const auto truth = build_truth(engine.contract(root).success, branch_ok, branch_ok);
    if (engine.step(root, ctx.now, false, truth).stay())
        engine.step(root, ctx.now, /*cancel=*/true, truth);

    const ConservationReport conservation = engine.check_conservation(ctx.now);
    return finalize(ctx, root, trial_index, std::nullopt, iterations, "completed",
                    conservation.ok());
}

} // namespace

std::vector<TrialTrace> run_iterative_refinement(const ScenarioSpec& spec) {
    if (spec.pattern != Pattern::iterative_refinement)
        raise(Errc::invalid_pattern, to_string(spec.pattern));
    const IterativeParams& params = *spec.iterative;

    std::vector<TrialTrace> trials;
    if (spec.modes.empty()) {
        trials.reserve(static_cast<std::size_t>(spec.trials));
        for (std::int64_t t = 0; t < spec.trials; ++t)
            trials.push_back(run_one_iterative(
                spec, params, std::nullopt, static_cast<std::uint64_t>(t),
                derive_seed(spec.seed, trial_stream(0, static_cast<std::uint64_t>(t)))));
        return trials;
    }
    for (std::size_t m = 0; m < spec.modes.size(); ++m)
        for (std::int64_t t = 0; t < spec.trials; ++t)
            trials.push_back(run_one_iterative(
                spec, params, spec.modes[m], static_cast<std::uint64_t>(t),
                derive_seed(spec.seed, trial_stream(m, static_cast<std::uint64_t>(t)))));
    return trials;
}

std::vector<TrialTrace> run_orchestrator_workers(const ScenarioSpec& spec) {
    if (spec.pattern != Pattern::orchestrator_workers)
        raise(Errc::invalid_pattern, to_string(spec.pattern));
    std::vector<TrialTrace> trials;
    trials.reserve(static_cast<std::size_t>(spec.trials));
    for (std::int64_t t = 0; t < spec.trials; ++t)
        trials.push_back(run_one_orchestrator(
            spec, *spec.orchestrator, static_cast<std::uint64_t>(t),
            derive_seed(spec.seed, trial_stream(0, static_cast<std::uint64_t>(t)))));
    return trials;
}

std::vector<TrialTrace> run_routing(const ScenarioSpec& spec) {
    if (spec.pattern != Pattern::routing) raise(Errc::invalid_pattern, to_string(spec.pattern));
    std::vector<TrialTrace> trials;
    trials.reserve(static_cast<std::size_t>(spec.trials));
    for (std::int64_t t = 0; t < spec.trials; ++t)
        trials.push_back(run_one_routing(
            spec, *spec.routing, static_cast<std::uint64_t>(t),
            derive_seed(spec.seed, trial_stream(0, static_cast<std::uint64_t>(t)))));
    return trials;
}

std::vector<TrialTrace> run_scenario(const ScenarioSpec& spec) {
    switch (spec.pattern) {
        case Pattern::iterative_refinement: return run_iterative_refinement(spec);
        case Pattern::orchestrator_workers: return run_orchestrator_workers(spec);
        case Pattern::routing: return run_routing(spec);
    }
    raise(Errc::invalid_pattern, "unreachable");
}

} // namespace charter::sim
