#include "qlbridge/contextuality.hpp"

#include <algorithm>

#include "qlbridge/errors.hpp"

namespace qlb {

const Observable& ObservableConstraintSystem::observable(const std::string& id) const {
    for (const auto& o : observables)
        if (o.id == id) return o;
    throw InputError("unknown observable '" + id + "'");
}

void ObservableConstraintSystem::validate() const {
    for (const auto& o : observables)
        if (o.domain.empty())
            throw InputError("observable '" + o.id + "' has an empty value domain");
    for (const auto& c : contexts)
        for (const auto& id : c.observables) observable(id);
    for (const auto& law : laws) {
        auto ctx = std::find_if(contexts.begin(), contexts.end(),
                                [&](const ObservableContext& c) { return c.id == law.context; });
        if (ctx == contexts.end())
            throw InputError("law '" + law.id + "' bound to unknown context '" + law.context + "'");
        for (const auto& id : law.observables) {
            observable(id);
            if (std::find(ctx->observables.begin(), ctx->observables.end(), id) ==
                ctx->observables.end())
                throw InputError("law '" + law.id + "' uses observable '" + id +
                                 "' outside its context '" + law.context + "'");
        }
        if (law.form == Law::Form::table)
            for (const auto& row : law.allowed)
                if (row.size() != law.observables.size())
                    throw InputError("law '" + law.id + "' has an allowed tuple of wrong arity");
    }
}

bool check_law(const Assignment& assignment, const Law& law,
               const ObservableConstraintSystem& sys) {
    std::vector<long long> values;
    values.reserve(law.observables.size());
    for (const auto& id : law.observables) {
        auto it = assignment.find(id);
        if (it == assignment.end())
            throw InputError("assignment misses observable '" + id + "' of law '" + law.id + "'");
        const auto& dom = sys.observable(id).domain;
        if (std::find(dom.begin(), dom.end(), it->second) == dom.end())
            throw InputError("value " + std::to_string(it->second) + " for '" + id +
                             "' is outside its domain");
        values.push_back(it->second);
    }
    switch (law.form) {
    case Law::Form::sum: {
        long long acc = 0;
        for (long long v : values) acc += v;
        return acc == law.target;
    }
    case Law::Form::product: {
        long long acc = 1;
        for (long long v : values) acc *= v;
        return acc == law.target;
    }
    case Law::Form::table:
        return std::find(law.allowed.begin(), law.allowed.end(), values) != law.allowed.end();
    }
    throw std::logic_error("unreachable");
}

namespace {

struct SearchPlan {
    std::vector<std::string> order;                 // variable order
    std::vector<std::vector<std::size_t>> law_at;   // laws fully assigned at step i
};

// Static most-constrained-first order: observables touched by more laws
// come first; ties break on declaration order. Each law is checked at the
// earliest step where all its observables are assigned.
SearchPlan plan_search(const ObservableConstraintSystem& sys,
                       const std::vector<std::size_t>& law_indices) {
    std::map<std::string, int> uses;
    for (const auto& o : sys.observables) uses[o.id] = 0;
    for (std::size_t li : law_indices)
        for (const auto& id : sys.laws[li].observables) uses[id] += 1;

    SearchPlan plan;
    for (const auto& o : sys.observables) plan.order.push_back(o.id);
    std::stable_sort(plan.order.begin(), plan.order.end(),
                     [&](const std::string& a, const std::string& b) { return uses[a] > uses[b]; });

    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < plan.order.size(); ++i) position[plan.order[i]] = i;
    plan.law_at.resize(plan.order.size());
    for (std::size_t li : law_indices) {
        std::size_t last = 0;
        for (const auto& id : sys.laws[li].observables) last = std::max(last, position.at(id));
        if (!sys.laws[li].observables.empty()) plan.law_at[last].push_back(li);
    }
    return plan;
}

struct Searcher {
    const ObservableConstraintSystem& sys;
    const SearchPlan& plan;
    long long budget;
    long long nodes = 0;
    Assignment current;

    bool dfs(std::size_t step) {
        if (step == plan.order.size()) {
            // Laws with no observables are vacuous except an empty table.
            return true;
        }
        const Observable& obs = sys.observable(plan.order[step]);
        for (long long v : obs.domain) {
            if (++nodes > budget)
                throw BudgetExhausted("search exceeded the node budget of " +
                                      std::to_string(budget));
            current[obs.id] = v;
            bool ok = true;
            for (std::size_t li : plan.law_at[step])
                if (!check_law(current, sys.laws[li], sys)) {
                    ok = false;
                    break;
                }
            if (ok && dfs(step + 1)) return true;
        }
        current.erase(obs.id);
        return false;
    }
};

std::optional<ExhaustiveAudit> run_audit(const ObservableConstraintSystem& sys,
                                         long long audit_limit) {
    long long total = 1;
    for (const auto& o : sys.observables) {
        total *= static_cast<long long>(o.domain.size());
        if (total > audit_limit) return std::nullopt;
    }
    ExhaustiveAudit audit;
    audit.total = total;
    std::vector<std::size_t> digits(sys.observables.size(), 0);
    Assignment a;
    for (long long it = 0; it < total; ++it) {
        for (std::size_t i = 0; i < sys.observables.size(); ++i)
            a[sys.observables[i].id] = sys.observables[i].domain[digits[i]];
        bool ok = true;
        for (const auto& law : sys.laws)
            if (!check_law(a, law, sys)) {
                ok = false;
                break;
            }
        if (ok) ++audit.satisfying;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (++digits[i] < sys.observables[i].domain.size()) break;
            digits[i] = 0;
        }
    }
    return audit;
}

} // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::satisfiable: return "SAT";
    case SolveStatus::unsatisfiable: return "UNSAT";
    case SolveStatus::inconclusive: return "INCONCLUSIVE";
    }
    throw std::logic_error("unreachable");
}

SolveResult mcp_solve(const ObservableConstraintSystem& sys, long long budget, bool with_audit,
                      long long audit_limit) {
    sys.validate();
    SolveResult result;
    result.mode = SolveMode::mcp;

    // Laws over zero observables are decided by a single evaluation.
    for (const auto& law : sys.laws)
        if (law.observables.empty() && !check_law({}, law, sys)) {
            result.status = SolveStatus::unsatisfiable;
            if (with_audit) result.audit = run_audit(sys, audit_limit);
            return result;
        }

    std::vector<std::size_t> all_laws(sys.laws.size());
    for (std::size_t i = 0; i < all_laws.size(); ++i) all_laws[i] = i;
    SearchPlan plan = plan_search(sys, all_laws);
    Searcher searcher{sys, plan, budget};
    bool sat = searcher.dfs(0);
    result.nodes_explored = searcher.nodes;
    result.status = sat ? SolveStatus::satisfiable : SolveStatus::unsatisfiable;
    if (sat) result.witness = searcher.current;
    if (with_audit) result.audit = run_audit(sys, audit_limit);
    return result;
}

SolveResult mgp_check(const ObservableConstraintSystem& sys) {
    sys.validate();
    SolveResult result;
    result.mode = SolveMode::mgp;
    bool all_sat = true;
    for (std::size_t li = 0; li < sys.laws.size(); ++li) {
        const Law& law = sys.laws[li];
        LawWitness lw;
        lw.law_id = law.id;
        if (law.observables.empty()) {
            lw.satisfiable = check_law({}, law, sys);
        } else {
            // Search only this law's own observables.
            ObservableConstraintSystem sub;
            for (const auto& id : law.observables) sub.observables.push_back(sys.observable(id));
            sub.contexts.push_back({law.context, law.observables});
            sub.laws.push_back(law);
            SearchPlan plan = plan_search(sub, {0});
            Searcher searcher{sub, plan, 10'000'000};
            lw.satisfiable = searcher.dfs(0);
            result.nodes_explored += searcher.nodes;
            if (lw.satisfiable) lw.witness = searcher.current;
        }
        all_sat = all_sat && lw.satisfiable;
        result.per_law.push_back(std::move(lw));
    }
    result.status = all_sat ? SolveStatus::satisfiable : SolveStatus::unsatisfiable;
    return result;
}

ContextualityReport contextuality_report(const ObservableConstraintSystem& sys, long long budget) {
    ContextualityReport r;
    try {
        r.mcp = mcp_solve(sys, budget, /*with_audit=*/true);
    } catch (const BudgetExhausted&) {
        r.mcp.mode = SolveMode::mcp;
        r.mcp.status = SolveStatus::inconclusive;
    }
    r.mgp = mgp_check(sys);

    r.narrative.push_back("laws under test: " + std::to_string(sys.laws.size()) +
                          ", each binding one context of mutually compatible observables");
    r.narrative.push_back(
        "assume (ad absurdum) that all observables carry values independent of any measurement: "
        "one global assignment must satisfy every law");

    bool mcp_unsat = r.mcp.status == SolveStatus::unsatisfiable;
    bool mgp_sat = r.mgp.status == SolveStatus::satisfiable;

    if (sys.laws.empty()) {
        r.classification = "vacuously satisfiable";
        r.narrative.push_back("no laws: the assumption is vacuously consistent");
        return r;
    }

    if (mcp_unsat) {
        r.narrative.push_back("every global assignment contradicts some law" +
                              (r.mcp.audit ? " (exhaustively verified over " +
                                                 std::to_string(r.mcp.audit->total) +
                                                 " assignments, " +
                                                 std::to_string(r.mcp.audit->satisfying) +
                                                 " satisfying)"
                                           : std::string()));
        if (mgp_sat) {
            r.classification =
                "contextual under the all-contexts-truth assumption; per-law value assignments "
                "exist when each law is constrained only where it can be checked";
            r.narrative.push_back(
                "requiring every law to hold in every physical context forces rejecting the "
                "value-assignment assumption; dropping that requirement, each law keeps a "
                "satisfying assignment in its own context and no contradiction remains");
        } else {
            r.classification = "unsatisfiable even per law";
            r.narrative.push_back("some law admits no satisfying assignment on its own context");
        }
    } else if (r.mcp.status == SolveStatus::satisfiable) {
        r.classification = "no contradiction under either mode";
        r.narrative.push_back("a global noncontextual value assignment exists");
    } else {
        r.classification = "inconclusive (budget exhausted)";
    }
    return r;
}

} // namespace qlb
