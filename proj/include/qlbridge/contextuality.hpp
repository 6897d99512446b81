#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qlb {

struct Observable {
    std::string id;
    std::vector<long long> domain;
};

struct ObservableContext {
    std::string id;
    std::vector<std::string> observables; // declared mutually compatible
};

// A law binds one context and constrains the value tuples of (a subset of)
// its observables: an integer sum, a product over {+1,-1}, or an explicit
// allowed-tuple table.
struct Law {
    enum class Form { sum, product, table };

    std::string id;
    std::string context;
    std::vector<std::string> observables;
    Form form = Form::product;
    long long target = 0;                         // sum/product forms
    std::vector<std::vector<long long>> allowed;  // table form, one row per tuple
};

struct ObservableConstraintSystem {
    std::vector<Observable> observables;
    std::vector<ObservableContext> contexts;
    std::vector<Law> laws;

    const Observable& observable(const std::string& id) const;
    void validate() const;
};

using Assignment = std::map<std::string, long long>;

// Evaluates the law's constraint predicate on an assignment covering its
// observables with in-domain values.
bool check_law(const Assignment& assignment, const Law& law,
               const ObservableConstraintSystem& sys);

enum class SolveStatus { satisfiable, unsatisfiable, inconclusive };

std::string to_string(SolveStatus s);

enum class SolveMode { mcp, mgp };

struct LawWitness {
    std::string law_id;
    bool satisfiable = false;
    Assignment witness;
};

struct ExhaustiveAudit {
    long long total = 0;      // assignments enumerated
    long long satisfying = 0; // assignments satisfying every law
};

struct SolveResult {
    SolveMode mode = SolveMode::mcp;
    SolveStatus status = SolveStatus::unsatisfiable;
    std::optional<Assignment> witness;   // mcp witness
    std::vector<LawWitness> per_law;     // mgp per-law report
    long long nodes_explored = 0;
    std::optional<ExhaustiveAudit> audit;
};

// Noncontextual global value assignment: one assignment over all observables
// must satisfy every law. Backtracking over a most-constrained-first static
// variable order with domain-order values; the first witness matches the
// sequential search. Exceeding `budget` search nodes throws BudgetExhausted
// (inconclusive, never silently unsatisfiable). With `with_audit`, an
// unsatisfiable (or satisfiable) verdict on a system of at most
// `audit_limit` total assignments is double-checked by exhaustive
// enumeration and the count is reported.
SolveResult mcp_solve(const ObservableConstraintSystem& sys, long long budget = 10'000'000,
                      bool with_audit = false, long long audit_limit = 1'000'000);

// Laws constrained only where checkable: each law needs a satisfying
// assignment of its own context's observables, independently; no cross-law
// consistency is demanded.
SolveResult mgp_check(const ObservableConstraintSystem& sys);

struct ContextualityReport {
    SolveResult mcp;
    SolveResult mgp;
    std::string classification;
    std::vector<std::string> narrative; // the proof scheme, step by step
};

// Runs both modes and renders the contextuality proof scheme: the laws, the
// ad-absurdum noncontextual-values assumption, the presence or absence of
// the contradiction, and what rejecting the all-contexts-truth assumption
// changes.
ContextualityReport contextuality_report(const ObservableConstraintSystem& sys,
                                         long long budget = 10'000'000);

} // namespace qlb
