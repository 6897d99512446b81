#pragma once

#include <cstddef>

namespace qlb::cli {

// Which library operations each subcommand reaches. The coverage test audits
// that every public operation appears here at least once.
struct DispatchEntry {
    const char* subcommand;
    const char* operations; // space-separated operation ids
};

inline constexpr DispatchEntry kDispatchTable[] = {
    {"parse", "core.parse core.print core.fragment_of"},
    {"eval", "core.parse classical.extension classical.evaluate"},
    {"preorder", "classical.logical_preorder classical.physical_preorder classical.c_truth"},
    {"concrete-logic", "classical.verifiable_wffs classical.concrete_logic"},
    {"lattice-check", "hilbert.ortho hilbert.lattice_diagnostics"},
    {"born", "hilbert.born"},
    {"pragmatic-eval", "pragmatics.justify pragmatics.justification_set"},
    {"pragmatic-structure",
     "pragmatics.quantum_fragment_structure pragmatics.pragmatic_preorder hilbert.meet "
     "hilbert.join hilbert.order_isomorphic"},
    {"prob cond", "prob.cond_prob prob.testable"},
    {"prob mean", "prob.mean_cond_prob prob.jointly_testable prob.compatibility"},
    {"prob q", "prob.q_probability"},
    {"prob cond-q", "prob.conditional_q_prob prob.collapse_contexts"},
    {"prob synthesize", "prob.born_model_synthesize prob.generalized_measure_check"},
    {"prob sample", "prob.mean_probability_measurement"},
    {"ks solve", "ks.check_law ks.mcp_solve ks.mgp_check"},
    {"ks report", "ks.contextuality_report"},
};

inline constexpr std::size_t kDispatchTableSize =
    sizeof(kDispatchTable) / sizeof(kDispatchTable[0]);

} // namespace qlb::cli
