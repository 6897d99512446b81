// ql-bridge: command-line workbench for classical models, quantum-logic
// lattices, pragmatic justification, mu-contextual probability, and
// noncontextuality constraint systems.

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "dispatch_table.hpp"
#include "qlbridge/classical_model.hpp"
#include "qlbridge/contextuality.hpp"
#include "qlbridge/errors.hpp"
#include "qlbridge/hilbert.hpp"
#include "qlbridge/model_io.hpp"
#include "qlbridge/mu_context.hpp"
#include "qlbridge/ortho_structure.hpp"
#include "qlbridge/pragmatics.hpp"
#include "qlbridge/wff.hpp"

using namespace qlb;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kPreconditionError = 3;
constexpr int kProcedureDependence = 4; // mean value depends on the procedure
constexpr int kBudgetExhausted = 5;

struct GlobalOptions {
    std::string format = "json";
    unsigned long long seed = 0;
    double tolerance = -1.0; // <0: keep file/default tolerances
    long long budget = 10'000'000;
};

void render_table(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            render_table(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) render_table(v, prefix + "[" + std::to_string(i++) + "]", out);
        if (j.empty()) out << prefix << " = []\n";
    } else {
        out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const Json& j, const GlobalOptions& g) {
    if (g.format == "table")
        render_table(j, "", std::cout);
    else
        std::cout << j.dump(2) << "\n";
}

Json rational_json(const Rational& r) {
    return Json{{"exact", to_string(r)}, {"value", to_double(r)}};
}

Json to_json(const FragmentInfo& f) {
    Json atoms = Json::object();
    for (const auto& [k, n] : f.atom_counts) atoms[k] = n;
    return Json{{"property_only", f.property_only},
                {"has_contextual", f.has_contextual},
                {"atoms", atoms}};
}

Json to_json(const OrthoStructure& s) {
    Json rows = Json::array();
    for (const auto& row : s.leq) {
        std::string bits;
        for (bool b : row) bits.push_back(b ? '1' : '0');
        rows.push_back(bits);
    }
    return Json{{"elements", s.labels}, {"leq_rows", rows}, {"ortho", s.ortho}};
}

Json to_json(const LatticeDiagnostics& d) {
    Json j;
    j["bounded_lattice"] = d.bounded_lattice;
    if (!d.bounded_lattice) j["bound_failure"] = d.bound_failure;
    j["orthomodular"] = Json{{"holds", d.orthomodular.holds}, {"witness", d.orthomodular.witness}};
    j["distributive"] = Json{{"holds", d.distributive.holds}, {"witness", d.distributive.witness}};
    j["boolean"] = d.boolean;
    return j;
}

Json to_json(const std::vector<OrthoViolation>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(Json{{"axiom", v.axiom}, {"witness", v.witness}});
    return arr;
}

Json to_json(const IsoResult& iso) {
    Json j;
    j["isomorphic"] = iso.mapping.has_value();
    j["classes_left"] = iso.classes_a;
    j["classes_right"] = iso.classes_b;
    if (iso.mapping)
        j["mapping"] = *iso.mapping;
    else
        j["refutation"] = iso.refutation;
    return j;
}

Json to_json(const ProbabilityReport& r) {
    Json per = Json::object();
    for (const auto& [mid, v] : r.per_procedure) per[mid] = rational_json(v);
    return Json{{"value", rational_json(r.value)},
                {"per_procedure", per},
                {"spread", rational_json(r.spread)},
                {"procedure_independent", r.tprime_ok}};
}

Json to_json(const SolveResult& r) {
    Json j;
    j["mode"] = r.mode == SolveMode::mcp ? "mcp" : "mgp";
    j["status"] = to_string(r.status);
    j["nodes_explored"] = r.nodes_explored;
    if (r.witness) {
        Json w = Json::object();
        for (const auto& [k, v] : *r.witness) w[k] = v;
        j["witness"] = w;
    }
    if (!r.per_law.empty()) {
        Json arr = Json::array();
        for (const auto& lw : r.per_law) {
            Json e{{"law", lw.law_id}, {"satisfiable", lw.satisfiable}};
            Json w = Json::object();
            for (const auto& [k, v] : lw.witness) w[k] = v;
            e["witness"] = w;
            arr.push_back(e);
        }
        j["per_law"] = arr;
    }
    if (r.audit)
        j["audit"] = Json{{"total", r.audit->total}, {"satisfying", r.audit->satisfying}};
    return j;
}

Json to_json(const GeneralizedMeasureReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"check", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    Json probs = Json::object();
    for (const auto& [e, by_state] : r.q_prob) {
        Json row = Json::object();
        for (const auto& [s, v] : by_state) row[s] = rational_json(v);
        probs[e] = row;
    }
    return Json{{"checks", checks},
                {"all_pass", r.all_pass},
                {"q_probabilities", probs},
                {"diagnostics", to_json(r.diagnostics)}};
}

// Returns the signature block of either a bare signature file or a model file.
Signature load_signature(const std::string& path) {
    Json j = load_json_file(path);
    return signature_from_json(j.contains("signature") ? j.at("signature") : j);
}

bool is_mu_model_file(const Json& j) { return j.contains("procedure_contexts"); }

struct LoadedModel {
    std::optional<MuContextModel> mu;
    ClassicalModel classical; // mu->base when mu is set
    Alphabet alphabet = Alphabet::basic;
};

LoadedModel load_model(const std::string& path) {
    Json j = load_json_file(path);
    LoadedModel out;
    if (is_mu_model_file(j)) {
        out.mu = mu_context_model_from_json(j);
        out.classical = out.mu->base;
        out.alphabet = Alphabet::contextual;
    } else {
        out.classical = classical_model_from_json(j);
        out.alphabet = Alphabet::basic;
    }
    return out;
}

MuContextModel load_mu_model(const std::string& path) {
    Json j = load_json_file(path);
    if (!is_mu_model_file(j))
        throw InputError("file '" + path + "' is not a mu-context model (no procedure_contexts)");
    return mu_context_model_from_json(j);
}

HilbertBundle load_bundle(const std::string& path, double tolerance_override) {
    Json j = load_json_file(path);
    if (tolerance_override > 0) j["tolerance"] = tolerance_override;
    return hilbert_bundle_from_json(j);
}

Vector pure_vector_of(const QuantumState& s, double tol) {
    double purity = (s.density * s.density).trace().real();
    if (std::abs(purity - 1.0) > std::max(tol, 1e-9))
        throw PreconditionError("evaluation point must be a pure state");
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.density);
    Eigen::Index best;
    es.eigenvalues().maxCoeff(&best);
    return es.eigenvectors().col(best);
}

ProjectionLattice bundle_lattice(const HilbertBundle& b) {
    return make_projection_lattice(b.space.dim, b.space.tol, b.elements);
}

int tprime_exit(const ProbabilityReport& r) {
    return r.tprime_ok ? kOk : kProcedureDependence;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for classical/quantum logical structures, mu-contextual "
                 "probability, and noncontextuality analyses"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--format", g.format, "output format: json or table")
        ->check(CLI::IsMember({"json", "table"}));
    app.add_option("--seed", g.seed, "random seed for sampling commands");
    app.add_option("--tolerance", g.tolerance, "numerical tolerance override");
    app.add_option("--budget", g.budget, "search/enumeration node budget");

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "parse a wff and print its canonical form");
    std::string parse_text, parse_sig, parse_fragment = "basic";
    cmd_parse->add_option("wff", parse_text)->required();
    cmd_parse->add_option("--sig", parse_sig, "signature or model file")->required();
    cmd_parse->add_option("--fragment", parse_fragment)
        ->check(CLI::IsMember({"basic", "contextual"}));

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "extension of a wff in a classical model");
    std::string eval_text, eval_model, eval_at;
    cmd_eval->add_option("wff", eval_text)->required();
    cmd_eval->add_option("model", eval_model)->required();
    cmd_eval->add_option("--at", eval_at, "also report the truth value at this object");

    // preorder
    auto* cmd_pre = app.add_subcommand("preorder", "logical and physical preorder of two wffs");
    std::string pre_a, pre_b, pre_model;
    cmd_pre->add_option("a", pre_a)->required();
    cmd_pre->add_option("b", pre_b)->required();
    cmd_pre->add_option("model", pre_model)->required();

    // concrete-logic
    auto* cmd_cl = app.add_subcommand(
        "concrete-logic", "verifiable wffs under the physical preorder with an ortho map");
    std::string cl_spec;
    cmd_cl->add_option("spec", cl_spec, "JSON with model, candidates, ortho, overrides")
        ->required();

    // lattice-check
    auto* cmd_lat = app.add_subcommand("lattice-check", "orthomodularity/distributivity report");
    std::string lat_file;
    cmd_lat->add_option("lattice", lat_file)->required();

    // born
    auto* cmd_born = app.add_subcommand("born", "Born probability of a projection in a state");
    std::string born_file, born_state, born_proj;
    cmd_born->add_option("lattice", born_file)->required();
    cmd_born->add_option("--state", born_state)->required();
    cmd_born->add_option("--projection", born_proj)->required();

    // pragmatic-eval
    auto* cmd_peval = app.add_subcommand("pragmatic-eval",
                                         "justification value of an assertive formula");
    std::string peval_file, peval_formula, peval_state;
    cmd_peval->add_option("lattice", peval_file, "bundle with property projections and states")
        ->required();
    cmd_peval->add_option("--formula", peval_formula)->required();
    cmd_peval->add_option("--state", peval_state)->required();

    // pragmatic-structure
    auto* cmd_pstr = app.add_subcommand(
        "pragmatic-structure", "quotient order of assertive formulas over bound atoms");
    std::string pstr_file;
    std::vector<std::string> pstr_atoms;
    int pstr_depth = 3;
    bool pstr_compare = false;
    cmd_pstr->add_option("lattice", pstr_file)->required();
    cmd_pstr->add_option("--atoms", pstr_atoms, "atom subset (default: all elements)");
    cmd_pstr->add_option("--depth", pstr_depth);
    cmd_pstr->add_flag("--compare", pstr_compare,
                       "check isomorphism against the generated projection lattice");

    // prob group
    auto* cmd_prob = app.add_subcommand("prob", "mu-contextual probability operations");
    cmd_prob->require_subcommand(1);

    auto* prob_cond = cmd_prob->add_subcommand("cond", "conditional probability p(a|b)");
    std::string pc_model, pc_a, pc_b;
    prob_cond->add_option("model", pc_model)->required();
    prob_cond->add_option("--a", pc_a)->required();
    prob_cond->add_option("--b", pc_b)->required();

    auto* prob_mean = cmd_prob->add_subcommand("mean", "mean conditional probability");
    std::string pm_model, pm_a, pm_b;
    prob_mean->add_option("model", pm_model)->required();
    prob_mean->add_option("--a", pm_a)->required();
    prob_mean->add_option("--b", pm_b)->required();

    auto* prob_q = cmd_prob->add_subcommand("q", "Q-probability of a property in a state");
    std::string pq_model, pq_state, pq_property;
    prob_q->add_option("model", pq_model)->required();
    prob_q->add_option("--state", pq_state)->required();
    prob_q->add_option("--property", pq_property)->required();

    auto* prob_cq = cmd_prob->add_subcommand(
        "cond-q", "conditional Q-probability via successive measurements");
    std::string cq_model, cq_property, cq_given, cq_state;
    bool cq_shared = false, cq_collapse = false;
    prob_cq->add_option("model", cq_model)->required();
    prob_cq->add_option("--property", cq_property)->required();
    prob_cq->add_option("--given", cq_given)->required();
    prob_cq->add_option("--state", cq_state)->required();
    prob_cq->add_flag("--shared-draw", cq_shared, "share one context draw across both stages");
    prob_cq->add_flag("--collapse", cq_collapse,
                      "first collapse the model to a single context and procedure");

    auto* prob_syn = cmd_prob->add_subcommand("synthesize",
                                              "build a mu-context model from Born probabilities");
    std::string syn_bundle, syn_out;
    int syn_resolution = 1000;
    double syn_require = -1.0;
    bool syn_skip_check = false;
    prob_syn->add_option("lattice", syn_bundle, "bundle with states and property projections")
        ->required();
    prob_syn->add_option("--resolution", syn_resolution);
    prob_syn->add_option("--out", syn_out, "write the synthesized model to this file");
    prob_syn->add_option("--require-tolerance", syn_require,
                         "fail when the grid cannot meet this deviation bound");
    prob_syn->add_flag("--skip-measure-check", syn_skip_check);

    auto* prob_sample = cmd_prob->add_subcommand("sample", "Monte-Carlo mean probability run");
    std::string ps_model, ps_a, ps_b;
    std::size_t ps_trials = 100000;
    prob_sample->add_option("model", ps_model)->required();
    prob_sample->add_option("--a", ps_a)->required();
    prob_sample->add_option("--b", ps_b)->required();
    prob_sample->add_option("--trials", ps_trials);

    // ks group
    auto* cmd_ks = app.add_subcommand("ks", "observable constraint systems");
    cmd_ks->require_subcommand(1);
    auto* ks_solve = cmd_ks->add_subcommand("solve", "solve in mcp or mgp mode");
    std::string kss_file, kss_mode = "mcp";
    bool kss_audit = false;
    ks_solve->add_option("instance", kss_file)->required();
    ks_solve->add_option("--mode", kss_mode)->check(CLI::IsMember({"mcp", "mgp"}));
    ks_solve->add_flag("--audit", kss_audit, "exhaustively verify the verdict");
    auto* ks_report = cmd_ks->add_subcommand("report", "full contextuality proof-scheme report");
    std::string ksr_file;
    ks_report->add_option("instance", ksr_file)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_parse) {
            Signature sig = load_signature(parse_sig);
            Alphabet alphabet =
                parse_fragment == "contextual" ? Alphabet::contextual : Alphabet::basic;
            WffPtr w = parse(parse_text, sig, alphabet);
            emit(Json{{"canonical", print(*w)},
                      {"fragment", to_json(fragment_of(*w))}},
                 g);
            return kOk;
        }

        if (*cmd_eval) {
            LoadedModel lm = load_model(eval_model);
            WffPtr w = parse(eval_text, lm.classical.signature, lm.alphabet);
            ObjectSet ext = extension(*w, lm.classical);
            std::vector<std::string> members;
            for (std::size_t i : ext.members()) members.push_back(lm.classical.universe[i]);
            Json j{{"wff", print(*w)},
                   {"extension", members},
                   {"measure", rational_json(lm.classical.measure(ext))}};
            if (!eval_at.empty()) j["holds_at"] = holds_at(*w, lm.classical, eval_at);
            emit(j, g);
            return kOk;
        }

        if (*cmd_pre) {
            LoadedModel lm = load_model(pre_model);
            WffPtr a = parse(pre_a, lm.classical.signature, lm.alphabet);
            WffPtr b = parse(pre_b, lm.classical.signature, lm.alphabet);
            Json j{{"a", print(*a)}, {"b", print(*b)}};
            j["logical"] = Json{{"a_below_b", logical_preorder(*a, *b, lm.classical)},
                                {"b_below_a", logical_preorder(*b, *a, lm.classical)}};
            bool prop_only = fragment_of(*a).property_only && fragment_of(*b).property_only;
            if (prop_only) {
                j["physical"] = Json{{"a_below_b", physical_preorder(*a, *b, lm.classical)},
                                     {"b_below_a", physical_preorder(*b, *a, lm.classical)}};
                Json ct = Json::object();
                for (const auto& s : lm.classical.signature.states)
                    ct[s] = Json{{"a", to_string(c_truth(*a, s, lm.classical))},
                                 {"b", to_string(c_truth(*b, s, lm.classical))}};
                j["certain_truth"] = ct;
            }
            emit(j, g);
            return kOk;
        }

        if (*cmd_cl) {
            Json spec = load_json_file(cl_spec);
            ClassicalModel model =
                spec.contains("model_file")
                    ? classical_model_from_json(load_json_file(spec.at("model_file")))
                    : classical_model_from_json(spec.at("model"));
            std::vector<WffPtr> candidates;
            for (const auto& t : spec.at("candidates"))
                candidates.push_back(
                    parse(t.get<std::string>(), model.signature, Alphabet::basic));
            VerifiabilityOverride ov;
            if (spec.contains("override_add"))
                for (const auto& t : spec.at("override_add"))
                    ov.add.push_back(parse(t.get<std::string>(), model.signature, Alphabet::basic));
            if (spec.contains("override_remove"))
                for (const auto& t : spec.at("override_remove"))
                    ov.remove.push_back(
                        parse(t.get<std::string>(), model.signature, Alphabet::basic));
            std::vector<WffPtr> phi_v = verifiable_wffs(candidates, model, ov);
            std::map<std::string, std::string> ortho;
            for (const auto& [k, v] : spec.at("ortho").items())
                ortho[print(*parse(k, model.signature, Alphabet::basic))] =
                    print(*parse(v.get<std::string>(), model.signature, Alphabet::basic));
            ConcreteLogic logic = concrete_logic(model, phi_v, ortho);
            Json j{{"structure", to_json(logic.structure)},
                   {"violations", to_json(logic.violations)},
                   {"diagnostics", to_json(lattice_diagnostics(logic.structure))}};
            if (spec.contains("compare_lattice")) {
                HilbertBundle b = load_bundle(spec.at("compare_lattice"), g.tolerance);
                j["isomorphism"] =
                    to_json(order_isomorphic(logic.structure, to_ortho_structure(bundle_lattice(b))));
            }
            emit(j, g);
            return kOk;
        }

        if (*cmd_lat) {
            HilbertBundle b = load_bundle(lat_file, g.tolerance);
            ProjectionLattice L = bundle_lattice(b);
            OrthoStructure s = to_ortho_structure(L);
            emit(Json{{"elements", L.names},
                      {"diagnostics", to_json(lattice_diagnostics(s))},
                      {"weak_ortho_violations", to_json(weak_ortho_violations(s))}},
                 g);
            return kOk;
        }

        if (*cmd_born) {
            HilbertBundle b = load_bundle(born_file, g.tolerance);
            auto st = b.states.find(born_state);
            if (st == b.states.end()) throw InputError("unknown state '" + born_state + "'");
            auto pr = b.elements.find(born_proj);
            if (pr == b.elements.end())
                throw InputError("unknown projection '" + born_proj + "'");
            emit(Json{{"state", born_state},
                      {"projection", born_proj},
                      {"probability", born(st->second, pr->second, b.space.tol)}},
                 g);
            return kOk;
        }

        if (*cmd_peval) {
            HilbertBundle b = load_bundle(peval_file, g.tolerance);
            auto st = b.states.find(peval_state);
            if (st == b.states.end()) throw InputError("unknown state '" + peval_state + "'");
            QuantumProofOracle oracle{b.space.dim, b.space.tol, b.elements};
            oracle.validate();
            Signature sig;
            for (const auto& [name, _] : b.elements) {
                sig.properties.push_back(name);
                sig.procedures[name] = {"M_" + name};
            }
            sig.normalize();
            AfPtr d = parse_assertive(peval_formula, sig);
            Vector point = pure_vector_of(st->second, b.space.tol);
            JustificationSet js = justification_set(*d, oracle);
            emit(Json{{"formula", print(*d)},
                      {"state", peval_state},
                      {"justified", js.contains(point, b.space.tol)},
                      {"justification_subspaces", js.members.size()}},
                 g);
            return kOk;
        }

        if (*cmd_pstr) {
            HilbertBundle b = load_bundle(pstr_file, g.tolerance);
            QuantumProofOracle oracle;
            oracle.dim = b.space.dim;
            oracle.tol = b.space.tol;
            if (pstr_atoms.empty()) {
                oracle.bindings = b.elements;
            } else {
                for (const auto& name : pstr_atoms) {
                    auto it = b.elements.find(name);
                    if (it == b.elements.end())
                        throw InputError("unknown element '" + name + "'");
                    oracle.bindings[name] = it->second;
                }
            }
            oracle.validate();
            QuantumFragmentStructure qf = quantum_fragment_structure(
                oracle, pstr_depth, static_cast<std::size_t>(g.budget));
            Json j{{"structure", to_json(qf.structure)},
                   {"classes", quotient(qf.structure).structure.size()}};
            if (pstr_compare) {
                ProjectionLattice closure =
                    close_projection_lattice(b.space.dim, b.space.tol, oracle.bindings);
                j["isomorphism"] =
                    to_json(order_isomorphic(qf.structure, to_ortho_structure(closure)));
            }
            emit(j, g);
            return kOk;
        }

        if (*prob_cond) {
            MuContextModel m = load_mu_model(pc_model);
            WffPtr a = parse(pc_a, m.signature(), Alphabet::contextual);
            WffPtr b = parse(pc_b, m.signature(), Alphabet::contextual);
            emit(Json{{"a", print(*a)},
                      {"b", print(*b)},
                      {"probability", rational_json(cond_prob(*a, *b, m))},
                      {"a_testable", testable(*a, m)},
                      {"b_testable", testable(*b, m)}},
                 g);
            return kOk;
        }

        if (*prob_mean) {
            MuContextModel m = load_mu_model(pm_model);
            WffPtr a = parse(pm_a, m.signature(), Alphabet::contextual);
            WffPtr b = parse(pm_b, m.signature(), Alphabet::contextual);
            Json j{{"a", print(*a)}, {"b", print(*b)}};
            j["jointly_testable"] = jointly_testable(*a, *b, m);
            std::vector<std::string> props = contextual_properties_of(*a);
            for (const auto& p : contextual_properties_of(*b)) props.push_back(p);
            std::sort(props.begin(), props.end());
            props.erase(std::unique(props.begin(), props.end()), props.end());
            Json compat = Json::object();
            for (const auto& e : props) {
                Json row = Json::object();
                for (const auto& f : props) row[f] = compatible(e, f, m);
                compat[e] = row;
            }
            j["compatibility"] = compat;
            ProbabilityReport r = mean_cond_prob(*a, *b, m);
            j["mean"] = to_json(r);
            emit(j, g);
            return tprime_exit(r);
        }

        if (*prob_q) {
            MuContextModel m = load_mu_model(pq_model);
            ProbabilityReport r = q_probability(pq_property, pq_state, m);
            emit(Json{{"property", pq_property}, {"state", pq_state}, {"q_probability", to_json(r)}},
                 g);
            return tprime_exit(r);
        }

        if (*prob_cq) {
            MuContextModel m = load_mu_model(cq_model);
            if (cq_collapse) m = collapse_contexts(m);
            SuccessiveMeasurementOptions opt;
            opt.shared_context_draw = cq_shared;
            ConditionalQProb r = conditional_q_prob(cq_property, cq_given, cq_state, m, opt);
            Json j{{"property", cq_property},
                   {"given", cq_given},
                   {"state", cq_state},
                   {"collapsed", cq_collapse},
                   {"value", rational_json(r.value)},
                   {"comparator_route", r.comparator_route}};
            if (r.comparator) j["comparator"] = rational_json(*r.comparator);
            if (r.bayes_gap) j["bayes_gap"] = rational_json(*r.bayes_gap);
            emit(j, g);
            return kOk;
        }

        if (*prob_syn) {
            HilbertBundle b = load_bundle(syn_bundle, g.tolerance);
            if (b.states.empty())
                throw InputError("synthesis needs states in the bundle file");
            std::optional<double> require;
            if (syn_require > 0) require = syn_require;
            SynthesisResult sr = born_model_synthesize(b.space, b.states, b.elements,
                                                       syn_resolution, require);
            Json j{{"resolution", syn_resolution},
                   {"universe_size", sr.model.base.universe.size()},
                   {"max_deviation", sr.max_deviation},
                   {"worst_pair", sr.worst_pair},
                   {"lattice_declared", sr.model.lattice.declared}};
            if (!syn_skip_check && sr.model.lattice.declared)
                j["measure_check"] = to_json(generalized_measure_check(sr.model));
            if (!syn_out.empty()) {
                std::ofstream out(syn_out);
                if (!out) throw InputError("cannot write '" + syn_out + "'");
                out << mu_context_model_to_json(sr.model).dump(2) << "\n";
                j["written"] = syn_out;
            }
            emit(j, g);
            return kOk;
        }

        if (*prob_sample) {
            MuContextModel m = load_mu_model(ps_model);
            WffPtr a = parse(ps_a, m.signature(), Alphabet::contextual);
            WffPtr b = parse(ps_b, m.signature(), Alphabet::contextual);
            Rational freq = mean_probability_measurement(*a, *b, m, ps_trials, g.seed);
            ProbabilityReport mean = mean_cond_prob(*a, *b, m);
            emit(Json{{"a", print(*a)},
                      {"b", print(*b)},
                      {"trials", ps_trials},
                      {"seed", g.seed},
                      {"frequency", rational_json(freq)},
                      {"mean", to_json(mean)}},
                 g);
            return kOk;
        }

        if (*ks_solve) {
            ObservableConstraintSystem sys =
                constraint_system_from_json(load_json_file(kss_file));
            SolveResult r = kss_mode == "mcp" ? mcp_solve(sys, g.budget, kss_audit) : mgp_check(sys);
            emit(to_json(r), g);
            return kOk;
        }

        if (*ks_report) {
            ObservableConstraintSystem sys =
                constraint_system_from_json(load_json_file(ksr_file));
            ContextualityReport r = contextuality_report(sys, g.budget);
            emit(Json{{"mcp", to_json(r.mcp)},
                      {"mgp", to_json(r.mgp)},
                      {"classification", r.classification},
                      {"narrative", r.narrative}},
                 g);
            return r.mcp.status == SolveStatus::inconclusive ? kBudgetExhausted : kOk;
        }

        std::cerr << "no subcommand selected\n";
        return kInputError;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kBudgetExhausted;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kPreconditionError;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
