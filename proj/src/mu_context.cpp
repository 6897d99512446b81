#include "qlbridge/mu_context.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qlbridge/errors.hpp"

namespace qlb {

std::optional<std::string> PropertyLatticeSpec::meet_of(const std::string& a,
                                                        const std::string& b) const {
    for (const auto& t : meets)
        if ((t.a == a && t.b == b) || (t.a == b && t.b == a)) return t.value;
    return std::nullopt;
}

std::optional<std::string> PropertyLatticeSpec::join_of(const std::string& a,
                                                        const std::string& b) const {
    for (const auto& t : joins)
        if ((t.a == a && t.b == b) || (t.a == b && t.b == a)) return t.value;
    return std::nullopt;
}

void MuContextModel::validate() const {
    base.validate();
    const Signature& sig = signature();
    for (const auto& [mid, pc] : procedure_contexts) {
        if (pc.contexts.empty())
            throw InputError("procedure '" + mid + "' has no mu-contexts");
        Rational total = 0;
        for (const auto& c : pc.contexts) {
            if (!sig.is_context(c))
                throw InputError("procedure '" + mid + "' uses undeclared mu-context '" + c + "'");
            auto it = pc.q.find(c);
            if (it == pc.q.end())
                throw InputError("procedure '" + mid + "' missing q for mu-context '" + c + "'");
            if (it->second < 0)
                throw InputError("procedure '" + mid + "' has negative q at '" + c + "'");
            total += it->second;
        }
        if (total != 1)
            throw InputError("q distribution of procedure '" + mid + "' sums to " +
                             to_string(total));
    }
    for (const auto& [prop, ms] : sig.procedures)
        for (const auto& mid : ms)
            if (!procedure_contexts.count(mid))
                throw InputError("property '" + prop + "' references procedure '" + mid +
                                 "' without declared mu-contexts");
    if (lattice.declared) {
        for (const auto& prop : sig.properties)
            if (!lattice.ortho.count(prop))
                throw InputError("declared lattice misses the orthocomplement of '" + prop + "'");
        for (const auto& [a, b] : lattice.ortho) {
            if (!sig.is_property(a) || !sig.is_property(b))
                throw InputError("lattice ortho entry (" + a + ", " + b +
                                 ") names an unknown property");
            if (lattice.ortho.at(b) != a)
                throw InputError("lattice ortho map is not involutive at '" + a + "'");
        }
    }
}

Rational cond_prob(const Wff& a, const Wff& b, const MuContextModel& m) {
    Rational mb = m.base.measure(extension(b, m.base));
    if (mb == 0)
        throw PreconditionError("conditioning wff '" + print(b) +
                                "' has zero probability measure");
    Rational mab = m.base.measure(extension(a, m.base).intersect(extension(b, m.base)));
    return mab / mb;
}

namespace {

void reject_plain_properties(const Wff& w, const MuContextModel& m) {
    for (const Wff* a : atoms_of(w))
        if (a->kind == Wff::Kind::property_atom && m.signature().is_property(a->name))
            throw InputError("plain property atom '" + a->name +
                             "' is not part of the contextual language");
}

} // namespace

bool testable(const Wff& w, const MuContextModel& m) {
    reject_plain_properties(w, m);
    auto props = contextual_properties_of(w);
    if (props.empty()) return true;
    if (contexts_of(w).size() > 1) return false;
    return !m.signature().shared_procedures(props).empty();
}

bool jointly_testable(const Wff& a, const Wff& b, const MuContextModel& m) {
    WffPtr conj =
        Wff::conjunction_of(std::make_shared<const Wff>(a), std::make_shared<const Wff>(b));
    return testable(*conj, m);
}

bool compatible(const std::string& e, const std::string& f, const MuContextModel& m) {
    if (!m.signature().is_property(e)) throw InputError("unknown property '" + e + "'");
    if (!m.signature().is_property(f)) throw InputError("unknown property '" + f + "'");
    return !m.signature().shared_procedures({e, f}).empty();
}

ProbabilityReport mean_cond_prob(const Wff& a, const Wff& b, const MuContextModel& m) {
    if (!jointly_testable(a, b, m))
        throw PreconditionError("wffs '" + print(a) + "' and '" + print(b) +
                                "' are not jointly testable");
    std::vector<std::string> props = contextual_properties_of(a);
    for (const auto& p : contextual_properties_of(b)) props.push_back(p);
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());

    ProbabilityReport report;
    if (props.empty()) {
        report.value = cond_prob(a, b, m);
        report.spread = 0;
        return report;
    }

    for (const auto& mid : m.signature().shared_procedures(props)) {
        const ProcedureContexts& pc = m.procedure_contexts.at(mid);
        Rational avg = 0;
        for (const auto& ctx : pc.contexts) {
            WffPtr a_ctx = rebind_contexts(a, ctx);
            WffPtr b_ctx = rebind_contexts(b, ctx);
            Rational mb = m.base.measure(extension(*b_ctx, m.base));
            if (mb == 0)
                throw PreconditionError("conditioning wff '" + print(*b_ctx) +
                                        "' has zero measure in mu-context '" + ctx +
                                        "' of procedure '" + mid + "'");
            avg += pc.q.at(ctx) * cond_prob(*a_ctx, *b_ctx, m);
        }
        report.per_procedure.emplace(mid, avg);
    }

    report.value = report.per_procedure.begin()->second;
    Rational lo = report.value, hi = report.value;
    for (const auto& [_, v] : report.per_procedure) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    report.spread = hi - lo;
    report.tprime_ok = report.spread <= m.spread_tolerance;
    return report;
}

ProbabilityReport q_probability(const std::string& property_id, const std::string& state_id,
                                const MuContextModel& m) {
    const Signature& sig = m.signature();
    if (!sig.is_property(property_id)) throw InputError("unknown property '" + property_id + "'");
    if (!sig.is_state(state_id)) throw InputError("unknown state '" + state_id + "'");
    const auto& procs = sig.procedures.at(property_id);
    const auto& contexts = m.procedure_contexts.at(procs.front()).contexts;
    WffPtr a = Wff::contextual(property_id, contexts.front()); // rebound per context by the mean
    WffPtr b = Wff::state(state_id);
    return mean_cond_prob(*a, *b, m);
}

GeneralizedMeasureReport generalized_measure_check(const MuContextModel& m) {
    if (!m.lattice.declared)
        throw InputError("model declares no property lattice to check against");
    const Signature& sig = m.signature();
    GeneralizedMeasureReport report;

    std::vector<std::string> states;
    for (const auto& s : sig.states)
        if (m.base.measure(m.base.extension_of_atom(s)) > 0) states.push_back(s);
    if (states.empty()) throw PreconditionError("no state has nonzero measure");

    auto add_check = [&](std::string name, bool pass, std::string witness) {
        report.all_pass = report.all_pass && pass;
        report.checks.push_back({std::move(name), pass, std::move(witness)});
    };

    bool means_ok = true;
    std::string means_witness;
    for (const auto& e : sig.properties) {
        for (const auto& s : states) {
            ProbabilityReport r = q_probability(e, s, m);
            if (!r.tprime_ok && means_ok) {
                means_ok = false;
                means_witness = "P_" + s + "(" + e + ") spread " + to_string(r.spread);
            }
            report.q_prob[e][s] = r.value;
        }
    }
    add_check("procedure-independent means", means_ok, means_witness);

    auto leq = [&](const std::string& e, const std::string& f) {
        for (const auto& s : states)
            if (report.q_prob.at(e).at(s) > report.q_prob.at(f).at(s)) return false;
        return true;
    };

    // Unit and complement laws.
    {
        bool pass = !m.lattice.top.empty();
        std::string witness = pass ? "" : "no top element declared";
        if (pass)
            for (const auto& s : states)
                if (report.q_prob.at(m.lattice.top).at(s) != 1) {
                    pass = false;
                    witness = "P_" + s + "(" + m.lattice.top + ") != 1";
                    break;
                }
        add_check("unit", pass, witness);
    }
    {
        bool pass = true;
        std::string witness;
        for (const auto& [e, o] : m.lattice.ortho) {
            for (const auto& s : states)
                if (report.q_prob.at(o).at(s) != 1 - report.q_prob.at(e).at(s)) {
                    pass = false;
                    witness = "P_" + s + "(" + o + ") != 1 - P_" + s + "(" + e + ")";
                    break;
                }
            if (!pass) break;
        }
        add_check("orthocomplement", pass, witness);
    }

    // Declared structure against the computed preorder.
    {
        bool pass = true;
        std::string witness;
        for (const auto& e : sig.properties) {
            for (const auto& f : sig.properties)
                if (leq(e, f) && !leq(m.lattice.ortho.at(f), m.lattice.ortho.at(e))) {
                    pass = false;
                    witness = "ortho not antitone on (" + e + ", " + f + ")";
                    break;
                }
            if (!pass) break;
        }
        add_check("ortho antitone", pass, witness);
    }
    {
        bool pass = true;
        std::string witness;
        for (const auto& t : m.lattice.meets)
            if (!leq(t.value, t.a) || !leq(t.value, t.b)) {
                pass = false;
                witness = "declared meet " + t.value + " of (" + t.a + ", " + t.b +
                          ") is not a lower bound";
                break;
            }
        if (pass)
            for (const auto& t : m.lattice.joins)
                if (!leq(t.a, t.value) || !leq(t.b, t.value)) {
                    pass = false;
                    witness = "declared join " + t.value + " of (" + t.a + ", " + t.b +
                              ") is not an upper bound";
                    break;
                }
        add_check("declared bounds consistent with computed preorder", pass, witness);
    }

    // Additivity on declared disjoint joins.
    {
        bool pass = true;
        std::string witness;
        for (const auto& t : m.lattice.joins) {
            if (!leq(t.a, m.lattice.ortho.at(t.b))) continue; // not a disjoint pair
            for (const auto& s : states) {
                if (report.q_prob.at(t.value).at(s) !=
                    report.q_prob.at(t.a).at(s) + report.q_prob.at(t.b).at(s)) {
                    pass = false;
                    witness = "(" + s + ", " + t.a + ", " + t.b + ")";
                    break;
                }
            }
            if (!pass) break;
        }
        add_check("additivity on disjoint joins", pass, witness);
    }

    // Order structure and its classification.
    const std::size_t n = sig.properties.size();
    report.property_order.labels = sig.properties;
    report.property_order.leq.assign(n, std::vector<bool>(n, false));
    report.property_order.ortho.assign(n, -1);
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < n; ++i) index[sig.properties[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            report.property_order.leq[i][j] = leq(sig.properties[i], sig.properties[j]);
        report.property_order.ortho[i] = index.at(m.lattice.ortho.at(sig.properties[i]));
    }
    report.diagnostics = lattice_diagnostics(report.property_order);
    return report;
}

namespace {

Rational stage_two(const std::string& e, const ObjectSet& post, const MuContextModel& m) {
    const std::string mid = m.signature().procedures.at(e).front();
    const ProcedureContexts& pc = m.procedure_contexts.at(mid);
    Rational post_measure = m.base.measure(post);
    Rational acc = 0;
    for (const auto& ctx : pc.contexts) {
        const ObjectSet& e_ext = m.base.extension_of_atom(e + "[" + ctx + "]");
        acc += pc.q.at(ctx) * (m.base.measure(e_ext.intersect(post)) / post_measure);
    }
    return acc;
}

} // namespace

ConditionalQProb conditional_q_prob(const std::string& e, const std::string& f,
                                    const std::string& state_id, const MuContextModel& m,
                                    const SuccessiveMeasurementOptions& options) {
    const Signature& sig = m.signature();
    if (!sig.is_property(e)) throw InputError("unknown property '" + e + "'");
    if (!sig.is_property(f)) throw InputError("unknown property '" + f + "'");
    if (!sig.is_state(state_id)) throw InputError("unknown state '" + state_id + "'");

    const ObjectSet& state_ext = m.base.extension_of_atom(state_id);
    if (m.base.measure(state_ext) == 0)
        throw PreconditionError("state '" + state_id + "' has zero measure");

    const std::string mid_f = sig.procedures.at(f).front();
    const ProcedureContexts& pc_f = m.procedure_contexts.at(mid_f);

    ConditionalQProb out;
    if (options.shared_context_draw) {
        const std::string mid_e = sig.procedures.at(e).front();
        const ProcedureContexts& pc_e = m.procedure_contexts.at(mid_e);
        if (pc_e.contexts != pc_f.contexts)
            throw PreconditionError(
                "shared context draw requires both procedures to range over the same mu-contexts");
        Rational total_q = 0, acc = 0;
        for (const auto& ctx : pc_f.contexts) {
            ObjectSet post =
                m.base.extension_of_atom(f + "[" + ctx + "]").intersect(state_ext);
            if (post.empty()) continue;
            const ObjectSet& e_ext = m.base.extension_of_atom(e + "[" + ctx + "]");
            acc += pc_f.q.at(ctx) * (m.base.measure(e_ext.intersect(post)) / m.base.measure(post));
            total_q += pc_f.q.at(ctx);
        }
        if (total_q == 0)
            throw PreconditionError("post-selection on '" + f + "' is empty in every mu-context");
        out.value = acc / total_q;
    } else {
        Rational total_q = 0, acc = 0;
        for (const auto& ctx : pc_f.contexts) {
            ObjectSet post =
                m.base.extension_of_atom(f + "[" + ctx + "]").intersect(state_ext);
            if (post.empty() || pc_f.q.at(ctx) == 0) continue;
            acc += pc_f.q.at(ctx) * stage_two(e, post, m);
            total_q += pc_f.q.at(ctx);
        }
        if (total_q == 0)
            throw PreconditionError("post-selection on '" + f + "' is empty in every mu-context");
        out.value = acc / total_q;
    }

    // Bayes comparator P_S(E ∧ F) / P_S(F): quantum route through the
    // declared lattice meet, classical route through the same-context
    // conjunction wff.
    Rational p_f = q_probability(f, state_id, m).value;
    if (m.lattice.declared && m.lattice.meet_of(e, f) && p_f != 0) {
        out.comparator = q_probability(*m.lattice.meet_of(e, f), state_id, m).value / p_f;
        out.comparator_route = "lattice-meet";
    } else {
        auto shared = sig.shared_procedures({e, f});
        if (!shared.empty() && p_f != 0) {
            const std::string ctx0 = m.procedure_contexts.at(shared.front()).contexts.front();
            WffPtr conj = Wff::conjunction_of(Wff::contextual(e, ctx0), Wff::contextual(f, ctx0));
            out.comparator = mean_cond_prob(*conj, *Wff::state(state_id), m).value / p_f;
            out.comparator_route = "conjunction";
        } else {
            out.comparator_route = "unavailable";
        }
    }
    if (out.comparator) {
        Rational gap = out.value - *out.comparator;
        out.bayes_gap = gap < 0 ? -gap : gap;
    }
    return out;
}

SynthesisResult born_model_synthesize(const HilbertSpace& hs,
                                      const std::map<std::string, QuantumState>& states,
                                      const std::map<std::string, Projection>& properties,
                                      int resolution, std::optional<double> require_tolerance) {
    if (states.empty() || properties.empty())
        throw InputError("synthesis needs at least one state and one property");
    if (resolution < 1) throw InputError("resolution must be positive");
    const int R = resolution;

    int width = 1;
    for (int v = R - 1; v >= 10; v /= 10) ++width;
    auto pad = [&](int i) {
        std::string s = std::to_string(i);
        return std::string(width - s.size(), '0') + s;
    };

    Signature sig;
    for (int i = 0; i < R; ++i) sig.mu_contexts.push_back("c" + pad(i));
    for (const auto& [name, s] : states) {
        if (s.dim() != hs.dim) throw InputError("state '" + name + "' has the wrong dimension");
        sig.states.push_back(name);
    }
    for (const auto& [name, p] : properties) {
        if (p.dim() != hs.dim) throw InputError("property '" + name + "' has the wrong dimension");
        sig.properties.push_back(name);
        sig.procedures[name] = {"M_" + name};
    }

    // Orthocomplement partners share one membership layout so the complement
    // law holds exactly on the grid.
    std::map<std::string, std::string> partner;
    for (auto it = properties.begin(); it != properties.end(); ++it)
        for (auto jt = std::next(it); jt != properties.end(); ++jt)
            if (approx_equal(it->second.m, ortho(jt->second).m, hs.tol)) {
                partner[it->first] = jt->first;
                partner[jt->first] = it->first;
            }

    // Membership counts k on the 1/R grid.
    std::map<std::string, std::map<std::string, int>> k;
    double max_dev = 0.0;
    std::string worst;
    for (const auto& [pname, proj] : properties) {
        bool complement_of_done = partner.count(pname) && k.count(partner.at(pname));
        for (const auto& [sname, s] : states) {
            double b = born(s, proj, hs.tol);
            int ks = complement_of_done ? R - k.at(partner.at(pname)).at(sname)
                                        : static_cast<int>(std::llround(R * b));
            k[pname][sname] = ks;
            double dev = std::abs(static_cast<double>(ks) / R - b);
            if (dev > max_dev) {
                max_dev = dev;
                worst = pname + "," + sname;
            }
        }
    }
    if (require_tolerance && max_dev > *require_tolerance)
        throw InputError("resolution " + std::to_string(R) +
                         " cannot represent the Born probability of (" + worst +
                         ") within the requested tolerance; worst deviation " +
                         std::to_string(max_dev));

    MuContextModel model;
    sig.normalize();
    sig.validate();
    model.base.signature = sig;
    std::map<std::string, std::size_t> state_offset;
    for (const auto& [sname, _] : states) {
        state_offset[sname] = model.base.universe.size();
        for (int j = 0; j < R; ++j) model.base.universe.push_back(sname + "#" + pad(j));
    }
    const std::size_t n_obj = model.base.universe.size();
    for (std::size_t i = 0; i < n_obj; ++i) model.base.object_index[model.base.universe[i]] = i;
    model.base.weights.assign(n_obj, Rational(1, static_cast<long long>(n_obj)));
    model.base.uniform_weights = true;

    for (const auto& [sname, _] : states) {
        ObjectSet block(n_obj);
        for (int j = 0; j < R; ++j) block.set(state_offset[sname] + j);
        model.base.atom_extensions.emplace(sname, std::move(block));
    }
    for (const auto& [pname, _] : properties) {
        bool mirrored = partner.count(pname) && properties.find(partner.at(pname))->first < pname;
        for (int i = 0; i < R; ++i) {
            ObjectSet ext(n_obj);
            for (const auto& [sname, __] : states) {
                // The mirrored partner takes the set complement of the
                // partner's membership inside each state block.
                int ks = mirrored ? R - k.at(pname).at(sname) : k.at(pname).at(sname);
                for (int j = 0; j < R; ++j) {
                    bool inside = ((i - j) % R + R) % R < ks;
                    if (mirrored) inside = !inside;
                    if (inside) ext.set(state_offset[sname] + j);
                }
            }
            model.base.atom_extensions.emplace(pname + "[c" + pad(i) + "]", std::move(ext));
        }
    }
    model.base.validate();
    Rational qr(1, R);
    for (const auto& [pname, _] : properties) {
        ProcedureContexts pc;
        pc.macro_context = "C_M_" + pname;
        pc.contexts = model.signature().mu_contexts;
        for (const auto& c : pc.contexts) pc.q[c] = qr;
        model.procedure_contexts["M_" + pname] = std::move(pc);
    }

    // Declare the lattice realized inside the property set.
    if (partner.size() == properties.size()) {
        model.lattice.declared = true;
        model.lattice.ortho = partner;
        auto name_of = [&](const Matrix& mx) -> std::optional<std::string> {
            for (const auto& [n, p] : properties)
                if (approx_equal(p.m, mx, hs.tol)) return n;
            return std::nullopt;
        };
        for (const auto& [n, p] : properties) {
            if (approx_equal(p.m, identity_projection(hs.dim).m, hs.tol)) model.lattice.top = n;
            if (approx_equal(p.m, zero_projection(hs.dim).m, hs.tol)) model.lattice.bottom = n;
        }
        for (auto it = properties.begin(); it != properties.end(); ++it)
            for (auto jt = std::next(it); jt != properties.end(); ++jt) {
                if (auto g = name_of(meet(it->second, jt->second, hs.tol).m))
                    model.lattice.meets.push_back({it->first, jt->first, *g});
                if (auto g = name_of(join(it->second, jt->second, hs.tol).m))
                    model.lattice.joins.push_back({it->first, jt->first, *g});
            }
    }

    model.validate();
    return {std::move(model), max_dev, worst};
}

MuContextModel collapse_contexts(const MuContextModel& m) {
    const Signature& old_sig = m.signature();
    Signature sig;
    sig.states = old_sig.states;
    sig.properties = old_sig.properties;
    sig.mu_contexts = {"c_all"};
    for (const auto& p : sig.properties) sig.procedures[p] = {"M_all"};

    std::map<std::string, std::vector<std::string>> extensions;
    for (const auto& s : sig.states) {
        std::vector<std::string> ids;
        for (std::size_t i : m.base.extension_of_atom(s).members()) ids.push_back(m.base.universe[i]);
        extensions[s] = std::move(ids);
    }
    for (const auto& p : sig.properties) {
        // Freeze each property to the first mu-context of its first procedure.
        const std::string& mid = old_sig.procedures.at(p).front();
        const std::string& ctx = m.procedure_contexts.at(mid).contexts.front();
        std::vector<std::string> ids;
        for (std::size_t i : m.base.extension_of_atom(p + "[" + ctx + "]").members())
            ids.push_back(m.base.universe[i]);
        extensions[p + "[c_all]"] = std::move(ids);
    }

    std::map<std::string, Rational> weights;
    for (std::size_t i = 0; i < m.base.universe.size(); ++i)
        weights[m.base.universe[i]] = m.base.weights[i];

    MuContextModel out;
    out.base = ClassicalModel::make(sig, m.base.universe, std::move(extensions), std::move(weights));
    ProcedureContexts pc;
    pc.macro_context = "C_all";
    pc.contexts = {"c_all"};
    pc.q["c_all"] = 1;
    out.procedure_contexts["M_all"] = std::move(pc);
    out.spread_tolerance = m.spread_tolerance;
    out.validate();
    return out;
}

Rational mean_probability_measurement(const Wff& a, const Wff& b, const MuContextModel& m,
                                      std::size_t trials, unsigned long long seed) {
    if (trials < 1) throw PreconditionError("at least one trial is required");
    if (!jointly_testable(a, b, m))
        throw PreconditionError("wffs '" + print(a) + "' and '" + print(b) +
                                "' are not jointly testable");

    std::vector<std::string> props = contextual_properties_of(a);
    for (const auto& p : contextual_properties_of(b)) props.push_back(p);
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());

    std::mt19937_64 eng(seed);
    auto uniform01 = [&] { return (eng() >> 11) * 0x1.0p-53; };

    struct ContextTables {
        std::vector<std::size_t> objects; // members of ext(b@C)
        std::vector<double> cumulative;   // normalized weight prefix sums
        ObjectSet target;                 // ext(a@C)
    };

    std::vector<std::string> contexts;
    std::vector<double> context_cumulative;
    std::vector<ContextTables> tables;

    if (props.empty()) {
        contexts = {""};
        context_cumulative = {1.0};
    } else {
        const std::string mid = m.signature().shared_procedures(props).front();
        const ProcedureContexts& pc = m.procedure_contexts.at(mid);
        double acc = 0.0;
        for (const auto& c : pc.contexts) {
            contexts.push_back(c);
            acc += to_double(pc.q.at(c));
            context_cumulative.push_back(acc);
        }
        if (!context_cumulative.empty()) context_cumulative.back() = 1.0;
    }

    for (const auto& c : contexts) {
        WffPtr a_ctx = props.empty() ? std::make_shared<const Wff>(a) : rebind_contexts(a, c);
        WffPtr b_ctx = props.empty() ? std::make_shared<const Wff>(b) : rebind_contexts(b, c);
        ContextTables t;
        ObjectSet cond = extension(*b_ctx, m.base);
        Rational total = m.base.measure(cond);
        if (total == 0)
            throw PreconditionError("conditioning wff '" + print(*b_ctx) +
                                    "' has zero measure in mu-context '" + c + "'");
        const double total_d = to_double(total);
        double acc = 0.0;
        for (std::size_t i : cond.members()) {
            acc += to_double(m.base.weights[i]);
            t.objects.push_back(i);
            t.cumulative.push_back(acc / total_d);
        }
        if (!t.cumulative.empty()) t.cumulative.back() = 1.0;
        t.target = extension(*a_ctx, m.base);
        tables.push_back(std::move(t));
    }

    std::size_t successes = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        double rc = uniform01();
        std::size_t ci = std::upper_bound(context_cumulative.begin(), context_cumulative.end(), rc) -
                         context_cumulative.begin();
        if (ci >= contexts.size()) ci = contexts.size() - 1;
        const ContextTables& t = tables[ci];
        double ro = uniform01();
        std::size_t oi = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), ro) -
                         t.cumulative.begin();
        if (oi >= t.objects.size()) oi = t.objects.size() - 1;
        if (t.target.test(t.objects[oi])) ++successes;
    }
    return Rational(successes, trials);
}

} // namespace qlb
