#include "qlbridge/model_io.hpp"

#include <fstream>

#include "qlbridge/errors.hpp"

namespace qlb {

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("file '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

namespace {

std::vector<std::string> string_list(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

Rational rational_field(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw InputError("rational values must be strings like \"1/3\" or integers");
}

} // namespace

Signature signature_from_json(const Json& j) {
    Signature sig;
    if (!j.contains("states") || !j.contains("properties"))
        throw InputError("signature needs 'states' and 'properties'");
    sig.states = string_list(j.at("states"), "states");
    sig.properties = string_list(j.at("properties"), "properties");
    if (j.contains("contexts")) sig.mu_contexts = string_list(j.at("contexts"), "contexts");
    if (j.contains("procedures"))
        for (const auto& [prop, ms] : j.at("procedures").items())
            sig.procedures[prop] = string_list(ms, "procedures of " + prop);
    if (j.contains("observables"))
        for (const auto& [obs, dom] : j.at("observables").items())
            sig.observable_domains[obs] = string_list(dom, "domain of " + obs);
    if (j.contains("observable_tags"))
        for (const auto& [prop, tag] : j.at("observable_tags").items())
            sig.observable_tags[prop] = {tag.at("observable").get<std::string>(),
                                         string_list(tag.at("values"), "tag values of " + prop)};
    sig.normalize();
    return sig;
}

namespace {

ClassicalModel classical_model_common(const Json& j, bool require_procedures) {
    if (!j.contains("signature")) throw InputError("model file needs a 'signature' block");
    Signature sig = signature_from_json(j.at("signature"));
    if (!require_procedures)
        for (const auto& p : sig.properties)
            if (!sig.procedures.count(p)) sig.procedures[p] = {"M_" + p};

    std::vector<std::string> universe = string_list(j.at("universe"), "universe");
    std::map<std::string, std::vector<std::string>> extensions;
    if (j.contains("extensions"))
        for (const auto& [atom, ids] : j.at("extensions").items())
            extensions[atom] = string_list(ids, "extension of " + atom);

    std::map<std::string, Rational> weights;
    if (j.contains("weights"))
        for (const auto& [obj, w] : j.at("weights").items()) weights[obj] = rational_field(w);

    return ClassicalModel::make(std::move(sig), std::move(universe), std::move(extensions),
                                std::move(weights));
}

} // namespace

ClassicalModel classical_model_from_json(const Json& j) {
    return classical_model_common(j, /*require_procedures=*/false);
}

MuContextModel mu_context_model_from_json(const Json& j) {
    MuContextModel m;
    m.base = classical_model_common(j, /*require_procedures=*/true);
    if (!j.contains("procedure_contexts"))
        throw InputError("mu-context model needs a 'procedure_contexts' block");
    for (const auto& [mid, block] : j.at("procedure_contexts").items()) {
        ProcedureContexts pc;
        pc.macro_context = block.value("macro_context", "C_" + mid);
        pc.contexts = string_list(block.at("contexts"), "contexts of " + mid);
        for (const auto& [ctx, qv] : block.at("q").items()) pc.q[ctx] = rational_field(qv);
        m.procedure_contexts[mid] = std::move(pc);
    }
    if (j.contains("lattice")) {
        const Json& lat = j.at("lattice");
        m.lattice.declared = true;
        m.lattice.top = lat.value("top", "");
        m.lattice.bottom = lat.value("bottom", "");
        if (lat.contains("ortho"))
            for (const auto& [a, b] : lat.at("ortho").items())
                m.lattice.ortho[a] = b.get<std::string>();
        auto triples = [](const Json& arr, std::vector<LatticeTriple>& out) {
            for (const auto& t : arr)
                out.push_back({t.at("a").get<std::string>(), t.at("b").get<std::string>(),
                               t.at("value").get<std::string>()});
        };
        if (lat.contains("meets")) triples(lat.at("meets"), m.lattice.meets);
        if (lat.contains("joins")) triples(lat.at("joins"), m.lattice.joins);
    }
    if (j.contains("spread_tolerance"))
        m.spread_tolerance = rational_field(j.at("spread_tolerance"));
    m.validate();
    return m;
}

Json mu_context_model_to_json(const MuContextModel& m) {
    Json j;
    const Signature& sig = m.signature();
    j["signature"]["states"] = sig.states;
    j["signature"]["properties"] = sig.properties;
    j["signature"]["contexts"] = sig.mu_contexts;
    for (const auto& [prop, ms] : sig.procedures) j["signature"]["procedures"][prop] = ms;
    j["universe"] = m.base.universe;
    if (!m.base.uniform_weights) {
        Json w = Json::object();
        for (std::size_t i = 0; i < m.base.universe.size(); ++i)
            w[m.base.universe[i]] = to_string(m.base.weights[i]);
        j["weights"] = std::move(w);
    }
    Json ext = Json::object();
    for (const auto& [atom, set] : m.base.atom_extensions) {
        std::vector<std::string> ids;
        for (std::size_t i : set.members()) ids.push_back(m.base.universe[i]);
        ext[atom] = std::move(ids);
    }
    j["extensions"] = std::move(ext);
    for (const auto& [mid, pc] : m.procedure_contexts) {
        Json block;
        block["macro_context"] = pc.macro_context;
        block["contexts"] = pc.contexts;
        Json q = Json::object();
        for (const auto& [ctx, v] : pc.q) q[ctx] = to_string(v);
        block["q"] = std::move(q);
        j["procedure_contexts"][mid] = std::move(block);
    }
    if (m.lattice.declared) {
        Json lat;
        if (!m.lattice.top.empty()) lat["top"] = m.lattice.top;
        if (!m.lattice.bottom.empty()) lat["bottom"] = m.lattice.bottom;
        Json ortho = Json::object();
        for (const auto& [a, b] : m.lattice.ortho) ortho[a] = b;
        lat["ortho"] = std::move(ortho);
        auto triples = [](const std::vector<LatticeTriple>& ts) {
            Json arr = Json::array();
            for (const auto& t : ts) arr.push_back({{"a", t.a}, {"b", t.b}, {"value", t.value}});
            return arr;
        };
        lat["meets"] = triples(m.lattice.meets);
        lat["joins"] = triples(m.lattice.joins);
        j["lattice"] = std::move(lat);
    }
    j["spread_tolerance"] = to_string(m.spread_tolerance);
    return j;
}

namespace {

Matrix matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw InputError(what + ": expected a matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols) throw InputError(what + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& cell = j.at(r).at(c);
            if (cell.is_array()) {
                if (cell.size() != 2) throw InputError(what + ": complex entries are [re, im]");
                m(r, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
            } else {
                m(r, c) = std::complex<double>(cell.get<double>(), 0.0);
            }
        }
    }
    return m;
}

Vector vector_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw InputError(what + ": expected a vector");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& cell = j.at(i);
        if (cell.is_array()) {
            if (cell.size() != 2) throw InputError(what + ": complex entries are [re, im]");
            v(i) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
        } else {
            v(i) = std::complex<double>(cell.get<double>(), 0.0);
        }
    }
    return v;
}

} // namespace

HilbertBundle hilbert_bundle_from_json(const Json& j) {
    HilbertBundle b;
    b.space.dim = j.at("dim").get<int>();
    b.space.tol = j.value("tolerance", 1e-9);
    if (j.contains("elements"))
        for (const auto& [name, mat] : j.at("elements").items()) {
            Projection p{matrix_from_json(mat, "element '" + name + "'")};
            if (p.dim() != b.space.dim)
                throw InputError("element '" + name + "' has the wrong dimension");
            p.validate(b.space.tol);
            b.elements[name] = std::move(p);
        }
    if (j.contains("states"))
        for (const auto& [name, st] : j.at("states").items()) {
            QuantumState s;
            if (st.contains("vector"))
                s = QuantumState::pure(vector_from_json(st.at("vector"), "state '" + name + "'"));
            else
                s = QuantumState{matrix_from_json(st.at("density"), "state '" + name + "'")};
            if (s.dim() != b.space.dim)
                throw InputError("state '" + name + "' has the wrong dimension");
            s.validate(b.space.tol);
            b.states[name] = std::move(s);
        }
    return b;
}

ObservableConstraintSystem constraint_system_from_json(const Json& j) {
    ObservableConstraintSystem sys;
    for (const auto& o : j.at("observables")) {
        Observable obs;
        obs.id = o.at("id").get<std::string>();
        for (const auto& v : o.at("domain")) obs.domain.push_back(v.get<long long>());
        sys.observables.push_back(std::move(obs));
    }
    for (const auto& c : j.at("contexts"))
        sys.contexts.push_back({c.at("id").get<std::string>(),
                                string_list(c.at("observables"), "context observables")});
    for (const auto& l : j.at("laws")) {
        Law law;
        law.id = l.value("id", "law" + std::to_string(sys.laws.size()));
        law.context = l.at("context").get<std::string>();
        law.observables = string_list(l.at("observables"), "law observables");
        std::string type = l.at("type").get<std::string>();
        if (type == "sum")
            law.form = Law::Form::sum;
        else if (type == "product")
            law.form = Law::Form::product;
        else if (type == "table")
            law.form = Law::Form::table;
        else
            throw InputError("law '" + law.id + "' has unknown type '" + type + "'");
        if (law.form == Law::Form::table) {
            for (const auto& row : l.at("allowed")) {
                std::vector<long long> tuple;
                for (const auto& v : row) tuple.push_back(v.get<long long>());
                law.allowed.push_back(std::move(tuple));
            }
        } else {
            law.target = l.at("target").get<long long>();
        }
        sys.laws.push_back(std::move(law));
    }
    sys.validate();
    return sys;
}

} // namespace qlb
