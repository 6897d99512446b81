#pragma once

#include <map>
#include <string>

// Single-header nlohmann/json from vendor/.
#include "json.hpp"

#include "qlbridge/contextuality.hpp"
#include "qlbridge/hilbert.hpp"
#include "qlbridge/mu_context.hpp"

namespace qlb {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);

// Signature document: states, properties, contexts, procedures, optional
// observables and observable_tags.
Signature signature_from_json(const Json& j);

// Classical model: signature + universe + extensions + optional weights.
// Properties without declared procedures get a private placeholder
// procedure, which leaves the compatibility relation untouched.
ClassicalModel classical_model_from_json(const Json& j);

// Mu-context model: classical model plus procedure_contexts, optional
// lattice block and spread tolerance. Procedures must be declared
// explicitly here.
MuContextModel mu_context_model_from_json(const Json& j);

Json mu_context_model_to_json(const MuContextModel& m);

// Projection lattice file: dimension, tolerance, named elements as row-major
// matrices of [re, im] pairs, optional named states (vector or density).
struct HilbertBundle {
    HilbertSpace space;
    std::map<std::string, Projection> elements;
    std::map<std::string, QuantumState> states;
};

HilbertBundle hilbert_bundle_from_json(const Json& j);

ObservableConstraintSystem constraint_system_from_json(const Json& j);

} // namespace qlb
