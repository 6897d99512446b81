#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlbridge/classical_model.hpp"
#include "qlbridge/hilbert.hpp"
#include "qlbridge/ortho_structure.hpp"
#include "qlbridge/rational.hpp"
#include "qlbridge/wff.hpp"

namespace qlb {

// The mu-contexts underlying one macroscopic measurement procedure, with
// their probability distribution.
struct ProcedureContexts {
    std::string macro_context;
    std::vector<std::string> contexts;
    std::map<std::string, Rational> q;
};

struct LatticeTriple {
    std::string a, b, value;
};

// Optional declared order structure on the property set: orthocomplement
// map plus named meets/joins. Used by the generalized-measure checks and as
// the quantum route of the Bayes comparator.
struct PropertyLatticeSpec {
    bool declared = false;
    std::string top, bottom;
    std::map<std::string, std::string> ortho;
    std::vector<LatticeTriple> meets;
    std::vector<LatticeTriple> joins;

    std::optional<std::string> meet_of(const std::string& a, const std::string& b) const;
    std::optional<std::string> join_of(const std::string& a, const std::string& b) const;
};

struct MuContextModel {
    ClassicalModel base;
    std::map<std::string, ProcedureContexts> procedure_contexts;
    PropertyLatticeSpec lattice;
    Rational spread_tolerance = Rational(1, 1000000000);

    const Signature& signature() const { return base.signature; }
    void validate() const;
};

// mu-contextual conditional probability: measure(ext(a) ∩ ext(b)) /
// measure(ext(b)). The conditioning wff must have nonzero measure.
Rational cond_prob(const Wff& a, const Wff& b, const MuContextModel& m);

// A wff is testable when the properties occurring in it share a measurement
// procedure and are bound to one common mu-context, or, conventionally, when
// no contextual property occurs in it.
bool testable(const Wff& w, const MuContextModel& m);

// Joint testability of a and b: their conjunction is testable.
bool jointly_testable(const Wff& a, const Wff& b, const MuContextModel& m);

// E k F: the two properties share at least one measurement procedure.
// Reflexive and symmetric, generally not transitive.
bool compatible(const std::string& e, const std::string& f, const MuContextModel& m);

struct ProbabilityReport {
    Rational value;
    std::map<std::string, Rational> per_procedure;
    Rational spread;  // max - min over shared procedures
    bool tprime_ok = true;

    double value_as_double() const { return to_double(value); }
};

// Mean conditional probability: for each procedure shared by all properties
// of the pair, the q-weighted average over its mu-contexts of
// cond_prob(a@C, b@C), where @C rebinds every contextual atom to C. The
// report carries the per-procedure values and their spread; a spread above
// the model tolerance marks the average as procedure-dependent.
ProbabilityReport mean_cond_prob(const Wff& a, const Wff& b, const MuContextModel& m);

// Q-probability of property E in state S: the mean conditional probability
// of E bound to a running context, given S(x).
ProbabilityReport q_probability(const std::string& property_id, const std::string& state_id,
                                const MuContextModel& m);

struct MeasureCheck {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct GeneralizedMeasureReport {
    std::vector<MeasureCheck> checks;
    bool all_pass = true;
    OrthoStructure property_order; // computed preorder with declared ortho
    LatticeDiagnostics diagnostics;
    std::map<std::string, std::map<std::string, Rational>> q_prob; // property -> state -> value
};

// Verifies that S ↦ P_S is a generalized probability measure on the declared
// property lattice: unit on top, complement via the ortho map, additivity on
// declared disjoint joins, and consistency of the declared structure with
// the preorder computed from the Q-probabilities (E precedes F when
// P_S(E) <= P_S(F) for every state). Ends with the Boolean/non-Boolean
// classification of the property order.
GeneralizedMeasureReport generalized_measure_check(const MuContextModel& m);

struct SuccessiveMeasurementOptions {
    // When set, both stages use one shared context draw instead of
    // independent draws (requires the two procedures to range over the same
    // mu-contexts).
    bool shared_context_draw = false;
};

struct ConditionalQProb {
    Rational value;
    std::optional<Rational> comparator; // classical-Bayes comparator
    std::optional<Rational> bayes_gap;  // |value - comparator|
    std::string comparator_route;       // "lattice-meet" | "conjunction" | "unavailable"
};

// Conditional Q-probability of E given F and S via successive measurements:
// the first stage draws a mu-context C' for F and post-selects on
// ext(F_C') ∩ ext(S); the second draws C for E independently and evaluates
// p(E_C | F_C' ∧ S); the value is the q-weighted double average over the
// post-selectable contexts. The Bayes comparator P_S(E ∧ F) / P_S(F) uses
// the declared lattice meet when one names the pair, and otherwise falls
// back to the same-context conjunction wff when E and F are jointly
// testable; with neither available the gap is reported as unavailable.
ConditionalQProb conditional_q_prob(const std::string& e, const std::string& f,
                                    const std::string& state_id, const MuContextModel& m,
                                    const SuccessiveMeasurementOptions& options = {});

struct SynthesisResult {
    MuContextModel model;
    double max_deviation = 0.0; // worst |grid probability - Born probability|
    std::string worst_pair;
};

// Builds a finite mu-context model reproducing the Born probabilities of the
// given states and properties on a 1/resolution grid. One procedure per
// property; all procedures range over the same `resolution` uniformly
// weighted contexts; the universe holds `resolution` objects per state. An
// object (S, j) possesses E in context c_i exactly when (i - j) mod
// resolution falls below round(resolution * born(S, P_E)), so both the
// context draw and the object draw carry the outcome randomness.
// Orthocomplementary projection pairs get complementary memberships, and the
// meets/joins realized inside the property set are declared as the model's
// lattice when the orthocomplement map is total.
SynthesisResult born_model_synthesize(const HilbertSpace& hs,
                                      const std::map<std::string, QuantumState>& states,
                                      const std::map<std::string, Projection>& properties,
                                      int resolution,
                                      std::optional<double> require_tolerance = {});

// The classical-mechanics degeneracy: every procedure collapses to one
// shared procedure over a single mu-context (each property keeps the
// extension it had in its first context), making the compatibility relation
// total and every mean a plain conditional probability. The declared
// lattice is dropped; the collapsed model's order structure is the Boolean
// one of its extensions.
MuContextModel collapse_contexts(const MuContextModel& m);

// Monte-Carlo mean probability measurement: each trial draws a mu-context of
// the first shared procedure and an object from the weight distribution
// conditioned on b@C, and tests a@C. Deterministic for a fixed seed;
// converges to mean_cond_prob(a, b, m).
Rational mean_probability_measurement(const Wff& a, const Wff& b, const MuContextModel& m,
                                      std::size_t trials, unsigned long long seed);

} // namespace qlb
