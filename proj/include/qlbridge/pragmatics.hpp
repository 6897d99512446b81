#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qlbridge/hilbert.hpp"
#include "qlbridge/ortho_structure.hpp"
#include "qlbridge/wff.hpp"

namespace qlb {

struct AssertiveFormula;
using AfPtr = std::shared_ptr<const AssertiveFormula>;

// Assertive formulas: radical formulas under the assertion sign, combined by
// the pragmatic connectives. They carry justification values, not truth
// values.
struct AssertiveFormula {
    enum class Kind { assertion, N, K, A, C, E };

    Kind kind;
    WffPtr radical; // for assertions
    AfPtr left;
    AfPtr right;

    static AfPtr assertion(WffPtr radical);
    static AfPtr n(AfPtr d);
    static AfPtr k(AfPtr a, AfPtr b);
    static AfPtr a(AfPtr x, AfPtr y);
    static AfPtr c(AfPtr x, AfPtr y);
    static AfPtr e(AfPtr x, AfPtr y);
};

std::string print(const AssertiveFormula& d);

// Grammar:
//   af := "|-" "(" wff ")" | "N" af | "K(" af "," af ")" | "A(" af "," af ")"
//       | "C(" af "," af ")" | "E(" af "," af ")"
// Radicals are parsed against the basic alphabet of `sig`.
AfPtr parse_assertive(const std::string& text, const Signature& sig);

// Proof oracle for the quantum fragment: every property atom of a radical is
// bound to a projection, the admissible evaluation points are the pure
// states, and "empirically proved" means Born probability 1 (proved false:
// probability 0).
struct QuantumProofOracle {
    int dim = 2;
    double tol = 1e-9;
    std::map<std::string, Projection> bindings; // property id -> projection

    const Projection& binding(const std::string& property_id) const;
    void validate() const;
};

// Set of pure states at which a formula is justified. Closed-form value: a
// finite union of subspaces, each stored as a projection onto it.
//  - assertion of a radical: union over satisfying atom valuations of the
//    intersections of the corresponding ranges/kernels;
//  - N: orthocomplement of the span (provably never justifiable);
//  - K: pairwise intersections; A: set union;
//  - C / E: globally quantified, hence the empty or the full space.
struct JustificationSet {
    int dim = 0;
    std::vector<Matrix> members; // projections onto subspaces, canonical order

    bool contains(const Vector& pure_state, double tol) const;
    bool subset_of(const JustificationSet& other, double tol) const;
    Matrix span(double tol) const; // projection onto the span of all members
    bool is_empty() const { return members.empty(); }
};

JustificationSet justification_set(const AssertiveFormula& d, const QuantumProofOracle& oracle);

// Justification of `d` at the pure state `point`.
bool justify(const AssertiveFormula& d, const Vector& point, const QuantumProofOracle& oracle);

// d1 ≺ d2 over the analytic point family (all pure states): justification of
// d1 implies justification of d2 everywhere.
bool pragmatic_preorder(const AssertiveFormula& d1, const AssertiveFormula& d2,
                        const QuantumProofOracle& oracle);

// Same preorder decided over an explicit finite list of points; used to
// validate the analytic route by sampling.
bool pragmatic_preorder_sampled(const AssertiveFormula& d1, const AssertiveFormula& d2,
                                const std::vector<Vector>& points,
                                const QuantumProofOracle& oracle);

// Deterministic Haar-like sample of pure states (normalized complex
// Gaussians from a seeded generator).
std::vector<Vector> sample_pure_states(int dim, std::size_t count, unsigned long long seed);

struct QuantumFragmentStructure {
    OrthoStructure structure;                  // quotient classes
    std::vector<std::string> representatives;  // canonical formula per class
};

// Enumerates the assertive formulas over elementary property radicals up to
// `depth` applications of N, K and the derived A, quotients by the pragmatic
// equivalence, and returns the induced order with the N-induced ortho. The
// enumeration runs over distinct justification subspaces with a
// minimal-depth representative formula each, which realizes the same
// quotient without materializing the exponential formula list.
QuantumFragmentStructure quantum_fragment_structure(const QuantumProofOracle& oracle, int depth,
                                                    std::size_t budget = 4096);

} // namespace qlb
