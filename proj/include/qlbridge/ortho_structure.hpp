#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlbridge/classical_model.hpp"
#include "qlbridge/wff.hpp"

namespace qlb {

// A finite preordered set with a candidate orthocomplementation, the common
// shape of concrete logics, projection lattices viewed order-theoretically,
// and quotients of assertive-formula preorders.
struct OrthoStructure {
    std::vector<std::string> labels;
    std::vector<std::vector<bool>> leq; // leq[i][j] iff element i precedes j
    std::vector<int> ortho;             // index self-map

    std::size_t size() const { return labels.size(); }
    bool equivalent(std::size_t i, std::size_t j) const { return leq[i][j] && leq[j][i]; }
    void validate_shape() const; // square matrix, ortho a total self-map
};

struct OrthoViolation {
    std::string axiom; // "reflexivity" | "transitivity" | "involution" | "antitonicity"
    std::string witness;
};

// Checks that leq is a preorder, that x^⊥⊥ ≈ x, and that x ≺ y implies
// y^⊥ ≺ x^⊥. Returns every violation with a witness.
std::vector<OrthoViolation> weak_ortho_violations(const OrthoStructure& s);

struct QuotientResult {
    OrthoStructure structure;         // partial order on equivalence classes
    std::vector<int> class_of;        // original index -> class index
    std::vector<int> representative;  // class index -> original index
};

// Collapses mutual-preorder equivalence classes. Class ortho comes from the
// members' ortho; a class whose members disagree triggers InputError (ruled
// out for weak orthocomplementations by antitonicity).
QuotientResult quotient(const OrthoStructure& s);

struct LawCheck {
    bool holds = true;
    std::string witness;
};

struct LatticeDiagnostics {
    bool bounded_lattice = true;
    std::string bound_failure; // witness pair without meet/join, or missing 0/1
    LawCheck orthomodular;
    LawCheck distributive;
    bool boolean = false;
};

// Meet/join computed as greatest lower / least upper bounds inside the finite
// element list (after quotienting). Reports the orthomodular law, the
// distributive law, and whether the structure is a Boolean (distributive,
// complemented) ortholattice, each with witnesses on failure.
LatticeDiagnostics lattice_diagnostics(const OrthoStructure& s);

struct IsoResult {
    std::optional<std::vector<int>> mapping; // quotient class of A -> class of B
    std::string refutation;                  // set when no mapping exists
    std::size_t classes_a = 0;
    std::size_t classes_b = 0;
};

// Searches for an order- and ortho-preserving bijection between the
// quotients of A and B. Absence of an isomorphism is a normal result and
// comes with a refutation certificate (count mismatch, invariant mismatch,
// or exhausted search).
IsoResult order_isomorphic(const OrthoStructure& a, const OrthoStructure& b);

struct ConcreteLogic {
    OrthoStructure structure;              // elements are the verifiable wffs
    std::vector<WffPtr> elements;
    std::vector<OrthoViolation> violations; // weak-orthocomplementation failures
};

// Builds (phi_V, ≺, ⊥): the supplied verifiable wffs under the physical
// preorder of `m`, with `ortho` mapping each wff to its orthocomplement
// candidate (keyed and valued by canonical wff text). Axiom violations are
// returned as diagnostics; an ortho map that is not closed over phi_V is an
// InputError.
ConcreteLogic concrete_logic(const ClassicalModel& m, const std::vector<WffPtr>& phi_v,
                             const std::map<std::string, std::string>& ortho);

} // namespace qlb
