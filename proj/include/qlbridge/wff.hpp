#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qlbridge/signature.hpp"

namespace qlb {

// Which alphabet a formula is read against. The basic alphabet has state
// and plain property predicates and admits implication; the contextual
// alphabet replaces plain properties with contextual ones and drops
// implication.
enum class Alphabet { basic, contextual };

struct Wff;
using WffPtr = std::shared_ptr<const Wff>;

// Immutable formula tree over monadic predicates applied to the single
// individual variable x.
struct Wff {
    enum class Kind {
        state_atom,      // S(x)
        property_atom,   // E(x)
        contextual_atom, // E[c](x)
        negation,
        conjunction,
        disjunction,
        implication,
    };

    Kind kind;
    std::string name;    // predicate id for atoms
    std::string context; // mu-context id for contextual atoms
    WffPtr left;
    WffPtr right;

    bool is_atom() const {
        return kind == Kind::state_atom || kind == Kind::property_atom ||
               kind == Kind::contextual_atom;
    }

    static WffPtr state(std::string id);
    static WffPtr property(std::string id);
    static WffPtr contextual(std::string property_id, std::string context_id);
    static WffPtr negation_of(WffPtr w);
    static WffPtr conjunction_of(WffPtr a, WffPtr b);
    static WffPtr disjunction_of(WffPtr a, WffPtr b);
    static WffPtr implication_of(WffPtr a, WffPtr b);
};

bool structurally_equal(const Wff& a, const Wff& b);

// Canonical key for an atom node: "S1", "E1", "E1[c1]". Extension maps in
// classical models are indexed by these keys.
std::string atom_key(const Wff& atom);

// Canonical fully parenthesized rendering; parse(print(w)) == w.
std::string print(const Wff& w);

// Parses `text` against the grammar
//   wff  := atom | "~" wff | "(" wff bin wff ")" | wff bin wff
//   bin  := "&" | "|" | "->"
//   atom := ident "(" "x" ")" | ident "[" ident "]" "(" "x" ")"
// with precedence ~ > & > | > -> and left-associative binary connectives.
// Parentheses are accepted exactly around binary applications. Identifiers
// must resolve in `sig`; the alphabet flag rejects implication and plain
// property atoms in the contextual alphabet, and contextual atoms in the
// basic alphabet.
WffPtr parse(const std::string& text, const Signature& sig, Alphabet alphabet);

struct FragmentInfo {
    bool property_only = true;  // no state atom occurs
    bool has_contextual = false;
    std::map<std::string, int> atom_counts; // atom key -> multiplicity
};

FragmentInfo fragment_of(const Wff& w);

// All atom subtrees, left to right, duplicates included.
std::vector<const Wff*> atoms_of(const Wff& w);

// Distinct property ids occurring in contextual atoms, sorted.
std::vector<std::string> contextual_properties_of(const Wff& w);

// Distinct mu-context ids occurring in contextual atoms, sorted.
std::vector<std::string> contexts_of(const Wff& w);

// Copy of `w` with every contextual atom rebound to `context_id`.
WffPtr rebind_contexts(const Wff& w, const std::string& context_id);

} // namespace qlb
